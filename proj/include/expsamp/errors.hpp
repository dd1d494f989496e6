#pragma once

#include <stdexcept>
#include <string>

namespace expsamp {

// Argument outside the mathematical domain (x <= 0, order 0, alpha <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Truncation policy incompatible with the kernel, or no usable tail bound.
class PolicyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Finite-difference stencil touches a breakpoint.
class NonSmoothPoint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed kernel / signal / truncation spec string.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace expsamp
