#pragma once

// Piecewise test signals f: R+ -> R with exact exponential means
// int_a^b f(e^u) du, Mellin derivatives (theta f)(x) = x f'(x), and the
// logarithmic modulus of continuity.

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "expsamp/errors.hpp"
#include "expsamp/quadrature.hpp"

namespace expsamp {

enum class PieceKind {
  Constant,    // v
  Log,         // log x
  Reciprocal,  // v / x
  CosOfX,      // cos x
  Zero,
};

// f(x) = formula on [from, to). `to` may be +infinity, `from` may be 0.
struct Piece {
  double from;
  double to;
  PieceKind kind;
  double value = 0.0;  // Constant: v; Reciprocal: scale
};

class PiecewiseSignal {
 public:
  // Pieces must be non-empty, ordered and disjoint. Outside every piece f = 0.
  PiecewiseSignal(std::vector<Piece> pieces, std::string name, bool closed_form_derivatives = true);

  const std::string& name() const { return name_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  // Finite positive piece endpoints, sorted and deduplicated.
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  bool has_closed_form_derivatives() const { return closed_form_; }
  // True when the signal is one constant over all of R+.
  bool is_constant() const;

  double operator()(double x) const;
  // f(e^u); pieces are located in log coordinates so huge |u| never overflows.
  double at_log(double u) const;

  // (theta^j f)(e^u) from the per-piece closed forms.
  double mellin_derivative_at_log(int order, double u) const;

 private:
  const Piece* find_piece(double u) const;

  std::vector<Piece> pieces_;
  std::vector<double> log_from_;
  std::vector<double> log_to_;
  std::vector<double> breakpoints_;
  std::string name_;
  bool closed_form_;
};

namespace signals {

// 0 on [1/2, 1), -2/x on [1, 4), 0 elsewhere.
PiecewiseSignal f1();
// 0 on [1/2, 1), -2/x on [1, inf).
PiecewiseSignal f1_extended();
// cos x on [1, 4), 0 elsewhere.
PiecewiseSignal f2();
// cos x on [1, inf), 0 on (0, 1).
PiecewiseSignal f2_extended();
PiecewiseSignal constant(double v);
PiecewiseSignal logarithm();

}  // namespace signals

double signal_eval(const PiecewiseSignal& signal, double x);

// int_a^b f(e^u) du. Closed forms for Constant/Log/Reciprocal pieces, Gauss-Legendre
// for CosOfX (switching to Ci differences once a sub-interval spans more than one
// period of cos). The interval is split at every log(breakpoint) inside (a, b).
double exp_mean(const PiecewiseSignal& signal, double a, double b, int quadrature_order);
double exp_mean(const PiecewiseSignal& signal, double a, double b, const GaussLegendre& rule);

struct ClosedForm {};
struct LogScaleFiniteDifference {
  double step = 1e-5;
};

struct MellinDerivativeSpec {
  int order = 1;
  std::variant<ClosedForm, LogScaleFiniteDifference> method = ClosedForm{};
};

double mellin_derivative(const PiecewiseSignal& signal, const MellinDerivativeSpec& spec, double x);

// Lower estimate of omega(f, delta) = sup{|f(x) - f(y)| : |log x - log y| <= delta}:
// the largest oscillation over windows of log-width delta among a lattice of
// 64 * grid_density points per decade, both one-sided limits at every breakpoint
// and the extrema of cos pieces, plus pairs at log-distance exactly delta inside
// one monotone piece. Non-decreasing in delta.
double log_modulus(const PiecewiseSignal& signal, double delta, int grid_density);

}  // namespace expsamp
