#pragma once

#include <span>
#include <vector>

namespace expsamp {

// n-point Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 2n-1.
class GaussLegendre {
 public:
  explicit GaussLegendre(int order);

  int order() const { return static_cast<int>(nodes_.size()); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  template <class F>
  double integrate(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      sum += weights_[i] * f(mid + half * nodes_[i]);
    }
    return half * sum;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

// Cosine integral Ci(y) = -int_y^inf cos(t)/t dt, y > 0. Ci(+inf) = 0.
double cosine_integral(double y);

// Ordinary least squares fit y = slope * x + intercept.
struct LinearFit {
  double slope;
  double intercept;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace expsamp
