#pragma once

// Exponential-sampling kernels chi: R+ -> R (Mellin B-splines and Mellin-Fejer),
// their discrete moments and the structural checks the convergence results rely on.
//
// Kernels are evaluated in log coordinates internally: chi(e^{-k} x^w) is
// at_log(w*log(x) - k), which avoids forming x^w for large w.

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "expsamp/errors.hpp"

namespace expsamp {

inline constexpr int kMaxBSplineOrder = 20;

struct MellinBSpline {
  int order;
};

struct MellinFejer {
  double alpha;
  double c;
};

enum class Decay { Compact, InverseSquareLog };

class Kernel {
 public:
  using Family = std::variant<MellinBSpline, MellinFejer>;

  static Kernel bspline(int order);
  static Kernel fejer(double alpha, double c);

  const Family& family() const { return family_; }
  bool is_bspline() const { return std::holds_alternative<MellinBSpline>(family_); }
  int bspline_order() const;

  // n/2 for B-splines, empty for Fejer.
  std::optional<double> support_log_radius() const;
  Decay decay() const;

  // chi(x), x > 0.
  double operator()(double x) const;
  // chi(e^t), any real t.
  double at_log(double t) const;

  // True when m_1(chi, u) = 0 for all u: B-splines of order >= 2.
  bool first_moment_vanishes() const;

  // Canonical spec string: "bspline:<n>" or "fejer:<alpha>:<c>".
  std::string spec() const;

 private:
  explicit Kernel(Family f) : family_(f) {}
  Family family_;
};

// sinc(v) = sin(pi v) / (pi v), sinc(0) = 1.
double sinc(double v);
// sin(pi v) with exact zeros at the integers.
double sin_pi(double v);

double eval_bspline(int order, double x);
double eval_fejer(double alpha, double c, double x);
double kernel_eval(const Kernel& kernel, double x);

// Log-coordinate evaluators; bspline_log(n, t) == eval_bspline(n, e^t).
double bspline_log(int order, double t);
double fejer_log(double alpha, double c, double t);

// M[chi](c + i t). B-spline: (sin(t/2)/(t/2))^n; Fejer: (1 - |t|/alpha)_+.
double mellin_transform_closed_form(const Kernel& kernel, double t);
// Same transform at t = 2*pi*cycles; exact at integer cycles.
double mellin_transform_cycles(const Kernel& kernel, double cycles);
// d/dt of the closed-form B-spline transform.
double bspline_transform_derivative(int order, double t);

// Quadrature of int_R e^{i t s} chi(e^s) ds over the compact log-support,
// split at the spline knots. Compact kernels only.
double mellin_transform_numeric(const Kernel& kernel, double t, int quadrature_order = 16);

// ---------------------------------------------------------------------------
// Truncation of the bilateral sums over k.

struct ExactSupport {};
struct WindowTerms {
  long half_width;
};
struct TailTolerance {
  double tol;
};

using TruncationPolicy = std::variant<ExactSupport, WindowTerms, TailTolerance>;

// Default: exact support for B-splines, TailTolerance(1e-6) for Fejer with
// c = 0 and a 1000-term window for c != 0.
TruncationPolicy default_truncation(const Kernel& kernel);
std::string truncation_spec(const TruncationPolicy& policy);

// Inclusive k-range for a sum of chi(e^{center - k}) terms, plus an upper
// bound on the sum of |chi| over the omitted k.
struct IndexWindow {
  long first;
  long last;
  double tail_bound;

  long size() const { return last - first + 1; }
};

IndexWindow index_window(const Kernel& kernel, const TruncationPolicy& policy, double center);

// Bound on sum_{|k - round(t)| > half_width} |chi(e^{t-k})| for Fejer with c = 0:
// 4 / (pi alpha (half_width - 1/2)). Infinite for c != 0 or half_width < 1.
double fejer_tail_bound(double alpha, double c, long half_width);
// Smallest half-width whose tail bound is <= tol.
long fejer_half_width_for(double alpha, double c, double tol);

// ---------------------------------------------------------------------------
// Discrete moments m_nu(chi,u) = sum_k chi(e^{-k} u) (k - log u)^nu and
// M_nu(chi,u) = sum_k |chi(e^{-k} u)| |k - log u|^nu.

struct MomentValue {
  double algebraic;
  double absolute;
  // Bound on omitted |chi| mass (nu = 0) or infinity (nu >= 1, non-compact).
  double tail_bound;
  bool window_dependent;
};

MomentValue discrete_moment(const Kernel& kernel, int nu, double u, const TruncationPolicy& policy);

struct MomentReport {
  int order = 0;
  std::vector<double> grid;
  std::vector<double> algebraic;
  std::vector<double> absolute;
  double sup_absolute = 0.0;
  bool window_dependent = false;
};

// OpenMP over grid points.
MomentReport moment_report(const Kernel& kernel, int nu, std::span<const double> grid,
                           const TruncationPolicy& policy);
// Sequential reference.
MomentReport moment_report_serial(const Kernel& kernel, int nu, std::span<const double> grid,
                                  const TruncationPolicy& policy);

// `count` points u = e^s, s uniform in [0, 1). Moments are 1-periodic in log u.
std::vector<double> moment_period_grid(int count);

// sum_k chi(e^{-k} x^w).
double partition_of_unity_check(const Kernel& kernel, double x, double w,
                                const TruncationPolicy& policy);

struct PoissonReport {
  int kmax = 0;
  // values[i] = M[chi](2 pi i k) with k = i - kmax.
  std::vector<double> values;
  double max_deviation = 0.0;
  bool derivative_checked = false;
  double max_derivative = 0.0;
};

PoissonReport poisson_condition_check(const Kernel& kernel, int kmax);

}  // namespace expsamp
