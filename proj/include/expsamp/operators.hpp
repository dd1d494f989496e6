#pragma once

// Exponential sampling operators
//   (S_w f)(x) = sum_k chi(e^{-k} x^w) f(e^{k/w})
//   (I_w f)(x) = sum_k chi(e^{-k} x^w) w int_{k/w}^{(k+1)/w} f(e^u) du
// and the convergence diagnostics built on them.
//
// All sums run over k in ascending order, so every scalar result is
// independent of how grid evaluations are scheduled.

#include <span>
#include <string>
#include <vector>

#include "expsamp/kernel.hpp"
#include "expsamp/signal.hpp"

namespace expsamp {

struct OperatorParams {
  double w = 1.0;
  TruncationPolicy truncation = ExactSupport{};
  int quadrature_order = 16;

  void validate() const;
};

// Params with the kernel's default truncation.
OperatorParams default_params(const Kernel& kernel, double w);

double classical_apply(const Kernel& kernel, const PiecewiseSignal& signal, const OperatorParams& params,
                       double x);
double kantorovich_apply(const Kernel& kernel, const PiecewiseSignal& signal, const OperatorParams& params,
                         double x);

// Elementwise kantorovich_apply. OpenMP over xs; bitwise equal to the serial path.
std::vector<double> apply_on_grid(const Kernel& kernel, const PiecewiseSignal& signal,
                                  const OperatorParams& params, std::span<const double> xs);
std::vector<double> apply_on_grid_serial(const Kernel& kernel, const PiecewiseSignal& signal,
                                         const OperatorParams& params, std::span<const double> xs);

// |f(x) - I_w f(x)| for every x.
std::vector<double> pointwise_errors(const Kernel& kernel, const PiecewiseSignal& signal,
                                     const OperatorParams& params, std::span<const double> xs);

// 512 points per decade, log-uniform over [lo, hi], minus the points within
// max(2, r + 1)/w (log distance) of a breakpoint, r the kernel support radius.
std::vector<double> guarded_grid(const Kernel& kernel, const PiecewiseSignal& signal, double w, double lo,
                                 double hi);

// ---------------------------------------------------------------------------

struct VoronovskayaResult {
  // w [I_w f(x) - f(x)] - (theta f)(x) / 2
  double residual;
  double scaled_error;
  double half_theta;
  // Kernel's first moment does not vanish; the limit statement does not apply.
  bool moment_condition_fails;
};

VoronovskayaResult voronovskaya_residual(const Kernel& kernel, const PiecewiseSignal& signal,
                                         const OperatorParams& params, double x);

struct ModulusBoundReport {
  std::vector<double> xs;
  std::vector<double> errors;
  double max_error = 0.0;
  double m0 = 0.0;
  double m1 = 0.0;
  double lambda = 0.0;  // M_0 + M_1
  double omega = 0.0;   // omega(f, 1/w)
  double bound = 0.0;   // lambda * omega
  bool holds = false;
  bool window_dependent = false;
};

ModulusBoundReport modulus_bound_check(const Kernel& kernel, const PiecewiseSignal& signal,
                                       const OperatorParams& params, std::span<const double> xs);

struct RepresentationReport {
  int n = 0;
  // terms[j] = (S_w theta^j f)(x) / ((j+1)! w^j)
  std::vector<double> terms;
  double remainder = 0.0;
  double reconstruction = 0.0;
  double direct = 0.0;
  // ||theta^n f||_inf (over the cells in the window) * M_0 / ((n+1)! w^n)
  double remainder_bound = 0.0;
};

// Remainder computed from the Mellin-Taylor defect f(e^u) - P_{n-1,k}(u) integrated
// by quadrature on each cell; `direct` is I_w f(x) from exp_mean.
RepresentationReport representation_decompose(const Kernel& kernel, const PiecewiseSignal& signal,
                                              const OperatorParams& params, int n, double x);

struct SaturationEstimate {
  std::vector<double> ws;
  std::vector<double> errors;  // max_x |I_w f - f| per w
  double exponent = 0.0;
  double intercept = 0.0;
  bool degenerate = false;
};

// OLS slope of log(max_x |I_w f(x) - f(x)|) against log w. `base` supplies
// truncation and quadrature; its w is ignored.
SaturationEstimate saturation_estimate(const Kernel& kernel, const PiecewiseSignal& signal,
                                       const OperatorParams& base, std::span<const double> ws,
                                       std::span<const double> xs);

}  // namespace expsamp
