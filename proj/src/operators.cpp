#include "expsamp/operators.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <limits>
#include <memory>
#include <optional>

namespace expsamp {

namespace {

const GaussLegendre& cached_rule(int order) {
  thread_local std::map<int, std::unique_ptr<GaussLegendre>> cache;
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussLegendre>(order);
  return *slot;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void require_x(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("evaluation point x must be positive and finite");
}

// Throws up front what the per-point evaluation could throw.
void validate_grid(const Kernel& kernel, const OperatorParams& params, std::span<const double> xs) {
  params.validate();
  if (xs.empty()) throw DomainError("evaluation grid must be non-empty");
  for (double x : xs) require_x(x);
  (void)index_window(kernel, params.truncation, params.w * std::log(xs.front()));
}

double sup_moment(const Kernel& kernel, int nu, const TruncationPolicy& policy) {
  const auto grid = moment_period_grid(256);
  return moment_report(kernel, nu, grid, policy).sup_absolute;
}

}  // namespace

void OperatorParams::validate() const {
  if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("w must be positive and finite");
  if (quadrature_order < 2) throw DomainError("quadrature order must be >= 2");
}

OperatorParams default_params(const Kernel& kernel, double w) {
  OperatorParams p;
  p.w = w;
  p.truncation = default_truncation(kernel);
  return p;
}

double classical_apply(const Kernel& kernel, const PiecewiseSignal& signal, const OperatorParams& params,
                       double x) {
  params.validate();
  require_x(x);
  const double w = params.w;
  const double center = w * std::log(x);
  const IndexWindow win = index_window(kernel, params.truncation, center);
  double sum = 0.0;
  for (long k = win.first; k <= win.last; ++k) {
    const double chi = kernel.at_log(center - static_cast<double>(k));
    if (chi == 0.0) continue;
    sum += chi * signal.at_log(static_cast<double>(k) / w);
  }
  return sum;
}

double kantorovich_apply(const Kernel& kernel, const PiecewiseSignal& signal, const OperatorParams& params,
                         double x) {
  params.validate();
  require_x(x);
  const double w = params.w;
  const double center = w * std::log(x);
  const IndexWindow win = index_window(kernel, params.truncation, center);
  const GaussLegendre& rule = cached_rule(params.quadrature_order);
  double sum = 0.0;
  for (long k = win.first; k <= win.last; ++k) {
    const double chi = kernel.at_log(center - static_cast<double>(k));
    if (chi == 0.0) continue;
    const double kd = static_cast<double>(k);
    sum += chi * w * exp_mean(signal, kd / w, (kd + 1.0) / w, rule);
  }
  return sum;
}

namespace {

// Local means of one cell range, shared by every grid point at a fixed w.
struct CellMeans {
  long first = 0;
  std::vector<double> means;
};

constexpr long kMaxCachedCells = 1L << 24;

std::optional<CellMeans> cell_means(const Kernel& kernel, const PiecewiseSignal& signal,
                                    const OperatorParams& params, std::span<const double> xs, bool parallel) {
  const double w = params.w;
  long lo = std::numeric_limits<long>::max();
  long hi = std::numeric_limits<long>::min();
  for (double x : xs) {
    const IndexWindow win = index_window(kernel, params.truncation, w * std::log(x));
    lo = std::min(lo, win.first);
    hi = std::max(hi, win.last);
  }
  if (hi < lo || hi - lo >= kMaxCachedCells) return std::nullopt;
  CellMeans c{lo, std::vector<double>(static_cast<std::size_t>(hi - lo + 1))};
  const long n = hi - lo + 1;
  std::exception_ptr failure;
#pragma omp parallel for schedule(static) if (parallel)
  for (long i = 0; i < n; ++i) {
    try {
      const double kd = static_cast<double>(lo + i);
      c.means[i] = exp_mean(signal, kd / w, (kd + 1.0) / w, cached_rule(params.quadrature_order));
    } catch (...) {
#pragma omp critical(expsamp_apply_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return c;
}

// Same summation order as kantorovich_apply, so results agree bitwise.
double apply_cached(const Kernel& kernel, const OperatorParams& params, const CellMeans& c, double x) {
  const double w = params.w;
  const double center = w * std::log(x);
  const IndexWindow win = index_window(kernel, params.truncation, center);
  double sum = 0.0;
  for (long k = win.first; k <= win.last; ++k) {
    const double chi = kernel.at_log(center - static_cast<double>(k));
    if (chi == 0.0) continue;
    sum += chi * w * c.means[static_cast<std::size_t>(k - c.first)];
  }
  return sum;
}

std::vector<double> apply_grid_impl(const Kernel& kernel, const PiecewiseSignal& signal,
                                    const OperatorParams& params, std::span<const double> xs, bool parallel) {
  validate_grid(kernel, params, xs);
  const auto cache = cell_means(kernel, signal, params, xs, parallel);
  const long n = static_cast<long>(xs.size());
  std::vector<double> out(xs.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = cache ? apply_cached(kernel, params, *cache, xs[i]) : kantorovich_apply(kernel, signal, params, xs[i]);
    } catch (...) {
#pragma omp critical(expsamp_apply_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace

std::vector<double> apply_on_grid(const Kernel& kernel, const PiecewiseSignal& signal,
                                  const OperatorParams& params, std::span<const double> xs) {
  return apply_grid_impl(kernel, signal, params, xs, true);
}

// Reference path for tests: one kantorovich_apply per point, no cell cache.
std::vector<double> apply_on_grid_serial(const Kernel& kernel, const PiecewiseSignal& signal,
                                         const OperatorParams& params, std::span<const double> xs) {
  validate_grid(kernel, params, xs);
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(kantorovich_apply(kernel, signal, params, x));
  return out;
}

std::vector<double> pointwise_errors(const Kernel& kernel, const PiecewiseSignal& signal,
                                     const OperatorParams& params, std::span<const double> xs) {
  std::vector<double> approx = apply_on_grid(kernel, signal, params, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) approx[i] = std::abs(signal(xs[i]) - approx[i]);
  return approx;
}

std::vector<double> guarded_grid(const Kernel& kernel, const PiecewiseSignal& signal, double w, double lo,
                                 double hi) {
  if (!(lo > 0.0) || !(hi > lo)) throw DomainError("guarded grid needs 0 < lo < hi");
  if (!(w > 0.0)) throw DomainError("w must be positive");
  const double radius = kernel.support_log_radius().value_or(1.0);
  const double guard = std::max(2.0, radius + 1.0) / w;
  const double span = std::log(hi / lo);
  const long count = static_cast<long>(std::ceil(512.0 * span / std::log(10.0))) + 1;
  std::vector<double> logs_bp;
  for (double bp : signal.breakpoints()) logs_bp.push_back(std::log(bp));
  std::vector<double> xs;
  xs.reserve(count);
  for (long i = 0; i < count; ++i) {
    const double t = std::log(lo) + span * static_cast<double>(i) / static_cast<double>(count - 1);
    bool near = false;
    for (double tb : logs_bp) near = near || std::abs(t - tb) < guard;
    if (!near) xs.push_back(std::exp(t));
  }
  return xs;
}

// ---------------------------------------------------------------------------

VoronovskayaResult voronovskaya_residual(const Kernel& kernel, const PiecewiseSignal& signal,
                                         const OperatorParams& params, double x) {
  MellinDerivativeSpec spec{1, ClosedForm{}};
  if (!signal.has_closed_form_derivatives()) spec.method = LogScaleFiniteDifference{};
  const double theta = mellin_derivative(signal, spec, x);
  const double approx = kantorovich_apply(kernel, signal, params, x);
  VoronovskayaResult r{};
  r.scaled_error = params.w * (approx - signal(x));
  r.half_theta = 0.5 * theta;
  r.residual = r.scaled_error - r.half_theta;
  r.moment_condition_fails = !kernel.first_moment_vanishes();
  return r;
}

ModulusBoundReport modulus_bound_check(const Kernel& kernel, const PiecewiseSignal& signal,
                                       const OperatorParams& params, std::span<const double> xs) {
  ModulusBoundReport r;
  r.xs.assign(xs.begin(), xs.end());
  r.errors = pointwise_errors(kernel, signal, params, xs);
  r.max_error = *std::max_element(r.errors.begin(), r.errors.end());
  r.m0 = sup_moment(kernel, 0, params.truncation);
  r.m1 = sup_moment(kernel, 1, params.truncation);
  r.lambda = r.m0 + r.m1;
  r.omega = log_modulus(signal, 1.0 / params.w, 8);
  r.bound = r.lambda * r.omega;
  // 1e-12 absorbs roundoff in I_w c = c when omega = 0.
  r.holds = r.max_error <= r.bound + 1e-12;
  r.window_dependent = kernel.decay() != Decay::Compact;
  return r;
}

RepresentationReport representation_decompose(const Kernel& kernel, const PiecewiseSignal& signal,
                                              const OperatorParams& params, int n, double x) {
  params.validate();
  require_x(x);
  if (n < 1) throw DomainError("Taylor order n must be >= 1");
  if (!signal.has_closed_form_derivatives()) {
    throw PolicyError("representation needs closed-form Mellin derivatives of '" + signal.name() +
                      "'; use a finite-difference MellinDerivativeSpec for pointwise values instead");
  }
  const double w = params.w;
  const double center = w * std::log(x);
  const IndexWindow win = index_window(kernel, params.truncation, center);
  const GaussLegendre& rule = cached_rule(params.quadrature_order);

  std::vector<double> logs_bp;
  for (double bp : signal.breakpoints()) logs_bp.push_back(std::log(bp));

  RepresentationReport r;
  r.n = n;
  std::vector<double> sampled(n, 0.0);
  double sup_theta_n = 0.0;
  std::vector<double> derivs(n);

  for (long k = win.first; k <= win.last; ++k) {
    const double chi = kernel.at_log(center - static_cast<double>(k));
    if (chi == 0.0) continue;
    const double a = static_cast<double>(k) / w;
    const double b = (static_cast<double>(k) + 1.0) / w;
    for (int j = 0; j < n; ++j) {
      derivs[j] = signal.mellin_derivative_at_log(j, a);
      sampled[j] += chi * derivs[j];
    }
    auto defect = [&](double u) {
      double p = 0.0;
      double pw = 1.0;
      for (int j = 0; j < n; ++j) {
        p += derivs[j] * pw / factorial(j);
        pw *= (u - a);
      }
      return signal.at_log(u) - p;
    };
    std::vector<double> cuts{a};
    for (double tb : logs_bp) {
      if (tb > a && tb < b) cuts.push_back(tb);
    }
    cuts.push_back(b);
    double cell = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) cell += rule.integrate(defect, cuts[i], cuts[i + 1]);
    r.remainder += chi * w * cell;

    constexpr int kSamples = 32;
    for (int s = 0; s <= kSamples; ++s) {
      const double u = a + (b - a) * s / kSamples;
      sup_theta_n = std::max(sup_theta_n, std::abs(signal.mellin_derivative_at_log(n, u)));
    }
  }
  r.terms.resize(n);
  for (int j = 0; j < n; ++j) r.terms[j] = sampled[j] / (factorial(j + 1) * std::pow(w, j));
  r.reconstruction = r.remainder;
  for (double t : r.terms) r.reconstruction += t;
  r.direct = kantorovich_apply(kernel, signal, params, x);
  r.remainder_bound =
      sup_theta_n * sup_moment(kernel, 0, params.truncation) / (factorial(n + 1) * std::pow(w, n));
  return r;
}

SaturationEstimate saturation_estimate(const Kernel& kernel, const PiecewiseSignal& signal,
                                       const OperatorParams& base, std::span<const double> ws,
                                       std::span<const double> xs) {
  if (ws.size() < 3) throw DomainError("saturation estimate needs at least 3 values of w");
  for (std::size_t i = 1; i < ws.size(); ++i) {
    if (!(ws[i] > ws[i - 1])) throw DomainError("w values must be strictly increasing");
  }
  if (xs.empty()) throw DomainError("saturation estimate needs evaluation points");
  SaturationEstimate est;
  est.ws.assign(ws.begin(), ws.end());
  for (double w : ws) {
    OperatorParams p = base;
    p.w = w;
    const auto errs = pointwise_errors(kernel, signal, p, xs);
    est.errors.push_back(*std::max_element(errs.begin(), errs.end()));
  }
  // A log-log fit is meaningless once any error sits at roundoff level.
  est.degenerate = std::any_of(est.errors.begin(), est.errors.end(), [](double e) { return e < 1e-14; });
  if (est.degenerate) return est;
  std::vector<double> lw;
  std::vector<double> le;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    lw.push_back(std::log(ws[i]));
    le.push_back(std::log(est.errors[i]));
  }
  const LinearFit fit = least_squares(lw, le);
  est.exponent = fit.slope;
  est.intercept = fit.intercept;
  return est;
}

}  // namespace expsamp
