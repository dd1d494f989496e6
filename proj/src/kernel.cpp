#include "expsamp/kernel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

#include "expsamp/quadrature.hpp"

namespace expsamp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_order(int order) {
  if (order < 1 || order > kMaxBSplineOrder) {
    throw DomainError("B-spline order must be in [1, " + std::to_string(kMaxBSplineOrder) +
                      "], got " + std::to_string(order));
  }
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0)) throw DomainError(std::string(what) + " must be positive");
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double ipow(double base, int exponent) {
  double r = 1.0;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// d/dv sinc(v) at integer v (exact: sinc(k) = 0, cos(pi k) = (-1)^k).
double sinc_derivative_at_integer(long k) {
  if (k == 0) return 0.0;
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return sign / static_cast<double>(k);
}

}  // namespace

Kernel Kernel::bspline(int order) {
  require_order(order);
  return Kernel(MellinBSpline{order});
}

Kernel Kernel::fejer(double alpha, double c) {
  require_positive(alpha, "Fejer alpha");
  if (!std::isfinite(c)) throw DomainError("Fejer c must be finite");
  return Kernel(MellinFejer{alpha, c});
}

int Kernel::bspline_order() const {
  if (!is_bspline()) throw PolicyError("kernel is not a B-spline");
  return std::get<MellinBSpline>(family_).order;
}

std::optional<double> Kernel::support_log_radius() const {
  if (const auto* b = std::get_if<MellinBSpline>(&family_)) return b->order / 2.0;
  return std::nullopt;
}

bool Kernel::first_moment_vanishes() const {
  const auto* b = std::get_if<MellinBSpline>(&family_);
  return b != nullptr && b->order >= 2;
}

Decay Kernel::decay() const { return is_bspline() ? Decay::Compact : Decay::InverseSquareLog; }

double Kernel::operator()(double x) const { return kernel_eval(*this, x); }

double Kernel::at_log(double t) const {
  if (const auto* b = std::get_if<MellinBSpline>(&family_)) return bspline_log(b->order, t);
  const auto& f = std::get<MellinFejer>(family_);
  return fejer_log(f.alpha, f.c, t);
}

std::string Kernel::spec() const {
  if (const auto* b = std::get_if<MellinBSpline>(&family_)) {
    return "bspline:" + std::to_string(b->order);
  }
  const auto& f = std::get<MellinFejer>(family_);
  return "fejer:" + shortest(f.alpha) + ":" + shortest(f.c);
}

double sin_pi(double v) {
  if (!std::isfinite(v)) return std::numeric_limits<double>::quiet_NaN();
  const double r = v - 2.0 * std::nearbyint(0.5 * v);  // exact, r in [-1, 1]
  if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
  return std::sin(kPi * r);
}

double sinc(double v) {
  const double pv = kPi * v;
  if (std::abs(pv) < 1e-8) return 1.0 - pv * pv / 6.0;
  return sin_pi(v) / pv;
}

double bspline_log(int order, double t) {
  require_order(order);
  const int n = order;
  const double half = 0.5 * n;
  // Even in t; the left tail has the fewest active truncated powers.
  const double s = -std::abs(t);
  if (!(s > -half)) return 0.0;
  double sum = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= n; ++j) {
    const double v = half + s - j;
    if (v <= 0.0) break;
    const double term = binom * ipow(v, n - 1);
    sum += (j % 2 == 0) ? term : -term;
    binom = binom * (n - j) / (j + 1);
  }
  return sum / factorial(n - 1);
}

double fejer_log(double alpha, double c, double t) {
  require_positive(alpha, "Fejer alpha");
  const double s = sinc(alpha * t / (2.0 * kPi));
  const double scale = (c == 0.0) ? 1.0 : std::exp(-c * t);
  return alpha / (2.0 * kPi) * scale * s * s;
}

double eval_bspline(int order, double x) {
  require_order(order);
  require_positive(x, "x");
  return bspline_log(order, std::log(x));
}

double eval_fejer(double alpha, double c, double x) {
  require_positive(alpha, "Fejer alpha");
  require_positive(x, "x");
  return fejer_log(alpha, c, std::log(x));
}

double kernel_eval(const Kernel& kernel, double x) {
  require_positive(x, "x");
  return kernel.at_log(std::log(x));
}

double mellin_transform_cycles(const Kernel& kernel, double cycles) {
  if (const auto* b = std::get_if<MellinBSpline>(&kernel.family())) {
    return ipow(sinc(cycles), b->order);
  }
  const auto& f = std::get<MellinFejer>(kernel.family());
  const double t = 2.0 * kPi * std::abs(cycles);
  return t <= f.alpha ? 1.0 - t / f.alpha : 0.0;
}

double mellin_transform_closed_form(const Kernel& kernel, double t) {
  if (const auto* b = std::get_if<MellinBSpline>(&kernel.family())) {
    return ipow(sinc(t / (2.0 * kPi)), b->order);
  }
  const auto& f = std::get<MellinFejer>(kernel.family());
  const double a = std::abs(t);
  return a <= f.alpha ? 1.0 - a / f.alpha : 0.0;
}

double bspline_transform_derivative(int order, double t) {
  require_order(order);
  const double u = 0.5 * t;
  double ds = 0.0;
  if (std::abs(u) < 1e-4) {
    ds = 0.5 * (-u / 3.0 + u * u * u / 30.0);
  } else {
    ds = 0.5 * (u * std::cos(u) - std::sin(u)) / (u * u);
  }
  return order * ipow(sinc(t / (2.0 * kPi)), order - 1) * ds;
}

double mellin_transform_numeric(const Kernel& kernel, double t, int quadrature_order) {
  if (!kernel.is_bspline()) {
    throw PolicyError("numeric Mellin transform needs a compactly supported kernel");
  }
  const int n = kernel.bspline_order();
  const GaussLegendre rule(quadrature_order);
  const double half = 0.5 * n;
  // Imaginary part vanishes since chi(e^s) is even in s.
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double a = -half + j;
    sum += rule.integrate([&](double s) { return std::cos(t * s) * bspline_log(n, s); }, a, a + 1.0);
  }
  return sum;
}

// ---------------------------------------------------------------------------

TruncationPolicy default_truncation(const Kernel& kernel) {
  if (kernel.is_bspline()) return ExactSupport{};
  // e^{-ct} growth leaves no tail bound for c != 0; fall back to a fixed window.
  if (std::get<MellinFejer>(kernel.family()).c != 0.0) return WindowTerms{1000};
  return TailTolerance{1e-6};
}

std::string truncation_spec(const TruncationPolicy& policy) {
  if (std::holds_alternative<ExactSupport>(policy)) return "exact";
  if (const auto* w = std::get_if<WindowTerms>(&policy)) return "terms:" + std::to_string(w->half_width);
  return "tol:" + shortest(std::get<TailTolerance>(policy).tol);
}

double fejer_tail_bound(double alpha, double c, long half_width) {
  if (c != 0.0 || half_width < 1) return kInf;
  return 4.0 / (kPi * alpha * (static_cast<double>(half_width) - 0.5));
}

long fejer_half_width_for(double alpha, double c, double tol) {
  if (!(tol > 0.0)) throw PolicyError("tail tolerance must be positive");
  if (c != 0.0) throw PolicyError("no tail bound for Fejer kernel with c != 0; use terms:K");
  const double k = std::ceil(4.0 / (kPi * alpha * tol) + 0.5);
  if (k > 1e12) throw PolicyError("tail tolerance too small for a finite window");
  return std::max(1L, static_cast<long>(k));
}

IndexWindow index_window(const Kernel& kernel, const TruncationPolicy& policy, double center) {
  if (!std::isfinite(center)) throw DomainError("window center must be finite");
  const long mid = static_cast<long>(std::llround(center));
  if (const auto* b = std::get_if<MellinBSpline>(&kernel.family())) {
    const double half = 0.5 * b->order;
    const long lo = static_cast<long>(std::floor(center - half));
    const long hi = static_cast<long>(std::ceil(center + half));
    if (const auto* w = std::get_if<WindowTerms>(&policy)) {
      if (w->half_width < 0) throw PolicyError("window half-width must be >= 0");
      IndexWindow win{mid - w->half_width, mid + w->half_width, 0.0};
      // chi <= 1, so each dropped support term contributes at most 1.
      const long dropped = std::max(0L, win.first - lo) + std::max(0L, hi - win.last);
      win.tail_bound = static_cast<double>(dropped);
      return win;
    }
    if (const auto* tt = std::get_if<TailTolerance>(&policy); tt && !(tt->tol > 0.0)) {
      throw PolicyError("tail tolerance must be positive");
    }
    return {lo, hi, 0.0};
  }
  const auto& f = std::get<MellinFejer>(kernel.family());
  if (std::holds_alternative<ExactSupport>(policy)) {
    throw PolicyError("exact-support truncation requires a compactly supported kernel");
  }
  long k = 0;
  if (const auto* w = std::get_if<WindowTerms>(&policy)) {
    if (w->half_width < 0) throw PolicyError("window half-width must be >= 0");
    k = w->half_width;
  } else {
    k = fejer_half_width_for(f.alpha, f.c, std::get<TailTolerance>(policy).tol);
  }
  return {mid - k, mid + k, fejer_tail_bound(f.alpha, f.c, k)};
}

// ---------------------------------------------------------------------------

MomentValue discrete_moment(const Kernel& kernel, int nu, double u, const TruncationPolicy& policy) {
  if (nu < 0) throw DomainError("moment order must be >= 0");
  require_positive(u, "u");
  const double lu = std::log(u);
  const IndexWindow win = index_window(kernel, policy, lu);
  double alg = 0.0;
  double abs = 0.0;
  for (long k = win.first; k <= win.last; ++k) {
    const double chi = kernel.at_log(lu - static_cast<double>(k));
    if (chi == 0.0) continue;
    const double d = static_cast<double>(k) - lu;
    const double p = ipow(d, nu);
    alg += chi * p;
    abs += std::abs(chi) * std::abs(p);
  }
  const bool compact = kernel.decay() == Decay::Compact;
  MomentValue mv{alg, abs, 0.0, !compact && nu >= 1};
  if (!compact) mv.tail_bound = (nu == 0) ? win.tail_bound : kInf;
  else mv.tail_bound = (nu == 0 || win.tail_bound == 0.0) ? win.tail_bound : kInf;
  return mv;
}

namespace {

void validate_moment_inputs(const Kernel& kernel, int nu, std::span<const double> grid,
                            const TruncationPolicy& policy) {
  if (grid.empty()) throw DomainError("moment grid must be non-empty");
  if (nu < 0) throw DomainError("moment order must be >= 0");
  for (double u : grid) require_positive(u, "moment grid point");
  (void)index_window(kernel, policy, std::log(grid.front()));
}

MomentReport finish_report(const Kernel& kernel, int nu, std::span<const double> grid,
                           std::vector<double> alg, std::vector<double> abs) {
  MomentReport r;
  r.order = nu;
  r.grid.assign(grid.begin(), grid.end());
  r.algebraic = std::move(alg);
  r.absolute = std::move(abs);
  r.sup_absolute = *std::max_element(r.absolute.begin(), r.absolute.end());
  r.window_dependent = kernel.decay() != Decay::Compact && nu >= 1;
  return r;
}

}  // namespace

MomentReport moment_report(const Kernel& kernel, int nu, std::span<const double> grid,
                           const TruncationPolicy& policy) {
  validate_moment_inputs(kernel, nu, grid, policy);
  const long n = static_cast<long>(grid.size());
  std::vector<double> alg(grid.size());
  std::vector<double> abs(grid.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const MomentValue mv = discrete_moment(kernel, nu, grid[i], policy);
    alg[i] = mv.algebraic;
    abs[i] = mv.absolute;
  }
  return finish_report(kernel, nu, grid, std::move(alg), std::move(abs));
}

MomentReport moment_report_serial(const Kernel& kernel, int nu, std::span<const double> grid,
                                  const TruncationPolicy& policy) {
  validate_moment_inputs(kernel, nu, grid, policy);
  std::vector<double> alg(grid.size());
  std::vector<double> abs(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const MomentValue mv = discrete_moment(kernel, nu, grid[i], policy);
    alg[i] = mv.algebraic;
    abs[i] = mv.absolute;
  }
  return finish_report(kernel, nu, grid, std::move(alg), std::move(abs));
}

std::vector<double> moment_period_grid(int count) {
  if (count < 1) throw DomainError("grid count must be >= 1");
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) g[i] = std::exp(static_cast<double>(i) / count);
  return g;
}

double partition_of_unity_check(const Kernel& kernel, double x, double w,
                                const TruncationPolicy& policy) {
  require_positive(x, "x");
  require_positive(w, "w");
  const double center = w * std::log(x);
  const IndexWindow win = index_window(kernel, policy, center);
  double sum = 0.0;
  for (long k = win.first; k <= win.last; ++k) sum += kernel.at_log(center - static_cast<double>(k));
  return sum;
}

PoissonReport poisson_condition_check(const Kernel& kernel, int kmax) {
  if (kmax < 0) throw DomainError("kmax must be >= 0");
  PoissonReport r;
  r.kmax = kmax;
  r.values.reserve(2 * kmax + 1);
  for (int k = -kmax; k <= kmax; ++k) {
    const double v = mellin_transform_cycles(kernel, static_cast<double>(k));
    r.values.push_back(v);
    r.max_deviation = std::max(r.max_deviation, std::abs(v - (k == 0 ? 1.0 : 0.0)));
  }
  if (kernel.is_bspline()) {
    // d/dt sinc(t/2pi)^n = n sinc^{n-1} sinc'/(2 pi); sinc(k) = 0 for k != 0.
    const int n = kernel.bspline_order();
    r.derivative_checked = true;
    for (int k = -kmax; k <= kmax; ++k) {
      const double s = (k == 0) ? 1.0 : 0.0;
      const double d = n * ipow(s, n - 1) * sinc_derivative_at_integer(k) / (2.0 * kPi);
      r.max_derivative = std::max(r.max_derivative, std::abs(d));
    }
  }
  return r;
}

}  // namespace expsamp
