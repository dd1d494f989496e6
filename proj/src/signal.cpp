#include "expsamp/signal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <functional>
#include <numbers>

namespace expsamp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double log_or_inf(double x) { return x == 0.0 ? -kInf : std::log(x); }

double piece_value_log(const Piece& p, double u) {
  switch (p.kind) {
    case PieceKind::Constant:
      return p.value;
    case PieceKind::Log:
      return u;
    case PieceKind::Reciprocal:
      return p.value * std::exp(-u);
    case PieceKind::CosOfX: {
      const double x = std::exp(u);
      // x beyond double range: the sample is not representable, treat as 0.
      return std::isfinite(x) ? std::cos(x) : 0.0;
    }
    case PieceKind::Zero:
      return 0.0;
  }
  return 0.0;
}

double piece_value(const Piece& p, double x) {
  switch (p.kind) {
    case PieceKind::Constant:
      return p.value;
    case PieceKind::Log:
      return std::log(x);
    case PieceKind::Reciprocal:
      return p.value / x;
    case PieceKind::CosOfX:
      return std::cos(x);
    case PieceKind::Zero:
      return 0.0;
  }
  return 0.0;
}

// theta^j cos x = P_j(x) cos x + Q_j(x) sin x, with
// theta(P cos + Q sin) = x(P' + Q) cos + x(Q' - P) sin.
double mellin_derivative_cos(int order, double x) {
  std::vector<double> p{1.0};
  std::vector<double> q;
  for (int j = 0; j < order; ++j) {
    const std::size_t deg = std::max(p.size(), q.size()) + 1;
    std::vector<double> np(deg, 0.0);
    std::vector<double> nq(deg, 0.0);
    // x P'(x): coefficient i*p_i at x^i.
    for (std::size_t i = 1; i < p.size(); ++i) np[i] += i * p[i];
    for (std::size_t i = 1; i < q.size(); ++i) nq[i] += i * q[i];
    for (std::size_t i = 0; i < q.size(); ++i) np[i + 1] += q[i];
    for (std::size_t i = 0; i < p.size(); ++i) nq[i + 1] -= p[i];
    p = std::move(np);
    q = std::move(nq);
  }
  auto horner = [x](const std::vector<double>& c) {
    double r = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
    return r;
  };
  return horner(p) * std::cos(x) + horner(q) * std::sin(x);
}

double piece_mellin_derivative(const Piece& p, int order, double u) {
  if (order == 0) return piece_value_log(p, u);
  switch (p.kind) {
    case PieceKind::Constant:
    case PieceKind::Zero:
      return 0.0;
    case PieceKind::Log:
      return order == 1 ? 1.0 : 0.0;
    case PieceKind::Reciprocal:
      return ((order % 2 == 0) ? 1.0 : -1.0) * p.value * std::exp(-u);
    case PieceKind::CosOfX: {
      const double x = std::exp(u);
      return std::isfinite(x) ? mellin_derivative_cos(order, x) : 0.0;
    }
  }
  return 0.0;
}

double piece_integral(const Piece& p, double lo, double hi, const GaussLegendre& rule) {
  switch (p.kind) {
    case PieceKind::Constant:
      return p.value * (hi - lo);
    case PieceKind::Log:
      return 0.5 * (hi - lo) * (hi + lo);
    case PieceKind::Reciprocal:
      // s (e^{-lo} - e^{-hi})
      return p.value * std::exp(-lo) * -std::expm1(-(hi - lo));
    case PieceKind::CosOfX: {
      const double xlo = std::exp(lo);
      const double xhi = std::exp(hi);
      if (xhi - xlo <= kTwoPi) {
        return rule.integrate([](double u) { return std::cos(std::exp(u)); }, lo, hi);
      }
      // int cos(e^u) du = int cos(y)/y dy = Ci(e^hi) - Ci(e^lo)
      return cosine_integral(xhi) - cosine_integral(xlo);
    }
    case PieceKind::Zero:
      return 0.0;
  }
  return 0.0;
}

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

PiecewiseSignal::PiecewiseSignal(std::vector<Piece> pieces, std::string name,
                                 bool closed_form_derivatives)
    : pieces_(std::move(pieces)), name_(std::move(name)), closed_form_(closed_form_derivatives) {
  if (pieces_.empty()) throw DomainError("signal needs at least one piece");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    if (!(p.from >= 0.0) || !(p.to > p.from)) {
      throw DomainError("signal piece must satisfy 0 <= from < to");
    }
    if (i > 0 && p.from < pieces_[i - 1].to) {
      throw DomainError("signal pieces must be ordered and disjoint");
    }
    log_from_.push_back(log_or_inf(p.from));
    log_to_.push_back(std::isinf(p.to) ? kInf : std::log(p.to));
    if (p.from > 0.0) breakpoints_.push_back(p.from);
    if (std::isfinite(p.to)) breakpoints_.push_back(p.to);
  }
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
}

bool PiecewiseSignal::is_constant() const {
  const double v0 = pieces_.front().kind == PieceKind::Constant ? pieces_.front().value : 0.0;
  double reach = 0.0;
  for (const Piece& p : pieces_) {
    if (p.kind != PieceKind::Constant && p.kind != PieceKind::Zero) return false;
    const double v = p.kind == PieceKind::Constant ? p.value : 0.0;
    if (v != v0 || p.from != reach) return false;
    reach = p.to;
  }
  // A constant zero with gaps is still constant.
  return std::isinf(reach) || v0 == 0.0;
}

const Piece* PiecewiseSignal::find_piece(double u) const {
  auto it = std::upper_bound(log_from_.begin(), log_from_.end(), u);
  if (it == log_from_.begin()) return nullptr;
  const std::size_t i = static_cast<std::size_t>(it - log_from_.begin()) - 1;
  return u < log_to_[i] ? &pieces_[i] : nullptr;
}

double PiecewiseSignal::operator()(double x) const {
  if (!(x > 0.0)) throw DomainError("signal argument must be positive");
  for (const Piece& p : pieces_) {
    if (x >= p.from && x < p.to) return piece_value(p, x);
  }
  return 0.0;
}

double PiecewiseSignal::at_log(double u) const {
  const Piece* p = find_piece(u);
  return p ? piece_value_log(*p, u) : 0.0;
}

double PiecewiseSignal::mellin_derivative_at_log(int order, double u) const {
  if (order < 0) throw DomainError("Mellin derivative order must be >= 0");
  if (order > 0 && !closed_form_) {
    throw PolicyError("signal '" + name_ +
                      "' has no closed-form Mellin derivatives; use a finite-difference spec");
  }
  const Piece* p = find_piece(u);
  return p ? piece_mellin_derivative(*p, order, u) : 0.0;
}

namespace signals {

PiecewiseSignal f1() {
  return PiecewiseSignal({{0.5, 1.0, PieceKind::Constant, 0.0}, {1.0, 4.0, PieceKind::Reciprocal, -2.0}},
                         "f1");
}

PiecewiseSignal f1_extended() {
  return PiecewiseSignal({{0.5, 1.0, PieceKind::Constant, 0.0}, {1.0, kInf, PieceKind::Reciprocal, -2.0}},
                         "f1ext");
}

PiecewiseSignal f2() {
  return PiecewiseSignal({{0.0, 1.0, PieceKind::Zero}, {1.0, 4.0, PieceKind::CosOfX}}, "f2");
}

PiecewiseSignal f2_extended() {
  return PiecewiseSignal({{0.0, 1.0, PieceKind::Zero}, {1.0, kInf, PieceKind::CosOfX}}, "f2ext");
}

PiecewiseSignal constant(double v) {
  return PiecewiseSignal({{0.0, kInf, PieceKind::Constant, v}}, "const:" + shortest(v));
}

PiecewiseSignal logarithm() { return PiecewiseSignal({{0.0, kInf, PieceKind::Log}}, "log"); }

}  // namespace signals

double signal_eval(const PiecewiseSignal& signal, double x) { return signal(x); }

double exp_mean(const PiecewiseSignal& signal, double a, double b, const GaussLegendre& rule) {
  if (!(a <= b)) throw DomainError("exp_mean requires a <= b");
  if (a == b) return 0.0;
  const auto& pieces = signal.pieces();
  double sum = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const double from = pieces[i].from == 0.0 ? -kInf : std::log(pieces[i].from);
    const double to = std::isinf(pieces[i].to) ? kInf : std::log(pieces[i].to);
    const double lo = std::max(a, from);
    const double hi = std::min(b, to);
    if (lo < hi) sum += piece_integral(pieces[i], lo, hi, rule);
  }
  return sum;
}

double exp_mean(const PiecewiseSignal& signal, double a, double b, int quadrature_order) {
  return exp_mean(signal, a, b, GaussLegendre(quadrature_order));
}

double mellin_derivative(const PiecewiseSignal& signal, const MellinDerivativeSpec& spec, double x) {
  if (!(x > 0.0)) throw DomainError("Mellin derivative argument must be positive");
  if (spec.order < 0) throw DomainError("Mellin derivative order must be >= 0");
  const double t = std::log(x);
  if (std::holds_alternative<ClosedForm>(spec.method)) {
    return signal.mellin_derivative_at_log(spec.order, t);
  }
  const double h = std::get<LogScaleFiniteDifference>(spec.method).step;
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  if (spec.order == 0) return signal.at_log(t);
  const double reach = spec.order * h;
  for (double bp : signal.breakpoints()) {
    if (std::abs(std::log(bp) - t) <= reach) {
      throw NonSmoothPoint("non-smooth point: finite-difference stencil at x=" + shortest(x) +
                           " crosses breakpoint " + shortest(bp));
    }
  }
  // Nested central differences in t = log x.
  std::function<double(int, double)> diff = [&](int j, double s) -> double {
    if (j == 0) return signal.at_log(s);
    return (diff(j - 1, s + h) - diff(j - 1, s - h)) / (2.0 * h);
  };
  return diff(spec.order, t);
}

double log_modulus(const PiecewiseSignal& signal, double delta, int grid_density) {
  if (!(delta > 0.0)) throw DomainError("modulus delta must be positive");
  if (grid_density < 1) throw DomainError("grid density must be >= 1");
  const auto& bps = signal.breakpoints();
  const double decade = std::log(10.0);
  double lo = std::log(0.1);
  double hi = std::log(10.0);
  if (!bps.empty()) {
    lo = std::log(bps.front()) - delta;
    hi = std::log(bps.back()) + delta;
  }
  if (signal.pieces().front().from == 0.0) lo -= decade;
  if (std::isinf(signal.pieces().back().to)) hi += decade;

  // Candidates (log x, value). The lattice is anchored at u = 0, so a larger
  // delta only adds points and the estimate is non-decreasing in delta.
  const double step = decade / (64.0 * grid_density);
  std::vector<std::pair<double, double>> pts;
  for (long i = static_cast<long>(std::floor(lo / step)); i * step <= hi; ++i) {
    pts.emplace_back(i * step, signal.at_log(i * step));
  }
  for (double bp : bps) {
    const double tb = std::log(bp);
    const double eps = 1e-12 * std::max(1.0, std::abs(tb));
    pts.emplace_back(tb, signal.at_log(tb - eps));
    pts.emplace_back(tb, signal.at_log(tb));
  }
  // cos x attains +-1 at x = m pi; capped so unbounded pieces stay cheap.
  for (const Piece& p : signal.pieces()) {
    if (p.kind != PieceKind::CosOfX) continue;
    const double x_hi = std::min(p.to, std::exp(std::min(hi, 700.0)));
    const long m_lo = std::max(1L, static_cast<long>(std::ceil(p.from / std::numbers::pi)));
    const long m_hi = std::min(m_lo + 100000, static_cast<long>(std::floor(x_hi / std::numbers::pi)));
    for (long m = m_lo; m <= m_hi; ++m) {
      const double u = std::log(m * std::numbers::pi);
      pts.emplace_back(u, signal.at_log(u));
    }
  }
  std::sort(pts.begin(), pts.end());

  // Oscillation over every window of log-width delta, via monotone deques.
  double best = 0.0;
  std::deque<std::size_t> maxq;
  std::deque<std::size_t> minq;
  std::size_t left = 0;
  for (std::size_t r = 0; r < pts.size(); ++r) {
    while (!maxq.empty() && pts[maxq.back()].second <= pts[r].second) maxq.pop_back();
    while (!minq.empty() && pts[minq.back()].second >= pts[r].second) minq.pop_back();
    maxq.push_back(r);
    minq.push_back(r);
    while (pts[r].first - pts[left].first > delta) ++left;
    while (maxq.front() < left) maxq.pop_front();
    while (minq.front() < left) minq.pop_front();
    best = std::max(best, pts[maxq.front()].second - pts[minq.front()].second);
  }
  // Lattice partners at exactly delta inside one monotone piece, so log reaches
  // delta exactly. Monotonicity in delta survives: a wider pair either stays in
  // the piece or reaches its one-sided endpoint limit, which is a candidate.
  const auto& pieces = signal.pieces();
  auto piece_index = [&](double u) {
    const double x = std::exp(u);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (x >= pieces[i].from && x < pieces[i].to) return static_cast<long>(i);
    }
    return -1L;
  };
  for (long i = static_cast<long>(std::floor(lo / step)); i * step <= hi; ++i) {
    const double u = i * step;
    const long a = piece_index(u);
    if (a < 0 || pieces[a].kind == PieceKind::CosOfX || piece_index(u + delta) != a) continue;
    best = std::max(best, std::abs(signal.at_log(u + delta) - signal.at_log(u)));
  }
  return best;
}

}  // namespace expsamp
