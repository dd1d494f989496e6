#include "expsamp/repro.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "expsamp/parse.hpp"

namespace expsamp::repro {

namespace {

using ojson = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct PresetDefaults {
  std::string kernel;
  std::string signal;
  std::vector<double> w;
  std::vector<double> x;
  std::optional<std::string> truncation;
  double x_min = 0.5;
  double x_max = 4.0;
};

PresetDefaults preset_defaults(Preset p) {
  switch (p) {
    case Preset::Table1:
      return {"bspline:3", "f1ext", {5, 40, 70}, {1.1, 1.8, 2.9, 3.8}, std::nullopt};
    case Preset::Table2:
      return {"fejer:pi:0", "f2ext", {10, 40, 80}, {1.4, 2.3, 3.4, 3.9}, "terms:10000"};
    case Preset::Figure1:
      return {"bspline:3", "f1ext", {5, 40}, {}, std::nullopt, 0.5, 4.0};
    case Preset::Figure2:
      return {"fejer:pi:0", "f2ext", {10, 40, 80}, {}, "terms:10000", 0.05, 4.0};
  }
  throw std::logic_error("unreachable preset");
}

std::string header_common(const std::string& command, const Resolved& cfg) {
  std::ostringstream os;
  os << "# expsamp " << command << "\n";
  if (cfg.preset) os << "# preset=" << preset_name(*cfg.preset) << "\n";
  os << "# kernel=" << cfg.kernel.spec() << "\n";
  os << "# signal=" << cfg.signal.name() << "\n";
  os << "# truncation=" << truncation_spec(cfg.truncation) << "\n";
  os << "# quadrature=" << cfg.quadrature_order << "\n";
  return os.str();
}

std::vector<double> log_uniform(double lo, double hi, int count) {
  std::vector<double> xs(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) xs[i] = std::exp(a + (b - a) * i / (count - 1));
  xs.front() = lo;
  xs.back() = hi;
  return xs;
}

CheckEntry entry(std::string name, double deviation, double tolerance, std::string note = {}) {
  const bool ok = deviation <= tolerance;
  return {std::move(name), ok ? "pass" : "fail", deviation, tolerance, std::move(note)};
}

CheckEntry not_applicable(std::string name, std::string note, double deviation = 0.0) {
  return {std::move(name), "not-applicable", deviation, 0.0, std::move(note)};
}

// Fixed-seed uniform doubles in [0, 1); mt19937_64 output is fully specified.
std::vector<double> unit_samples(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return out;
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "check") return Command::Check;
  if (name == "apply") return Command::Apply;
  if (name == "table") return Command::Table;
  if (name == "figure") return Command::Figure;
  if (name == "rate") return Command::Rate;
  if (name == "moments") return Command::Moments;
  throw ParseError("unknown command '" + name + "'");
}

Preset parse_preset(const std::string& name) {
  if (name == "table1") return Preset::Table1;
  if (name == "table2") return Preset::Table2;
  if (name == "figure1") return Preset::Figure1;
  if (name == "figure2") return Preset::Figure2;
  throw ParseError("unknown preset '" + name + "'");
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw ParseError("unknown format '" + name + "'");
}

std::string preset_name(Preset p) {
  switch (p) {
    case Preset::Table1: return "table1";
    case Preset::Table2: return "table2";
    case Preset::Figure1: return "figure1";
    case Preset::Figure2: return "figure2";
  }
  return "?";
}

Resolved resolve(const RunConfig& config) {
  PresetDefaults d{"bspline:3", "f1", {5, 40, 70}, {1.1, 1.8, 2.9, 3.8}, std::nullopt};
  if (config.command == Command::Rate) d.w = {5, 10, 20, 40, 80};
  if (config.command == Command::Moments) d.x.clear();
  if (config.preset) d = preset_defaults(*config.preset);

  const Kernel kernel = parse_kernel(config.kernel.value_or(d.kernel));
  Resolved r{kernel,
             parse_signal(config.signal.value_or(d.signal)),
             config.w_list.empty() ? d.w : config.w_list,
             config.x_list.empty() ? d.x : config.x_list,
             default_truncation(kernel),
             config.quadrature_order,
             config.preset};
  if (config.truncation) {
    r.truncation = parse_truncation(*config.truncation);
  } else if (d.truncation && !kernel.is_bspline()) {
    r.truncation = parse_truncation(*d.truncation);
  }
  if (r.quadrature_order < 2) throw ParseError("--quad must be >= 2");
  for (double w : r.w_list) {
    if (!(w > 0.0)) throw ParseError("w values must be positive");
  }
  for (double x : r.x_list) {
    if (!(x > 0.0)) throw ParseError("x values must be positive");
  }
  r.x_explicit = !config.x_list.empty();
  r.x_min = d.x_min;
  r.x_max = d.x_max;
  r.x_is_range = true;
  if (config.command == Command::Figure && r.x_explicit) {
    if (r.x_list.size() == 2) {
      r.x_min = std::min(r.x_list[0], r.x_list[1]);
      r.x_max = std::max(r.x_list[0], r.x_list[1]);
    } else {
      r.x_is_range = false;
    }
  }
  // Validates the truncation against the kernel.
  (void)index_window(r.kernel, r.truncation, 0.0);
  return r;
}

// ---------------------------------------------------------------------------

const ReferenceTable& reference_table(Preset p) {
  static const ReferenceTable t1{{1.1, 1.8, 2.9, 3.8},
                                 {5, 40, 70},
                                 {{0.1621, 0.0225, 0.0129},
                                  {0.1028, 0.0137, 0.0079},
                                  {0.0620, 0.0085, 0.0049},
                                  {0.0471, 0.0065, 0.0037}}};
  static const ReferenceTable t2{{1.4, 2.3, 3.4, 3.9},
                                 {10, 40, 80},
                                 {{0.0954, 0.0216, 0.0123},
                                  {0.0322, 0.0059, 0.0033},
                                  {0.1635, 0.0391, 0.0271},
                                  {0.2262, 0.0571, 0.0336}}};
  switch (p) {
    case Preset::Table1:
    case Preset::Figure1:
      return t1;
    case Preset::Table2:
    case Preset::Figure2:
      return t2;
  }
  return t1;
}

ErrorTable compute_error_table(const Kernel& kernel, const PiecewiseSignal& signal,
                               const std::vector<double>& w_list, std::vector<double> x_list,
                               const TruncationPolicy& truncation, int quadrature_order) {
  if (w_list.empty() || x_list.empty()) throw DomainError("table needs w and x values");
  std::sort(x_list.begin(), x_list.end());
  x_list.erase(std::unique(x_list.begin(), x_list.end()), x_list.end());
  ErrorTable t{kernel.spec(), signal.name(), truncation_spec(truncation), w_list, {}};
  for (double x : x_list) t.rows.push_back({x, {}});
  for (double w : w_list) {
    const OperatorParams p{w, truncation, quadrature_order};
    const auto errs = pointwise_errors(kernel, signal, p, x_list);
    for (std::size_t i = 0; i < x_list.size(); ++i) t.rows[i].errors.push_back(errs[i]);
  }
  return t;
}

namespace {

void require_same_shape(const ErrorTable& table, const ReferenceTable& ref) {
  if (table.rows.size() != ref.x.size() || table.w_list.size() != ref.w.size()) {
    throw DomainError("table shape does not match the reference table");
  }
}

}  // namespace

double max_relative_deviation(const ErrorTable& table, const ReferenceTable& ref) {
  require_same_shape(table, ref);
  double worst = 0.0;
  for (std::size_t i = 0; i < ref.x.size(); ++i) {
    for (std::size_t j = 0; j < ref.w.size(); ++j) {
      worst = std::max(worst, std::abs(table.rows[i].errors[j] - ref.errors[i][j]) / ref.errors[i][j]);
    }
  }
  return worst;
}

bool matches_reference(const ErrorTable& table, const ReferenceTable& ref, double rel, double abs) {
  require_same_shape(table, ref);
  for (std::size_t i = 0; i < ref.x.size(); ++i) {
    for (std::size_t j = 0; j < ref.w.size(); ++j) {
      const double want = ref.errors[i][j];
      if (std::abs(table.rows[i].errors[j] - want) > std::max(rel * want, abs)) return false;
    }
  }
  return true;
}

std::vector<double> row_decay_exponents(const ErrorTable& table) {
  std::vector<double> lw;
  for (double w : table.w_list) lw.push_back(std::log(w));
  std::vector<double> out;
  for (const auto& row : table.rows) {
    std::vector<double> le;
    for (double e : row.errors) le.push_back(std::log(e));
    out.push_back(least_squares(lw, le).slope);
  }
  return out;
}

bool structurally_converging(const ErrorTable& table, double lo, double hi) {
  for (const auto& row : table.rows) {
    for (std::size_t j = 1; j < row.errors.size(); ++j) {
      if (!(row.errors[j] < row.errors[j - 1])) return false;
    }
    for (double e : row.errors) {
      if (!(e > 0.0)) return false;
    }
  }
  for (double s : row_decay_exponents(table)) {
    if (s < lo || s > hi) return false;
  }
  return true;
}

ErrorTable run_table(const Resolved& cfg) {
  return compute_error_table(cfg.kernel, cfg.signal, cfg.w_list, cfg.x_list, cfg.truncation,
                             cfg.quadrature_order);
}

std::string format_4dp(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string format_table(const ErrorTable& table, const Resolved& cfg, Format format) {
  const bool tabled_preset =
      cfg.preset && (*cfg.preset == Preset::Table1 || *cfg.preset == Preset::Table2) &&
      table.rows.size() == reference_table(*cfg.preset).x.size() &&
      table.w_list == reference_table(*cfg.preset).w;
  std::optional<double> ref_dev;
  std::vector<std::pair<int, double>> sweep;
  if (tabled_preset) {
    const ReferenceTable& ref = reference_table(*cfg.preset);
    ref_dev = max_relative_deviation(table, ref);
    if (cfg.kernel.is_bspline()) {
      for (int n = 1; n <= 5; ++n) {
        const ErrorTable t = compute_error_table(Kernel::bspline(n), cfg.signal, table.w_list, ref.x,
                                                 cfg.truncation, cfg.quadrature_order);
        sweep.emplace_back(n, max_relative_deviation(t, ref));
      }
    }
  }
  if (format == Format::Json) {
    ojson j;
    j["command"] = "table";
    if (cfg.preset) j["preset"] = preset_name(*cfg.preset);
    j["kernel"] = table.kernel;
    j["signal"] = table.signal;
    j["truncation"] = table.truncation;
    j["quadrature"] = cfg.quadrature_order;
    j["w"] = table.w_list;
    ojson rows = ojson::array();
    for (const auto& row : table.rows) rows.push_back({{"x", row.x}, {"errors", row.errors}});
    j["rows"] = rows;
    if (ref_dev) j["reference_max_rel_dev"] = *ref_dev;
    if (!sweep.empty()) {
      ojson s = ojson::object();
      for (auto [n, dev] : sweep) s["bspline:" + std::to_string(n)] = dev;
      j["order_sweep"] = s;
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << header_common("table", cfg);
  if (ref_dev) os << "# reference_max_rel_dev=" << format_4dp(*ref_dev) << "\n";
  if (!sweep.empty()) {
    os << "# order_sweep=";
    for (std::size_t i = 0; i < sweep.size(); ++i) {
      os << (i ? ";" : "") << "bspline:" << sweep[i].first << ":" << format_4dp(sweep[i].second);
    }
    const auto best = std::min_element(sweep.begin(), sweep.end(),
                                       [](const auto& a, const auto& b) { return a.second < b.second; });
    os << "\n# best_order=" << best->first << "\n";
  }
  os << "x";
  for (double w : table.w_list) os << ",err_w" << shortest(w);
  os << "\n";
  for (const auto& row : table.rows) {
    os << shortest(row.x);
    for (double e : row.errors) os << "," << format_4dp(e);
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

FigureSeries run_figure(const Resolved& cfg) {
  FigureSeries fig;
  fig.x = cfg.x_is_range ? log_uniform(cfg.x_min, cfg.x_max, 512) : cfg.x_list;
  for (double x : fig.x) fig.f.push_back(cfg.signal(x));
  for (double w : cfg.w_list) fig.approx.push_back(apply_on_grid(cfg.kernel, cfg.signal, cfg.params(w), fig.x));
  return fig;
}

std::string format_figure(const FigureSeries& fig, const Resolved& cfg, Format format) {
  if (format == Format::Json) {
    ojson j;
    j["command"] = "figure";
    if (cfg.preset) j["preset"] = preset_name(*cfg.preset);
    j["kernel"] = cfg.kernel.spec();
    j["signal"] = cfg.signal.name();
    j["truncation"] = truncation_spec(cfg.truncation);
    j["quadrature"] = cfg.quadrature_order;
    j["w"] = cfg.w_list;
    j["x"] = fig.x;
    j["f"] = fig.f;
    j["approx"] = fig.approx;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << header_common("figure", cfg);
  if (cfg.x_is_range) {
    os << "# samples=" << fig.x.size() << " log-uniform on [" << shortest(cfg.x_min) << ", "
       << shortest(cfg.x_max) << "]\n";
  }
  if (cfg.preset && *cfg.preset == Preset::Figure2) {
    os << "# clip: x_min=" << shortest(cfg.x_min) << " (log x is unbounded as x -> 0)\n";
  }
  os << "x," << cfg.signal.name();
  for (double w : cfg.w_list) os << ",I_" << shortest(w);
  os << "\n";
  for (std::size_t i = 0; i < fig.x.size(); ++i) {
    os << full(fig.x[i]) << "," << full(fig.f[i]);
    for (const auto& col : fig.approx) os << "," << full(col[i]);
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

bool CheckReport::all_pass() const {
  return std::none_of(entries.begin(), entries.end(), [](const CheckEntry& e) { return e.status == "fail"; });
}

CheckReport run_checks(const Resolved& cfg) {
  const Kernel& k = cfg.kernel;
  CheckReport rep;
  rep.kernel = k.spec();
  const bool bspline = k.is_bspline();
  const auto* fejer = std::get_if<MellinFejer>(&k.family());
  // Fejer sums use a fixed window so the tail bound is explicit.
  const TruncationPolicy policy = bspline ? TruncationPolicy{ExactSupport{}} : TruncationPolicy{WindowTerms{1000}};
  const double fejer_tail = fejer ? fejer_tail_bound(fejer->alpha, fejer->c, 1000) : 0.0;

  {
    const auto xs = log_uniform(0.1, 10.0, 334);
    double dev = 0.0;
    for (double w : {1.0, 5.0, 40.0}) {
      for (double x : xs) dev = std::max(dev, std::abs(partition_of_unity_check(k, x, w, policy) - 1.0));
    }
    const double tol = bspline ? 1e-12 : (std::isfinite(fejer_tail) ? fejer_tail : 1e-3);
    rep.entries.push_back(entry("partition_of_unity", dev, tol, truncation_spec(policy)));
  }

  if (bspline) {
    double dev = 0.0;
    for (double s : unit_samples(1000, 7)) {
      const double x = std::exp(20.0 * (s - 0.5));
      dev = std::max(dev, std::abs(k(x) - k(1.0 / x)));
    }
    rep.entries.push_back(entry("symmetry", dev, 1e-14));
  } else {
    rep.entries.push_back(not_applicable("symmetry", "checked for B-spline kernels"));
  }

  {
    const auto grid = moment_period_grid(256);
    const MomentReport m1 = moment_report(k, 1, grid, policy);
    double dev = 0.0;
    for (double v : m1.algebraic) dev = std::max(dev, std::abs(v));
    if (k.first_moment_vanishes()) {
      rep.entries.push_back(entry("first_moment", dev, 1e-12));
    } else {
      rep.entries.push_back(not_applicable("first_moment", "kernel fails the vanishing first-moment condition", dev));
    }
  }

  {
    double excess = -std::numeric_limits<double>::infinity();
    const auto grid = moment_period_grid(64);
    for (int nu = 0; nu <= 2; ++nu) {
      const MomentReport m = moment_report(k, nu, grid, policy);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        excess = std::max(excess, std::abs(m.algebraic[i]) - m.absolute[i]);
      }
    }
    rep.entries.push_back(entry("moment_dominance", std::max(excess, 0.0), 0.0, "nu <= 2"));
  }

  {
    const PoissonReport pr = poisson_condition_check(k, 10);
    rep.entries.push_back(entry("poisson_transform_values", pr.max_deviation, 0.0, "|k| <= 10"));
    if (pr.derivative_checked && k.first_moment_vanishes()) {
      rep.entries.push_back(entry("poisson_transform_derivative", pr.max_derivative, 0.0, "|k| <= 10"));
    } else {
      rep.entries.push_back(not_applicable("poisson_transform_derivative", "first moment does not vanish",
                                           pr.max_derivative));
    }
  }

  if (bspline) {
    double dev = 0.0;
    for (double t : {0.0, kPi, 2.0 * kPi}) {
      dev = std::max(dev, std::abs(mellin_transform_numeric(k, t) - mellin_transform_closed_form(k, t)));
    }
    rep.entries.push_back(entry("transform_consistency", dev, 1e-8, "t in {0, pi, 2pi}"));
  } else {
    rep.entries.push_back(not_applicable("transform_consistency", "needs compact support"));
  }

  if (k.first_moment_vanishes()) {
    const PiecewiseSignal lg = signals::logarithm();
    double dev = 0.0;
    for (double w : {1.0, 5.0, 40.0}) {
      for (double x : {0.5, 1.0, 2.0, 3.0}) {
        dev = std::max(dev, std::abs(voronovskaya_residual(k, lg, {w, policy, 16}, x).residual));
      }
    }
    rep.entries.push_back(entry("voronovskaya_log", dev, 1e-12));
  } else {
    rep.entries.push_back(not_applicable("voronovskaya_log", "first moment does not vanish"));
  }

  {
    // log for compact kernels; the Fejer sum of log diverges, so use f2.
    const PiecewiseSignal sig = bspline ? signals::logarithm() : signals::f2();
    const auto xs = log_uniform(1.5, 3.5, 64);
    double worst = -std::numeric_limits<double>::infinity();
    bool window_dependent = false;
    for (double w : {5.0, 10.0, 40.0}) {
      const auto r = modulus_bound_check(k, sig, {w, policy, 16}, xs);
      worst = std::max(worst, r.max_error - r.bound);
      window_dependent = window_dependent || r.window_dependent;
    }
    rep.entries.push_back(entry("modulus_bound", worst, 1e-12,
                                sig.name() + (window_dependent ? ", window-dependent" : "")));
  }

  {
    double dev = 0.0;
    double excess = -std::numeric_limits<double>::infinity();
    for (const PiecewiseSignal& sig : {signals::logarithm(), signals::f2()}) {
      if (!bspline && sig.name() == "log") continue;
      for (double w : {10.0, 40.0}) {
        for (int n : {1, 2}) {
          const auto r = representation_decompose(k, sig, {w, policy, 16}, n, 2.0);
          dev = std::max(dev, std::abs(r.reconstruction - r.direct));
          excess = std::max(excess, std::abs(r.remainder) - r.remainder_bound * (1.0 + 1e-12));
        }
      }
    }
    rep.entries.push_back(entry("representation_identity", dev, 1e-10));
    rep.entries.push_back(entry("remainder_bound", std::max(excess, 0.0), 0.0));
  }

  if (k.first_moment_vanishes()) {
    const std::vector<double> ws{5, 10, 20, 40, 80};
    const std::vector<double> xs{0.5, 1.0, 2.0, 3.0};
    const auto est = saturation_estimate(k, signals::logarithm(), {1.0, policy, 16}, ws, xs);
    rep.entries.push_back(entry("saturation_log", std::abs(est.exponent + 1.0), 0.01,
                                "exponent=" + shortest(est.exponent)));
  } else {
    rep.entries.push_back(not_applicable("saturation_log", "first moment does not vanish"));
  }

  if (fejer && fejer->c == 0.0) {
    double worst = -std::numeric_limits<double>::infinity();
    const auto s = unit_samples(40, 11);
    for (int i = 0; i < 20; ++i) {
      const double u = std::exp(4.0 * (s[2 * i] - 0.5));
      const long K = 50 + static_cast<long>(s[2 * i + 1] * 2000.0);
      const double a = partition_of_unity_check(k, u, 1.0, WindowTerms{K});
      const double b = partition_of_unity_check(k, u, 1.0, WindowTerms{2 * K});
      worst = std::max(worst, std::abs(b - a) - fejer_tail_bound(fejer->alpha, fejer->c, K));
    }
    rep.entries.push_back(entry("fejer_tail_bound", std::max(worst, 0.0), 0.0));
  } else {
    rep.entries.push_back(not_applicable("fejer_tail_bound", "needs a Fejer kernel with c = 0"));
  }
  return rep;
}

std::string format_checks(const CheckReport& report) {
  ojson j;
  j["command"] = "check";
  j["kernel"] = report.kernel;
  ojson arr = ojson::array();
  for (const auto& e : report.entries) {
    ojson o;
    o["name"] = e.name;
    o["status"] = e.status;
    o["deviation"] = e.deviation;
    o["tolerance"] = e.tolerance;
    if (!e.note.empty()) o["note"] = e.note;
    arr.push_back(o);
  }
  j["checks"] = arr;
  j["all_pass"] = report.all_pass();
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

SaturationEstimate run_rate(const Resolved& cfg) {
  std::vector<double> ws = cfg.w_list;
  std::sort(ws.begin(), ws.end());
  std::vector<double> xs = cfg.x_list;
  if (!cfg.x_explicit) {
    // Widest guard band (smallest w) keeps the grid valid for every w.
    xs = guarded_grid(cfg.kernel, cfg.signal, ws.front(), 0.5, 4.0);
    if (xs.empty()) throw DomainError("guarded grid is empty; pass --x explicitly");
  }
  return saturation_estimate(cfg.kernel, cfg.signal, cfg.params(1.0), ws, xs);
}

std::string format_rate(const SaturationEstimate& est, const Resolved& cfg) {
  ojson j;
  j["command"] = "rate";
  j["kernel"] = cfg.kernel.spec();
  j["signal"] = cfg.signal.name();
  j["truncation"] = truncation_spec(cfg.truncation);
  j["w"] = est.ws;
  j["errors"] = est.errors;
  j["degenerate"] = est.degenerate;
  if (est.degenerate) {
    j["exponent"] = nullptr;
    j["intercept"] = nullptr;
  } else {
    j["exponent"] = est.exponent;
    j["intercept"] = est.intercept;
  }
  return j.dump(2) + "\n";
}

std::string run_moments(const Resolved& cfg, Format format) {
  const std::vector<double> grid = cfg.x_list.empty() ? moment_period_grid(64) : cfg.x_list;
  std::vector<MomentReport> reps;
  for (int nu = 0; nu <= 2; ++nu) reps.push_back(moment_report(cfg.kernel, nu, grid, cfg.truncation));
  if (format == Format::Json) {
    ojson j;
    j["command"] = "moments";
    j["kernel"] = cfg.kernel.spec();
    j["truncation"] = truncation_spec(cfg.truncation);
    j["u"] = grid;
    ojson arr = ojson::array();
    for (const auto& r : reps) {
      arr.push_back({{"order", r.order},
                     {"algebraic", r.algebraic},
                     {"absolute", r.absolute},
                     {"sup_absolute", r.sup_absolute},
                     {"window_dependent", r.window_dependent}});
    }
    j["moments"] = arr;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "# expsamp moments\n# kernel=" << cfg.kernel.spec() << "\n# truncation=" << truncation_spec(cfg.truncation)
     << "\n";
  for (const auto& r : reps) {
    os << "# sup_M" << r.order << "=" << full(r.sup_absolute) << (r.window_dependent ? " (window-dependent)" : "")
       << "\n";
  }
  os << "u,m0,M0,m1,M1,m2,M2\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    os << full(grid[i]);
    for (const auto& r : reps) os << "," << full(r.algebraic[i]) << "," << full(r.absolute[i]);
    os << "\n";
  }
  return os.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("failed writing output file '" + path + "'");
}

int run(const RunConfig& config) {
  const Resolved cfg = resolve(config);
  switch (config.command) {
    case Command::Table:
      write_output(config.out_path, format_table(run_table(cfg), cfg, config.format));
      return 0;
    case Command::Figure:
    case Command::Apply: {
      Resolved c = cfg;
      if (config.command == Command::Apply) c.x_is_range = false;
      write_output(config.out_path, format_figure(run_figure(c), c, config.format));
      return 0;
    }
    case Command::Check: {
      const CheckReport rep = run_checks(cfg);
      write_output(config.out_path, format_checks(rep));
      return rep.all_pass() ? 0 : 1;
    }
    case Command::Rate:
      write_output(config.out_path, format_rate(run_rate(cfg), cfg));
      return 0;
    case Command::Moments:
      write_output(config.out_path, run_moments(cfg, config.format));
      return 0;
  }
  return 2;
}

}  // namespace expsamp::repro
