#pragma once

// Command implementations behind the `expsamp` CLI: error tables, figure
// series, invariant checks, convergence-rate fits and moment dumps.

#include <optional>
#include <string>
#include <vector>

#include "expsamp/kernel.hpp"
#include "expsamp/operators.hpp"
#include "expsamp/signal.hpp"

namespace expsamp::repro {

enum class Command { Check, Apply, Table, Figure, Rate, Moments };
enum class Preset { Table1, Table2, Figure1, Figure2 };
enum class Format { Csv, Json };

Command parse_command(const std::string& name);
Preset parse_preset(const std::string& name);
Format parse_format(const std::string& name);
std::string preset_name(Preset p);

// Raw CLI options; empty/nullopt fields fall back to preset or command defaults.
struct RunConfig {
  Command command = Command::Apply;
  std::optional<std::string> kernel;
  std::optional<std::string> signal;
  std::vector<double> w_list;
  std::vector<double> x_list;
  std::optional<Preset> preset;
  std::string out_path = "-";
  Format format = Format::Csv;
  std::optional<std::string> truncation;
  int quadrature_order = 16;
};

// Config with every default filled in and every spec string parsed.
struct Resolved {
  Kernel kernel;
  PiecewiseSignal signal;
  std::vector<double> w_list;
  std::vector<double> x_list;
  TruncationPolicy truncation;
  int quadrature_order;
  std::optional<Preset> preset;
  // Figure sampling range (figure command only).
  double x_min = 0.5;
  double x_max = 4.0;
  bool x_is_range = true;
  bool x_explicit = false;

  OperatorParams params(double w) const { return {w, truncation, quadrature_order}; }
};

Resolved resolve(const RunConfig& config);

// ---------------------------------------------------------------------------

struct TableRow {
  double x;
  std::vector<double> errors;  // |f(x) - I_w f(x)| per w
};

struct ErrorTable {
  std::string kernel;
  std::string signal;
  std::string truncation;
  std::vector<double> w_list;
  std::vector<TableRow> rows;
};

// Reference error values for the two reproduction tables (rows x columns).
struct ReferenceTable {
  std::vector<double> x;
  std::vector<double> w;
  std::vector<std::vector<double>> errors;
};

const ReferenceTable& reference_table(Preset p);

ErrorTable compute_error_table(const Kernel& kernel, const PiecewiseSignal& signal,
                               const std::vector<double>& w_list, std::vector<double> x_list,
                               const TruncationPolicy& truncation, int quadrature_order);

// Largest relative deviation |computed - ref| / ref over all cells.
double max_relative_deviation(const ErrorTable& table, const ReferenceTable& ref);
// Cell-wise: |computed - ref| <= max(rel * ref, abs).
bool matches_reference(const ErrorTable& table, const ReferenceTable& ref, double rel, double abs);
// Every row decreases left to right and its log-log slope lies in [lo, hi].
bool structurally_converging(const ErrorTable& table, double lo, double hi);
// Per-row OLS slope of log error against log w.
std::vector<double> row_decay_exponents(const ErrorTable& table);

ErrorTable run_table(const Resolved& cfg);
std::string format_table(const ErrorTable& table, const Resolved& cfg, Format format);

// Rounded half-to-even to 4 decimals.
std::string format_4dp(double v);

struct FigureSeries {
  std::vector<double> x;
  std::vector<double> f;
  std::vector<std::vector<double>> approx;  // one column per w
};

FigureSeries run_figure(const Resolved& cfg);
std::string format_figure(const FigureSeries& fig, const Resolved& cfg, Format format);

struct CheckEntry {
  std::string name;
  std::string status;  // pass | fail | not-applicable
  double deviation;
  double tolerance;
  std::string note;
};

struct CheckReport {
  std::string kernel;
  std::vector<CheckEntry> entries;
  bool all_pass() const;
};

CheckReport run_checks(const Resolved& cfg);
std::string format_checks(const CheckReport& report);

SaturationEstimate run_rate(const Resolved& cfg);
std::string format_rate(const SaturationEstimate& est, const Resolved& cfg);

std::string run_moments(const Resolved& cfg, Format format);

// Writes to the file, or to stdout for "-".
void write_output(const std::string& path, const std::string& content);

// Runs one command end to end; returns the process exit code.
int run(const RunConfig& config);

}  // namespace expsamp::repro
