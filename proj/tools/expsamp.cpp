// expsamp: exponential sampling operators from the command line.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "expsamp/errors.hpp"
#include "expsamp/parse.hpp"
#include "expsamp/repro.hpp"

using namespace expsamp;

int main(int argc, char** argv) {
  CLI::App app{"Mellin-Kantorovich exponential sampling toolkit"};
  std::string command;
  std::string kernel, signal, w_list, x_list, preset, out = "-", format = "csv", truncation;
  int quad = 16;
  app.add_option("command", command, "check | apply | table | figure | rate | moments")->required();
  app.add_option("--kernel", kernel, "bspline:<n> | fejer:<alpha>:<c>");
  app.add_option("--signal", signal, "f1 | f1ext | f2 | f2ext | log | const:<v> | <json> | @<file>");
  app.add_option("--w", w_list, "comma-separated sampling rates");
  app.add_option("--x", x_list, "comma-separated evaluation points (figure: lo,hi range)");
  app.add_option("--preset", preset, "table1 | table2 | figure1 | figure2");
  app.add_option("--out", out, "output path, '-' for stdout");
  app.add_option("--format", format, "csv | json");
  app.add_option("--truncation", truncation, "exact | terms:<K> | tol:<T>");
  app.add_option("--quad", quad, "Gauss-Legendre nodes per cell");
  CLI11_PARSE(app, argc, argv);

  try {
    repro::RunConfig cfg;
    cfg.command = repro::parse_command(command);
    if (!kernel.empty()) cfg.kernel = kernel;
    if (!signal.empty()) cfg.signal = signal;
    if (!w_list.empty()) cfg.w_list = parse_list(w_list);
    if (!x_list.empty()) cfg.x_list = parse_list(x_list);
    if (!preset.empty()) cfg.preset = repro::parse_preset(preset);
    if (!truncation.empty()) cfg.truncation = truncation;
    cfg.out_path = out;
    cfg.format = repro::parse_format(format);
    cfg.quadrature_order = quad;
    return repro::run(cfg);
  } catch (const std::exception& e) {
    std::cerr << "expsamp: " << e.what() << "\n";
    return 2;
  }
}
