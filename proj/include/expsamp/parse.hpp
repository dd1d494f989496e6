#pragma once

// Spec-string grammar shared by the CLI and config files.
//
//   kernel:     bspline:<order> | fejer:<alpha>:<c>      (alpha accepts "pi")
//   signal:     f1 | f1ext | f2 | f2ext | log | const:<v> | <json> | @<path.json>
//   truncation: exact | terms:<K> | tol:<T>
//   list:       comma-separated reals
//
// JSON signals: {"pieces":[{"from":0.5,"to":1,"kind":"const","v":0}, ...]}
// with kind in const|log|recip|cos|zero ("v" is the constant or reciprocal
// scale); a missing or null "to" means +infinity. An optional top-level
// "name" and "closed_form_derivatives" (default true) are accepted.

#include <string>
#include <string_view>
#include <vector>

#include "expsamp/kernel.hpp"
#include "expsamp/signal.hpp"

namespace expsamp {

Kernel parse_kernel(std::string_view spec);
PiecewiseSignal parse_signal(std::string_view spec);
PiecewiseSignal parse_signal_json(std::string_view json_text);
TruncationPolicy parse_truncation(std::string_view spec);
std::vector<double> parse_list(std::string_view spec);

}  // namespace expsamp
