#include "expsamp/parse.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace expsamp {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view text, std::string_view what) {
  text = trim(text);
  if (text == "pi") return std::numbers::pi;
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ParseError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return v;
}

long parse_integer(std::string_view text, std::string_view what) {
  text = trim(text);
  long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ParseError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return v;
}

PieceKind piece_kind(const std::string& kind) {
  if (kind == "const") return PieceKind::Constant;
  if (kind == "log") return PieceKind::Log;
  if (kind == "recip") return PieceKind::Reciprocal;
  if (kind == "cos") return PieceKind::CosOfX;
  if (kind == "zero") return PieceKind::Zero;
  throw ParseError("unknown piece kind '" + kind + "'");
}

}  // namespace

Kernel parse_kernel(std::string_view spec) {
  const auto parts = split(trim(spec), ':');
  try {
    if (parts[0] == "bspline" && parts.size() == 2) {
      return Kernel::bspline(static_cast<int>(parse_integer(parts[1], "B-spline order")));
    }
    if (parts[0] == "fejer" && parts.size() == 3) {
      return Kernel::fejer(parse_real(parts[1], "Fejer alpha"), parse_real(parts[2], "Fejer c"));
    }
  } catch (const DomainError& e) {
    throw ParseError(std::string("kernel '") + std::string(spec) + "': " + e.what());
  }
  throw ParseError("unknown kernel spec '" + std::string(spec) +
                   "' (expected bspline:<n> or fejer:<alpha>:<c>)");
}

PiecewiseSignal parse_signal_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("signal JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("pieces") || !doc["pieces"].is_array()) {
    throw ParseError("signal JSON must be an object with a \"pieces\" array");
  }
  std::vector<Piece> pieces;
  try {
    for (const auto& p : doc["pieces"]) {
      Piece piece{};
      piece.from = p.at("from").get<double>();
      piece.to = (p.contains("to") && !p["to"].is_null()) ? p["to"].get<double>()
                                                         : std::numeric_limits<double>::infinity();
      piece.kind = piece_kind(p.at("kind").get<std::string>());
      if (piece.kind == PieceKind::Constant || piece.kind == PieceKind::Reciprocal) {
        piece.value = p.at("v").get<double>();
      }
      pieces.push_back(piece);
    }
    const std::string name = doc.value("name", std::string("custom"));
    const bool closed = doc.value("closed_form_derivatives", true);
    return PiecewiseSignal(std::move(pieces), name, closed);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("signal JSON: ") + e.what());
  } catch (const DomainError& e) {
    throw ParseError(std::string("signal JSON: ") + e.what());
  }
}

PiecewiseSignal parse_signal(std::string_view spec) {
  spec = trim(spec);
  if (spec == "f1") return signals::f1();
  if (spec == "f1ext") return signals::f1_extended();
  if (spec == "f2") return signals::f2();
  if (spec == "f2ext") return signals::f2_extended();
  if (spec == "log") return signals::logarithm();
  if (spec.starts_with("const:")) return signals::constant(parse_real(spec.substr(6), "constant"));
  if (spec.starts_with("{")) return parse_signal_json(spec);
  if (spec.starts_with("@")) {
    const std::string path(spec.substr(1));
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read signal file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_signal_json(buf.str());
  }
  throw ParseError("unknown signal spec '" + std::string(spec) + "'");
}

TruncationPolicy parse_truncation(std::string_view spec) {
  spec = trim(spec);
  if (spec == "exact") return ExactSupport{};
  if (spec.starts_with("terms:")) {
    const long k = parse_integer(spec.substr(6), "window half-width");
    if (k < 0) throw ParseError("window half-width must be >= 0");
    return WindowTerms{k};
  }
  if (spec.starts_with("tol:")) {
    const double t = parse_real(spec.substr(4), "tail tolerance");
    if (!(t > 0.0)) throw ParseError("tail tolerance must be positive");
    return TailTolerance{t};
  }
  throw ParseError("unknown truncation '" + std::string(spec) + "' (exact | terms:K | tol:T)");
}

std::vector<double> parse_list(std::string_view spec) {
  std::vector<double> out;
  for (auto part : split(trim(spec), ',')) {
    if (trim(part).empty()) continue;
    out.push_back(parse_real(part, "list value"));
  }
  if (out.empty()) throw ParseError("empty list");
  return out;
}

}  // namespace expsamp
