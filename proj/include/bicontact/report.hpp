#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bicontact/coframe.hpp"
#include "bicontact/invariants.hpp"

namespace bicontact {

inline constexpr std::string_view kToolVersion = "1.0.0";

// Reads the section format:
//   [chart]   coords = x y z
//   [params]  eps = -1
//   [omega1]  dx = "1"  dy = "1"  dz = "-((x+y)*z-(x-y))"
// Missing d<coord> keys are zero. Syntax problems raise InputError with the
// line and column; missing or surplus omega sections raise ArityError.
Coframe parse_coframe(std::string_view text);
Coframe load_coframe(const std::string& path);

// "lo:hi,lo:hi,..." with one range per coordinate.
Box parse_box(std::string_view text);

std::vector<std::string> command_names();

struct RunConfig {
  std::string command;
  std::string input;    // coframe file; empty when `example` is set
  std::string example;  // built-in generator name
  std::vector<std::pair<std::string, std::string>> params;
  int order = kDefaultOrder;
  Tolerances tol;
  int points = 100;
  std::uint64_t seed = 42;
  std::optional<Box> box;
  std::vector<Point> at;  // explicit points; overrides the box
};

struct Report {
  nlohmann::ordered_json json;
  bool pass = true;
  // 0 when every assertion passed, 1 on a residual above tolerance, 2 when a
  // module error was raised.
  int exit_code = 0;
};

Report run(const RunConfig& config);

// Tolerance tier of a named residual: deep for identities that go several
// derivative levels down, shallow otherwise.
double tolerance_for(std::string_view residual, const Tolerances& tol);

// JSON text with doubles at 17 significant digits; NaN and infinities become null.
std::string to_json_text(const nlohmann::ordered_json& j, int indent = 2);

}  // namespace bicontact
