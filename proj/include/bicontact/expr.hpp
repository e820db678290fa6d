#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bicontact/jet.hpp"

namespace bicontact {

using ParamTable = std::map<std::string, double, std::less<>>;

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Kind { Number, Coordinate, Parameter, Negate, Add, Sub, Mul, Div, Pow, Call };
  // Two-argument functions that are not elementary compositions.
  enum class Special { None, Atan2, Pow };

  Kind kind = Kind::Number;
  double number = 0.0;
  std::string name;  // identifier or function name
  int slot = -1;     // coordinate index
  Elementary fn = Elementary::Exp;
  Special special = Special::None;
  std::vector<Expr> args;
};

// Precedence, loosest first: + -, * /, unary minus, ^ (right associative).
// Unary minus binds looser than ^, so -x^2 is -(x^2) and 2^-1 is allowed.
// Identifiers resolve to coordinates, then parameters, then pi and e.
Expr parse(std::string_view text, std::span<const std::string> coords,
           std::span<const std::string> params = {});

// Fully parenthesized; parse(print(e)) reproduces e.
std::string print(const Expr& e);
bool structurally_equal(const Expr& a, const Expr& b);

Jet eval_jet(const Expr& e, std::span<const double> point, int order,
             const ParamTable& params = {});
double eval(const Expr& e, std::span<const double> point, const ParamTable& params = {});

// Scalar field sampler: (point, order) -> jet.
using ScalarField = std::function<Jet(std::span<const double>, int)>;
ScalarField make_field(Expr e, ParamTable params);

}  // namespace bicontact
