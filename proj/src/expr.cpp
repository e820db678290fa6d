#include "bicontact/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "bicontact/errors.hpp"

namespace bicontact {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
  double number = 0.0;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) ++i;
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
          i = j;
          while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        }
      }
      Token t{Tok::Number, start, std::string(s.substr(start, i - start))};
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
      if (ec != std::errc() || ptr != t.text.data() + t.text.size())
        throw ParseError(fmt::format("malformed number '{}'", t.text), start);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::Ident, start, std::string(s.substr(start, i - start))});
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ',': k = Tok::Comma; break;
      default: throw ParseError(fmt::format("unexpected character '{}'", c), i);
    }
    out.push_back({k, start, std::string(1, c)});
    ++i;
  }
  out.push_back({Tok::End, s.size(), ""});
  return out;
}

Expr make(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

Expr binary(ExprNode::Kind k, Expr a, Expr b) {
  ExprNode n;
  n.kind = k;
  n.args = {std::move(a), std::move(b)};
  return make(std::move(n));
}

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> coords,
         std::span<const std::string> params)
      : toks_(tokenize(text)), coords_(coords), params_(params) {}

  Expr run() {
    Expr e = expr();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, peek().pos); }
  void expect(Tok k, const char* what) {
    if (!accept(k)) fail(fmt::format("expected {}", what));
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept(Tok::Plus))
        lhs = binary(ExprNode::Kind::Add, lhs, term());
      else if (accept(Tok::Minus))
        lhs = binary(ExprNode::Kind::Sub, lhs, term());
      else
        return lhs;
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept(Tok::Star))
        lhs = binary(ExprNode::Kind::Mul, lhs, unary());
      else if (accept(Tok::Slash))
        lhs = binary(ExprNode::Kind::Div, lhs, unary());
      else
        return lhs;
    }
  }

  Expr unary() {
    if (accept(Tok::Minus)) {
      ExprNode n;
      n.kind = ExprNode::Kind::Negate;
      n.args = {unary()};
      return make(std::move(n));
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept(Tok::Caret)) return binary(ExprNode::Kind::Pow, base, unary());
    return base;
  }

  Expr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        next();
        ExprNode n;
        n.kind = ExprNode::Kind::Number;
        n.number = t.number;
        return make(std::move(n));
      }
      case Tok::LParen: {
        next();
        Expr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: {
        next();
        if (peek().kind == Tok::LParen) return call(t);
        return identifier(t);
      }
      case Tok::End: fail("unexpected end of input");
      default: fail("unexpected '" + t.text + "'");
    }
  }

  Expr call(const Token& t) {
    next();  // '('
    std::vector<Expr> args{expr()};
    while (accept(Tok::Comma)) args.push_back(expr());
    expect(Tok::RParen, "')'");

    ExprNode n;
    n.kind = ExprNode::Kind::Call;
    n.name = t.text;
    std::size_t arity = 1;
    if (t.text == "atan2") {
      n.special = ExprNode::Special::Atan2;
      arity = 2;
    } else if (t.text == "pow") {
      n.special = ExprNode::Special::Pow;
      arity = 2;
    } else if (auto fn = elementary_from_name(t.text)) {
      n.fn = *fn;
    } else {
      throw UnknownIdentifier(t.text);
    }
    if (args.size() != arity)
      throw ParseError(fmt::format("{} takes {} argument(s)", t.text, arity), t.pos);
    n.args = std::move(args);
    return make(std::move(n));
  }

  Expr identifier(const Token& t) {
    ExprNode n;
    n.name = t.text;
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (coords_[i] == t.text) {
        n.kind = ExprNode::Kind::Coordinate;
        n.slot = static_cast<int>(i);
        return make(std::move(n));
      }
    }
    for (const auto& p : params_) {
      if (p == t.text) {
        n.kind = ExprNode::Kind::Parameter;
        return make(std::move(n));
      }
    }
    if (t.text == "pi" || t.text == "e") {
      n.kind = ExprNode::Kind::Number;
      n.number = t.text == "pi" ? std::numbers::pi : std::numbers::e;
      return make(std::move(n));
    }
    throw UnknownIdentifier(t.text);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::span<const std::string> coords_;
  std::span<const std::string> params_;
};

double param_value(const ExprNode& n, const ParamTable& params) {
  auto it = params.find(n.name);
  if (it == params.end()) throw UnknownIdentifier(n.name);
  return it->second;
}

Jet eval_node(const ExprNode& n, std::span<const double> point, int order,
              const ParamTable& params) {
  int dim = static_cast<int>(point.size());
  using K = ExprNode::Kind;
  auto arg = [&](int i) { return eval_node(*n.args[i], point, order, params); };
  switch (n.kind) {
    case K::Number: return Jet::constant(dim, order, n.number);
    case K::Coordinate: return Jet::variable(dim, order, n.slot, point[n.slot]);
    case K::Parameter: return Jet::constant(dim, order, param_value(n, params));
    case K::Negate: return -arg(0);
    case K::Add: return arg(0) + arg(1);
    case K::Sub: return arg(0) - arg(1);
    case K::Mul: return arg(0) * arg(1);
    case K::Div: return arg(0) / arg(1);
    case K::Pow: return pow(arg(0), arg(1));
    case K::Call:
      switch (n.special) {
        case ExprNode::Special::Atan2: return atan2(arg(0), arg(1));
        case ExprNode::Special::Pow: return pow(arg(0), arg(1));
        case ExprNode::Special::None: return compose(n.fn, arg(0));
      }
  }
  throw Error("corrupt expression node");
}

double eval_plain(const ExprNode& n, std::span<const double> point, const ParamTable& params) {
  using K = ExprNode::Kind;
  auto arg = [&](int i) { return eval_plain(*n.args[i], point, params); };
  switch (n.kind) {
    case K::Number: return n.number;
    case K::Coordinate: return point[n.slot];
    case K::Parameter: return param_value(n, params);
    case K::Negate: return -arg(0);
    case K::Add: return arg(0) + arg(1);
    case K::Sub: return arg(0) - arg(1);
    case K::Mul: return arg(0) * arg(1);
    case K::Div: {
      double d = arg(1);
      if (d == 0.0) throw DomainError("div", d);
      return arg(0) / d;
    }
    case K::Pow:
      return std::pow(arg(0), arg(1));
    case K::Call:
      switch (n.special) {
        case ExprNode::Special::Atan2: return std::atan2(arg(0), arg(1));
        case ExprNode::Special::Pow: return std::pow(arg(0), arg(1));
        case ExprNode::Special::None: return apply(n.fn, arg(0));
      }
  }
  throw Error("corrupt expression node");
}

}  // namespace

Expr parse(std::string_view text, std::span<const std::string> coords,
           std::span<const std::string> params) {
  return Parser(text, coords, params).run();
}

std::string print(const Expr& e) {
  using K = ExprNode::Kind;
  const ExprNode& n = *e;
  auto bin = [&](const char* op) {
    return fmt::format("({} {} {})", print(n.args[0]), op, print(n.args[1]));
  };
  switch (n.kind) {
    case K::Number: return fmt::format("{}", n.number);
    case K::Coordinate:
    case K::Parameter: return n.name;
    case K::Negate: return fmt::format("(-{})", print(n.args[0]));
    case K::Add: return bin("+");
    case K::Sub: return bin("-");
    case K::Mul: return bin("*");
    case K::Div: return bin("/");
    case K::Pow: return bin("^");
    case K::Call: {
      std::string out = n.name + "(";
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        out += print(n.args[i]);
      }
      return out + ")";
    }
  }
  return "?";
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a->kind != b->kind || a->args.size() != b->args.size()) return false;
  switch (a->kind) {
    case ExprNode::Kind::Number:
      if (a->number != b->number) return false;
      break;
    case ExprNode::Kind::Coordinate:
      if (a->slot != b->slot) return false;
      break;
    case ExprNode::Kind::Parameter:
    case ExprNode::Kind::Call:
      if (a->name != b->name) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!structurally_equal(a->args[i], b->args[i])) return false;
  return true;
}

Jet eval_jet(const Expr& e, std::span<const double> point, int order, const ParamTable& params) {
  return eval_node(*e, point, order, params);
}

double eval(const Expr& e, std::span<const double> point, const ParamTable& params) {
  return eval_plain(*e, point, params);
}

ScalarField make_field(Expr e, ParamTable params) {
  return [e = std::move(e), params = std::move(params)](std::span<const double> p, int order) {
    return eval_jet(e, p, order, params);
  };
}

}  // namespace bicontact
