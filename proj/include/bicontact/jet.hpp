#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace bicontact {

inline constexpr int kMaxJetDim = 4;
inline constexpr int kMaxJetOrder = 12;
inline constexpr int kDefaultOrder = 6;

using MultiIndex = std::array<int, kMaxJetDim>;

// Graded-lex enumeration of the multi-indices |a| <= order in dim variables.
// Tables are built once per (dim, order) and shared; the table of order k-1 is
// a prefix of the table of order k, which is what makes truncation a resize.
struct MultiIndexTable {
  struct Term {
    int lhs, rhs, out;
  };

  int dim = 0;
  int order = 0;
  std::vector<MultiIndex> alpha;
  std::vector<int> degree;
  // raise[k][i]: index of alpha[k] + e_i, or -1 when that exceeds the order.
  std::vector<MultiIndex> raise;
  // All pairs whose product stays within the order, sorted by output slot.
  std::vector<Term> product;

  int index_of(const MultiIndex& a) const;

 private:
  friend const MultiIndexTable& multi_index_table(int, int);
  std::vector<int> lookup_;
};

const MultiIndexTable& multi_index_table(int dim, int order);
std::size_t jet_size(int dim, int order);

// Truncated Taylor expansion of a scalar at a base point. coeffs()[k] is
// d^a f / a! for a = table.alpha[k], i.e. the coefficient of h^a.
class Jet {
 public:
  Jet() = default;
  Jet(int dim, int order);

  static Jet constant(int dim, int order, double value);
  // The coordinate function x_slot seeded at x_slot = at.
  static Jet variable(int dim, int order, int slot, double at);

  int dim() const { return dim_; }
  int order() const { return order_; }
  bool empty() const { return dim_ == 0; }
  double value() const { return c_.empty() ? 0.0 : c_[0]; }

  std::span<const double> coeffs() const { return c_; }
  std::span<double> coeffs() { return c_; }
  double coeff(const MultiIndex& a) const;
  // Partial derivative d^a f at the base point (a! times the coefficient).
  double derivative(const MultiIndex& a) const;
  double gradient(int slot) const;

  // Jet of d f / d x_slot, one order lower.
  Jet partial(int slot) const;
  Jet truncated(int order) const;
  const MultiIndexTable& table() const { return multi_index_table(dim_, order_); }

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);
  Jet& operator/=(double s);

  friend Jet operator-(Jet a);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, Jet a);
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }
  friend Jet operator/(double s, const Jet& a);

 private:
  void require_compatible(const Jet& o, const char* op) const;

  int dim_ = 0;
  int order_ = 0;
  std::vector<double> c_;
};

// The smaller of the two orders.
int common_order(const Jet& a, const Jet& b);

enum class Elementary {
  Sin, Cos, Tan, Csc, Sec, Cot,
  Sinh, Cosh, Tanh, Sech,
  Exp, Ln, Sqrt,
  Asinh, Atan,
};

std::string_view name(Elementary fn);
std::optional<Elementary> elementary_from_name(std::string_view name);

// f(a0 + t) as a univariate series c_0..c_order; throws DomainError.
std::vector<double> taylor_coefficients(Elementary fn, double a0, int order);
double apply(Elementary fn, double x);

Jet compose(Elementary fn, const Jet& a);
// Substitute a - a.value() into a univariate series c_0 + c_1 t + ...
Jet compose_series(std::span<const double> c, const Jet& a);

Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet tan(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet atan(const Jet& a);
Jet asinh(const Jet& a);
Jet pow(const Jet& a, double p);
Jet pow(const Jet& a, const Jet& b);
Jet atan2(const Jet& y, const Jet& x);

}  // namespace bicontact
