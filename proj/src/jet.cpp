#include "bicontact/jet.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

#include <fmt/format.h>

#include "bicontact/errors.hpp"

namespace bicontact {

namespace {

void enumerate_degree(int dim, int remaining, int slot, MultiIndex& cur,
                      std::vector<MultiIndex>& out) {
  if (slot == dim - 1) {
    cur[slot] = remaining;
    out.push_back(cur);
    cur[slot] = 0;
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[slot] = e;
    enumerate_degree(dim, remaining - e, slot + 1, cur, out);
  }
  cur[slot] = 0;
}

std::unique_ptr<MultiIndexTable> build_table(int dim, int order) {
  auto t = std::make_unique<MultiIndexTable>();
  t->dim = dim;
  t->order = order;
  for (int d = 0; d <= order; ++d) {
    MultiIndex cur{};
    std::size_t before = t->alpha.size();
    enumerate_degree(dim, d, 0, cur, t->alpha);
    t->degree.insert(t->degree.end(), t->alpha.size() - before, d);
  }
  return t;
}

void check_dims(int dim, int order) {
  if (dim < 1 || dim > kMaxJetDim || order < 0 || order > kMaxJetOrder)
    throw StructuralError(fmt::format("unsupported jet shape dim={} order={}", dim, order));
}

}  // namespace

int MultiIndexTable::index_of(const MultiIndex& a) const {
  int key = 0;
  int total = 0;
  for (int i = dim - 1; i >= 0; --i) {
    if (a[i] < 0) return -1;
    total += a[i];
    key = key * (order + 1) + a[i];
  }
  if (total > order) return -1;
  return lookup_[key];
}

const MultiIndexTable& multi_index_table(int dim, int order) {
  check_dims(dim, order);
  static std::array<std::array<std::once_flag, kMaxJetOrder + 1>, kMaxJetDim> flags;
  static std::array<std::array<std::unique_ptr<MultiIndexTable>, kMaxJetOrder + 1>, kMaxJetDim>
      tables;
  auto& slot = tables[dim - 1][order];
  std::call_once(flags[dim - 1][order], [&] {
    auto t = build_table(dim, order);
    int base = order + 1;
    int span = 1;
    for (int i = 0; i < dim; ++i) span *= base;
    t->lookup_.assign(span, -1);
    for (std::size_t k = 0; k < t->alpha.size(); ++k) {
      int key = 0;
      for (int i = dim - 1; i >= 0; --i) key = key * base + t->alpha[k][i];
      t->lookup_[key] = static_cast<int>(k);
    }
    t->raise.resize(t->alpha.size());
    for (std::size_t k = 0; k < t->alpha.size(); ++k) {
      t->raise[k].fill(-1);
      for (int i = 0; i < dim; ++i) {
        MultiIndex up = t->alpha[k];
        ++up[i];
        t->raise[k][i] = t->index_of(up);
      }
    }
    for (std::size_t i = 0; i < t->alpha.size(); ++i) {
      for (std::size_t j = 0; j < t->alpha.size(); ++j) {
        if (t->degree[i] + t->degree[j] > order) continue;
        MultiIndex s{};
        for (int v = 0; v < dim; ++v) s[v] = t->alpha[i][v] + t->alpha[j][v];
        t->product.push_back({static_cast<int>(i), static_cast<int>(j), t->index_of(s)});
      }
    }
    std::stable_sort(t->product.begin(), t->product.end(),
                     [](const auto& a, const auto& b) { return a.out < b.out; });
    slot = std::move(t);
  });
  return *slot;
}

std::size_t jet_size(int dim, int order) {
  // C(order + dim, dim)
  std::size_t n = 1;
  for (int i = 1; i <= dim; ++i) n = n * static_cast<std::size_t>(order + i) / i;
  return n;
}

Jet::Jet(int dim, int order) : dim_(dim), order_(order) {
  check_dims(dim, order);
  c_.assign(jet_size(dim, order), 0.0);
}

Jet Jet::constant(int dim, int order, double value) {
  Jet j(dim, order);
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(int dim, int order, int slot, double at) {
  if (slot < 0 || slot >= dim) throw StructuralError("variable slot out of range");
  Jet j = constant(dim, order, at);
  if (order >= 1) {
    MultiIndex e{};
    e[slot] = 1;
    j.c_[j.table().index_of(e)] = 1.0;
  }
  return j;
}

double Jet::coeff(const MultiIndex& a) const {
  int k = table().index_of(a);
  return k < 0 ? 0.0 : c_[k];
}

double Jet::derivative(const MultiIndex& a) const {
  double fact = 1.0;
  for (int i = 0; i < dim_; ++i)
    for (int m = 2; m <= a[i]; ++m) fact *= m;
  return fact * coeff(a);
}

double Jet::gradient(int slot) const {
  MultiIndex e{};
  e[slot] = 1;
  return coeff(e);
}

Jet Jet::partial(int slot) const {
  if (order_ < 1) throw BudgetError("partial derivative of an order-0 jet");
  Jet out(dim_, order_ - 1);
  const auto& t = table();
  for (std::size_t k = 0; k < out.c_.size(); ++k) {
    int up = t.raise[k][slot];
    out.c_[k] = (t.alpha[k][slot] + 1) * c_[up];
  }
  return out;
}

Jet Jet::truncated(int order) const {
  if (order > order_) throw StructuralError("cannot raise jet order by truncation");
  Jet out = *this;
  out.order_ = order;
  out.c_.resize(jet_size(dim_, order));
  return out;
}

void Jet::require_compatible(const Jet& o, const char* op) const {
  if (dim_ != o.dim_ || order_ != o.order_)
    throw StructuralError(fmt::format("jet {}: shape mismatch ({},{}) vs ({},{})", op, dim_,
                                      order_, o.dim_, o.order_));
}

Jet& Jet::operator+=(const Jet& o) {
  require_compatible(o, "add");
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  require_compatible(o, "sub");
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }
Jet& Jet::operator/=(const Jet& o) { return *this = *this / o; }

Jet& Jet::operator+=(double s) {
  c_[0] += s;
  return *this;
}

Jet& Jet::operator-=(double s) {
  c_[0] -= s;
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Jet& Jet::operator/=(double s) {
  for (double& v : c_) v /= s;
  return *this;
}

Jet operator-(Jet a) {
  for (double& v : a.c_) v = -v;
  return a;
}

Jet operator-(double s, Jet a) {
  a = -std::move(a);
  return a += s;
}

Jet operator*(const Jet& a, const Jet& b) {
  a.require_compatible(b, "mul");
  Jet out(a.dim_, a.order_);
  for (const auto& t : a.table().product) out.c_[t.out] += a.c_[t.lhs] * b.c_[t.rhs];
  return out;
}

Jet operator/(const Jet& a, const Jet& b) {
  a.require_compatible(b, "div");
  return a * (1.0 / b);
}

Jet operator/(double s, const Jet& a) {
  double a0 = a.value();
  if (a0 == 0.0) throw DomainError("div", a0);
  std::vector<double> c(a.order() + 1);
  double p = 1.0 / a0;
  for (int k = 0; k <= a.order(); ++k) {
    c[k] = (k % 2 == 0 ? p : -p) * s;
    p /= a0;
  }
  return compose_series(c, a);
}

int common_order(const Jet& a, const Jet& b) { return std::min(a.order(), b.order()); }

// ---------------------------------------------------------------------------
// Univariate series helpers

namespace {

using Series = std::vector<double>;

Series series_div(const Series& a, const Series& b) {
  Series q(a.size(), 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) {
    double s = a[k];
    for (std::size_t j = 1; j <= k; ++j) s -= b[j] * q[k - j];
    q[k] = s / b[0];
  }
  return q;
}

// u^p for a series with u[0] > 0 (or integral p).
Series series_pow(const Series& u, double p) {
  Series w(u.size(), 0.0);
  w[0] = std::pow(u[0], p);
  for (std::size_t k = 1; k < u.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j)
      s += ((p + 1.0) * static_cast<double>(j) - static_cast<double>(k)) * u[j] * w[k - j];
    w[k] = s / (static_cast<double>(k) * u[0]);
  }
  return w;
}

Series integrate(const Series& d, double c0) {
  Series out(d.size(), 0.0);
  out[0] = c0;
  for (std::size_t k = 1; k < d.size(); ++k) out[k] = d[k - 1] / static_cast<double>(k);
  return out;
}

// Series of a function whose k-th derivative cycles through `cycle`.
Series cyclic(const std::array<double, 4>& cycle, int period, int order) {
  Series c(order + 1);
  double fact = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 1) fact *= k;
    c[k] = cycle[k % period] / fact;
  }
  return c;
}

Series sin_series(double a, int order) {
  double s = std::sin(a), co = std::cos(a);
  return cyclic({s, co, -s, -co}, 4, order);
}

Series cos_series(double a, int order) {
  double s = std::sin(a), co = std::cos(a);
  return cyclic({co, -s, -co, s}, 4, order);
}

Series sinh_series(double a, int order) {
  return cyclic({std::sinh(a), std::cosh(a), 0, 0}, 2, order);
}

Series cosh_series(double a, int order) {
  return cyclic({std::cosh(a), std::sinh(a), 0, 0}, 2, order);
}

Series one_series(int order) {
  Series c(order + 1, 0.0);
  c[0] = 1.0;
  return c;
}

Series binomial_series(double a0, double p, int order) {
  Series c(order + 1);
  double coef = 1.0;
  for (int k = 0; k <= order; ++k) {
    c[k] = coef * std::pow(a0, p - k);
    coef *= (p - k) / (k + 1);
  }
  return c;
}

bool is_integral(double p) { return std::abs(p) <= 64 && p == std::round(p); }

}  // namespace

std::string_view name(Elementary fn) {
  switch (fn) {
    case Elementary::Sin: return "sin";
    case Elementary::Cos: return "cos";
    case Elementary::Tan: return "tan";
    case Elementary::Csc: return "csc";
    case Elementary::Sec: return "sec";
    case Elementary::Cot: return "cot";
    case Elementary::Sinh: return "sinh";
    case Elementary::Cosh: return "cosh";
    case Elementary::Tanh: return "tanh";
    case Elementary::Sech: return "sech";
    case Elementary::Exp: return "exp";
    case Elementary::Ln: return "ln";
    case Elementary::Sqrt: return "sqrt";
    case Elementary::Asinh: return "asinh";
    case Elementary::Atan: return "atan";
  }
  return "?";
}

std::optional<Elementary> elementary_from_name(std::string_view n) {
  static constexpr Elementary all[] = {
      Elementary::Sin,  Elementary::Cos,  Elementary::Tan,  Elementary::Csc,   Elementary::Sec,
      Elementary::Cot,  Elementary::Sinh, Elementary::Cosh, Elementary::Tanh,  Elementary::Sech,
      Elementary::Exp,  Elementary::Ln,   Elementary::Sqrt, Elementary::Asinh, Elementary::Atan,
  };
  if (n == "log") return Elementary::Ln;
  for (Elementary fn : all)
    if (name(fn) == n) return fn;
  return std::nullopt;
}

std::vector<double> taylor_coefficients(Elementary fn, double a, int order) {
  auto fail = [&] { return DomainError(std::string(name(fn)), a); };
  switch (fn) {
    case Elementary::Sin: return sin_series(a, order);
    case Elementary::Cos: return cos_series(a, order);
    case Elementary::Tan: {
      if (std::cos(a) == 0.0) throw fail();
      return series_div(sin_series(a, order), cos_series(a, order));
    }
    case Elementary::Csc: {
      if (std::sin(a) == 0.0) throw fail();
      return series_div(one_series(order), sin_series(a, order));
    }
    case Elementary::Sec: {
      if (std::cos(a) == 0.0) throw fail();
      return series_div(one_series(order), cos_series(a, order));
    }
    case Elementary::Cot: {
      if (std::sin(a) == 0.0) throw fail();
      return series_div(cos_series(a, order), sin_series(a, order));
    }
    case Elementary::Sinh: return sinh_series(a, order);
    case Elementary::Cosh: return cosh_series(a, order);
    case Elementary::Tanh: return series_div(sinh_series(a, order), cosh_series(a, order));
    case Elementary::Sech: return series_div(one_series(order), cosh_series(a, order));
    case Elementary::Exp: {
      Series c(order + 1);
      double v = std::exp(a);
      for (int k = 0; k <= order; ++k) {
        c[k] = v;
        v /= (k + 1);
      }
      return c;
    }
    case Elementary::Ln: {
      if (!(a > 0.0)) throw fail();
      Series c(order + 1);
      c[0] = std::log(a);
      double p = 1.0;
      for (int k = 1; k <= order; ++k) {
        p /= a;
        c[k] = (k % 2 == 1 ? p : -p) / k;
      }
      return c;
    }
    case Elementary::Sqrt: {
      if (!(a > 0.0)) throw fail();
      return binomial_series(a, 0.5, order);
    }
    case Elementary::Asinh: {
      Series u(order + 1, 0.0);
      u[0] = 1.0 + a * a;
      if (order >= 1) u[1] = 2.0 * a;
      if (order >= 2) u[2] = 1.0;
      Series d = series_pow(u, -0.5);
      return integrate(d, std::asinh(a));
    }
    case Elementary::Atan: {
      Series u(order + 1, 0.0);
      u[0] = 1.0 + a * a;
      if (order >= 1) u[1] = 2.0 * a;
      if (order >= 2) u[2] = 1.0;
      Series d = series_div(one_series(order), u);
      return integrate(d, std::atan(a));
    }
  }
  throw fail();
}

double apply(Elementary fn, double x) { return taylor_coefficients(fn, x, 0)[0]; }

Jet compose_series(std::span<const double> c, const Jet& a) {
  int order = a.order();
  Jet h = a;
  h -= a.value();
  Jet r = Jet::constant(a.dim(), order, c[order]);
  for (int k = order - 1; k >= 0; --k) {
    r = r * h;
    r += c[k];
  }
  return r;
}

Jet compose(Elementary fn, const Jet& a) {
  return compose_series(taylor_coefficients(fn, a.value(), a.order()), a);
}

Jet sin(const Jet& a) { return compose(Elementary::Sin, a); }
Jet cos(const Jet& a) { return compose(Elementary::Cos, a); }
Jet tan(const Jet& a) { return compose(Elementary::Tan, a); }
Jet exp(const Jet& a) { return compose(Elementary::Exp, a); }
Jet log(const Jet& a) { return compose(Elementary::Ln, a); }
Jet sqrt(const Jet& a) { return compose(Elementary::Sqrt, a); }
Jet sinh(const Jet& a) { return compose(Elementary::Sinh, a); }
Jet cosh(const Jet& a) { return compose(Elementary::Cosh, a); }
Jet atan(const Jet& a) { return compose(Elementary::Atan, a); }
Jet asinh(const Jet& a) { return compose(Elementary::Asinh, a); }

Jet pow(const Jet& a, double p) {
  if (is_integral(p)) {
    auto n = static_cast<long>(std::abs(p));
    Jet result = Jet::constant(a.dim(), a.order(), 1.0);
    Jet base = a;
    while (n > 0) {
      if (n & 1) result = result * base;
      n >>= 1;
      if (n > 0) base = base * base;
    }
    return p < 0 ? 1.0 / result : result;
  }
  if (!(a.value() > 0.0)) throw DomainError("pow", a.value());
  return compose_series(binomial_series(a.value(), p, a.order()), a);
}

Jet pow(const Jet& a, const Jet& b) {
  auto coeffs = b.coeffs();
  bool constant_exponent =
      std::all_of(coeffs.begin() + 1, coeffs.end(), [](double v) { return v == 0.0; });
  if (constant_exponent) return pow(a, b.value());
  if (!(a.value() > 0.0)) throw DomainError("pow", a.value());
  return exp(b * log(a));
}

Jet atan2(const Jet& y, const Jet& x) {
  double y0 = y.value(), x0 = x.value();
  if (x0 == 0.0 && y0 == 0.0) throw DomainError("atan2", 0.0);
  double theta = std::atan2(y0, x0);
  Jet r = std::abs(x0) >= std::abs(y0) ? atan(y / x) : -atan(x / y);
  // only the branch shift differs from the quotient form
  r.coeffs()[0] = theta;
  return r;
}

}  // namespace bicontact
