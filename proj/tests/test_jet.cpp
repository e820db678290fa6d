#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "bicontact/errors.hpp"
#include "bicontact/jet.hpp"

using namespace bicontact;

namespace {

using Poly = std::map<MultiIndex, double>;

Poly random_poly(std::mt19937& rng, int dim, int degree) {
  std::uniform_int_distribution<int> coef(-5, 5);
  Poly p;
  const auto& t = multi_index_table(dim, degree);
  for (const auto& a : t.alpha) p[a] = coef(rng);
  return p;
}

// Jet at the origin of a polynomial is its coefficient list.
Jet jet_of(const Poly& p, int dim, int order) {
  Jet j(dim, order);
  for (const auto& [a, c] : p) {
    int k = j.table().index_of(a);
    if (k >= 0) j.coeffs()[k] = c;
  }
  return j;
}

Poly multiply(const Poly& f, const Poly& g, int dim) {
  Poly out;
  for (const auto& [a, ca] : f)
    for (const auto& [b, cb] : g) {
      MultiIndex s{};
      for (int i = 0; i < dim; ++i) s[i] = a[i] + b[i];
      out[s] += ca * cb;
    }
  return out;
}

}  // namespace

TEST(JetArithmetic, DifferenceOfSquares) {
  Jet x = Jet::variable(3, 2, 0, 0.0);
  Jet p = (1.0 + x) * (1.0 - x);
  EXPECT_EQ(p.coeff({0, 0, 0}), 1.0);
  EXPECT_EQ(p.coeff({1, 0, 0}), 0.0);
  EXPECT_EQ(p.coeff({2, 0, 0}), -1.0);
  EXPECT_EQ(p.coeff({1, 1, 0}), 0.0);
}

TEST(JetArithmetic, ProductGradient) {
  Jet x = Jet::variable(3, 1, 0, 1.0);
  Jet y = Jet::variable(3, 1, 1, 2.0);
  Jet p = x * y;
  EXPECT_EQ(p.value(), 2.0);
  EXPECT_EQ(p.gradient(0), 2.0);
  EXPECT_EQ(p.gradient(1), 1.0);
  EXPECT_EQ(p.gradient(2), 0.0);
}

TEST(JetArithmetic, ProductMatchesPolynomialExpansion) {
  std::mt19937 rng(7);
  for (int dim : {3, 4}) {
    for (int order : {2, 4, 6}) {
      for (int trial = 0; trial < 5; ++trial) {
        Poly f = random_poly(rng, dim, 3);
        Poly g = random_poly(rng, dim, 3);
        Jet prod = jet_of(f, dim, order) * jet_of(g, dim, order);
        Jet expected = jet_of(multiply(f, g, dim), dim, order);
        for (std::size_t k = 0; k < prod.coeffs().size(); ++k)
          ASSERT_EQ(prod.coeffs()[k], expected.coeffs()[k]) << "dim " << dim << " order " << order;
      }
    }
  }
}

TEST(JetArithmetic, RingAxiomsOnIntegerPolynomials) {
  std::mt19937 rng(11);
  for (int dim : {3, 4}) {
    const int order = kDefaultOrder;
    for (int trial = 0; trial < 10; ++trial) {
      Jet a = jet_of(random_poly(rng, dim, 3), dim, order);
      Jet b = jet_of(random_poly(rng, dim, 3), dim, order);
      Jet c = jet_of(random_poly(rng, dim, 3), dim, order);
      Jet l1 = (a * b) * c, r1 = a * (b * c);
      Jet l2 = a * (b + c), r2 = a * b + a * c;
      Jet l3 = a * b, r3 = b * a;
      for (std::size_t k = 0; k < l1.coeffs().size(); ++k) {
        ASSERT_EQ(l1.coeffs()[k], r1.coeffs()[k]);
        ASSERT_EQ(l2.coeffs()[k], r2.coeffs()[k]);
        ASSERT_EQ(l3.coeffs()[k], r3.coeffs()[k]);
      }
    }
  }
}

TEST(JetArithmetic, ShapeMismatchIsStructuralError) {
  Jet a = Jet::variable(3, 2, 0, 0.5);
  Jet b = Jet::variable(3, 3, 0, 0.5);
  Jet c = Jet::variable(4, 2, 0, 0.5);
  EXPECT_THROW(a + b, StructuralError);
  EXPECT_THROW(a * c, StructuralError);
}

TEST(JetArithmetic, TruncationIsPrefix) {
  Jet x = Jet::variable(4, 5, 2, 0.3);
  Jet f = exp(x) * sin(x);
  Jet g = f.truncated(3);
  EXPECT_EQ(g.order(), 3);
  for (std::size_t k = 0; k < g.coeffs().size(); ++k) EXPECT_EQ(g.coeffs()[k], f.coeffs()[k]);
}

TEST(JetArithmetic, PartialOfOrderZeroIsBudgetError) {
  Jet x = Jet::variable(3, 0, 0, 1.0);
  EXPECT_THROW(x.partial(0), BudgetError);
}

TEST(JetArithmetic, DivisionByZeroValue) {
  Jet x = Jet::variable(3, 2, 0, 0.0);
  Jet one = Jet::constant(3, 2, 1.0);
  EXPECT_THROW(one / x, DomainError);
}

TEST(JetElementary, ExpAtOrigin) {
  Jet x = Jet::variable(3, 3, 0, 0.0);
  Jet e = exp(x);
  EXPECT_DOUBLE_EQ(e.coeff({0, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(e.coeff({1, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(e.coeff({2, 0, 0}), 0.5);
  EXPECT_DOUBLE_EQ(e.coeff({3, 0, 0}), 1.0 / 6.0);
}

TEST(JetElementary, SinAtHalfPi) {
  Jet x = Jet::variable(3, 2, 0, std::numbers::pi / 2);
  Jet s = sin(x);
  EXPECT_DOUBLE_EQ(s.value(), 1.0);
  EXPECT_NEAR(s.gradient(0), 0.0, 1e-16);
  EXPECT_DOUBLE_EQ(s.coeff({2, 0, 0}), -0.5);
}

TEST(JetElementary, LogAgainstFiniteDifferences) {
  const double y = 2.0, h = 1e-5;
  Jet j = log(Jet::variable(3, 2, 1, y));
  double d1 = (std::log(y + h) - std::log(y - h)) / (2 * h);
  EXPECT_NEAR(j.gradient(1) / d1, 1.0, 1e-6);
  // second derivative through a central difference of exact first derivatives
  double d2 = (1.0 / (y + h) - 1.0 / (y - h)) / (2 * h);
  EXPECT_NEAR(j.derivative({0, 2, 0}) / d2, 1.0, 1e-6);
}

TEST(JetElementary, DomainErrors) {
  auto at = [](double v) { return Jet::variable(3, 2, 0, v); };
  EXPECT_THROW(log(at(-1.0)), DomainError);
  EXPECT_THROW(sqrt(at(0.0)), DomainError);
  EXPECT_THROW(compose(Elementary::Csc, at(0.0)), DomainError);
  EXPECT_THROW(compose(Elementary::Cot, at(0.0)), DomainError);
  EXPECT_THROW(pow(at(-2.0), 0.5), DomainError);
  try {
    log(at(-3.0));
  } catch (const DomainError& e) {
    EXPECT_EQ(e.function(), "ln");
    EXPECT_EQ(e.value(), -3.0);
  }
}

TEST(JetElementary, IntegerPowerOfNegativeBase) {
  Jet x = Jet::variable(3, 3, 0, -2.0);
  Jet p = pow(x, 3.0);
  EXPECT_DOUBLE_EQ(p.value(), -8.0);
  EXPECT_DOUBLE_EQ(p.gradient(0), 12.0);
  Jet q = pow(x, -1.0);
  EXPECT_DOUBLE_EQ(q.value(), -0.5);
  EXPECT_DOUBLE_EQ(q.gradient(0), -0.25);
}

TEST(JetElementary, Atan2AllQuadrants) {
  for (double ang : {0.3, 1.4, 2.0, 3.0, -0.3, -1.7, -2.9}) {
    double r = 1.7;
    Jet x = Jet::constant(3, 2, r * std::cos(ang)) + 0.2 * Jet::variable(3, 2, 0, 0.0);
    Jet y = Jet::constant(3, 2, r * std::sin(ang)) + 0.5 * Jet::variable(3, 2, 1, 0.0);
    Jet t = atan2(y, x);
    EXPECT_NEAR(t.value(), ang, 1e-14);
    // d atan2 = (x dy - y dx) / r^2
    EXPECT_NEAR(t.gradient(0), -y.value() * 0.2 / (r * r), 1e-14);
    EXPECT_NEAR(t.gradient(1), x.value() * 0.5 / (r * r), 1e-14);
  }
}

// Every elementary function: order-1 coefficients against central
// differences of plain values, and order-2 (including mixed) coefficients
// against central differences of order-1 jets. Argument is a multivariate
// linear form so mixed partials are exercised.
TEST(JetElementary, FiniteDifferenceProperty) {
  const double h = 1e-5;
  const std::array<double, 3> w{0.3, -0.5, 0.2};
  std::mt19937 rng(42);
  struct Case {
    Elementary fn;
    double lo, hi;
  };
  const Case cases[] = {
      {Elementary::Sin, -3, 3},     {Elementary::Cos, -3, 3},    {Elementary::Tan, -1.2, 1.2},
      {Elementary::Csc, 0.2, 2.9},  {Elementary::Sec, -1.2, 1.2}, {Elementary::Cot, 0.2, 2.9},
      {Elementary::Sinh, -2, 2},    {Elementary::Cosh, -2, 2},   {Elementary::Tanh, -2, 2},
      {Elementary::Sech, -2, 2},    {Elementary::Exp, -2, 2},    {Elementary::Ln, 0.2, 4},
      {Elementary::Sqrt, 0.2, 4},   {Elementary::Asinh, -3, 3},  {Elementary::Atan, -3, 3},
  };
  for (const auto& c : cases) {
    std::uniform_real_distribution<double> base(c.lo, c.hi);
    for (int trial = 0; trial < 10; ++trial) {
      std::array<double, 3> p{};
      double s = base(rng);
      // choose the point so that the argument equals s
      p = {s / w[0], 0.0, 0.0};
      auto arg = [&](const std::array<double, 3>& q, int order) {
        Jet a = Jet::constant(3, order, 0.0);
        for (int i = 0; i < 3; ++i) a += w[i] * Jet::variable(3, order, i, q[i]);
        return a;
      };
      auto value = [&](std::array<double, 3> q) { return apply(c.fn, w[0] * q[0] + w[1] * q[1] + w[2] * q[2]); };
      Jet j = compose(c.fn, arg(p, 2));
      for (int i = 0; i < 3; ++i) {
        auto qp = p, qm = p;
        qp[i] += h;
        qm[i] -= h;
        double fd = (value(qp) - value(qm)) / (2 * h);
        EXPECT_LE(std::abs(j.gradient(i) - fd), 1e-6 * std::max(1.0, std::abs(fd)))
            << name(c.fn) << " at " << s;
        for (int k = 0; k < 3; ++k) {
          double gp = compose(c.fn, arg(qp, 1)).gradient(k);
          double gm = compose(c.fn, arg(qm, 1)).gradient(k);
          double fd2 = (gp - gm) / (2 * h);
          MultiIndex a{};
          ++a[i];
          ++a[k];
          EXPECT_LE(std::abs(j.derivative(a) - fd2), 1e-6 * std::max(1.0, std::abs(fd2)))
              << name(c.fn) << " d" << i << "d" << k << " at " << s;
        }
      }
    }
  }
}

TEST(JetElementary, TruncationConsistency) {
  for (int order = 1; order <= 8; ++order) {
    auto build = [](int k) {
      Jet x = Jet::variable(4, k, 0, 0.4);
      Jet y = Jet::variable(4, k, 1, 1.3);
      Jet z = Jet::variable(4, k, 2, -0.2);
      Jet w = Jet::variable(4, k, 3, 0.7);
      return sin(x * y) + exp(z) / (1.0 + w * w) + atan2(y, x) * sqrt(y) + pow(y, x);
    };
    Jet hi = build(order).truncated(order - 1);
    Jet lo = build(order - 1);
    for (std::size_t k = 0; k < lo.coeffs().size(); ++k)
      EXPECT_NEAR(hi.coeffs()[k], lo.coeffs()[k], 1e-15 * std::max(1.0, std::abs(lo.coeffs()[k])));
  }
}
