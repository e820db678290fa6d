#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bicontact/errors.hpp"
#include "bicontact/forms.hpp"
#include "support.hpp"

using namespace bicontact;
using testing_support::random_form;
using testing_support::random_point;

namespace {

Form dx(int dim, int i, int order, const std::vector<double>& p) {
  std::vector<Jet> c;
  for (int k = 0; k < dim; ++k) c.push_back(Jet::constant(dim, order, k == i ? 1.0 : 0.0));
  (void)p;
  return Form::one_form(c);
}

double max_abs_diff(const Form& a, const Form& b) { return (a - b).max_abs(); }

}  // namespace

TEST(Wedge, CoordinateVolume) {
  std::vector<double> p{0.1, 0.2, 0.3};
  Form v = wedge({dx(3, 0, 2, p), dx(3, 1, 2, p), dx(3, 0, 2, p) + dx(3, 2, 2, p)});
  EXPECT_EQ(v.degree(), 3);
  EXPECT_EQ(v[0].value(), 1.0);
}

TEST(Wedge, OneFormSquaresToZero) {
  std::mt19937 rng(1);
  for (int dim : {3, 4}) {
    for (int i = 0; i < 100; ++i) {
      auto p = random_point(rng, dim);
      Form a = random_form(rng, p, 1, 2);
      EXPECT_LE(wedge(a, a).max_abs(), 1e-15);
    }
  }
}

TEST(Wedge, GradedCommutativity) {
  std::mt19937 rng(2);
  for (int pa = 0; pa <= 2; ++pa) {
    for (int pb = 0; pa + pb <= 4; ++pb) {
      auto p = random_point(rng, 4);
      Form a = random_form(rng, p, pa, 1);
      Form b = random_form(rng, p, pb, 1);
      double sign = (pa * pb) % 2 ? -1.0 : 1.0;
      EXPECT_LE(max_abs_diff(wedge(a, b), sign * wedge(b, a)), 1e-14);
    }
  }
}

TEST(Wedge, DegreeOverflow) {
  std::vector<double> p{0.1, 0.2, 0.3};
  Form a = wedge(dx(3, 0, 1, p), dx(3, 1, 1, p));
  EXPECT_THROW(wedge(a, a), StructuralError);
}

TEST(ExteriorDerivative, XDy) {
  std::vector<double> p{0.4, -0.3, 0.2};
  Form a = Form::one_form({Jet::constant(3, 2, 0.0), Jet::variable(3, 2, 0, p[0]),
                           Jet::constant(3, 2, 0.0)});
  Form da = ext_d(a);
  EXPECT_EQ(da.at({0, 1}).value(), 1.0);
  EXPECT_EQ(da.at({0, 2}).value(), 0.0);
  EXPECT_EQ(da.at({1, 2}).value(), 0.0);
  EXPECT_EQ(da.budget(), 1);
}

TEST(ExteriorDerivative, SquaresToZero) {
  std::mt19937 rng(3);
  for (int dim : {3, 4}) {
    for (int i = 0; i < 100; ++i) {
      auto p = random_point(rng, dim);
      for (int deg = 0; deg + 2 <= dim; ++deg) {
        Form a = random_form(rng, p, deg, 3);
        EXPECT_LE(ext_d(ext_d(a)).max_abs(), 1e-12);
      }
    }
  }
}

TEST(ExteriorDerivative, GradedLeibniz) {
  std::mt19937 rng(4);
  for (int dim : {3, 4}) {
    for (int i = 0; i < 100; ++i) {
      auto p = random_point(rng, dim);
      for (int pa = 0; pa <= 2; ++pa) {
        int pb = dim - 1 - pa;
        if (pb < 0) continue;
        Form a = random_form(rng, p, pa, 2);
        Form b = random_form(rng, p, pb, 2);
        Form lhs = ext_d(wedge(a, b));
        Form rhs = wedge(ext_d(a), b) + (pa % 2 ? -1.0 : 1.0) * wedge(a, ext_d(b));
        EXPECT_LE(max_abs_diff(lhs, rhs), 1e-10);
      }
    }
  }
}

TEST(ExteriorDerivative, BudgetErrorNamesStage) {
  std::vector<double> p{0.1, 0.2, 0.3};
  Form a = dx(3, 0, 0, p);
  try {
    ext_d(a, "compute_C");
    FAIL();
  } catch (const BudgetError& e) {
    EXPECT_EQ(e.stage(), "compute_C");
  }
}

TEST(ExteriorDerivative, ExactMultipleAlongSameCoordinate) {
  // d(dz / (1 + z^2)) = 0
  std::vector<double> p{0.3, 0.1, 0.7};
  Jet z = Jet::variable(3, 3, 2, p[2]);
  Form w = dx(3, 2, 3, p) / (1.0 + z * z);
  EXPECT_LE(ext_d(w).max_abs(), 1e-16);
}

TEST(TopRatio, ScalarMultiple) {
  std::vector<double> p{0.1, 0.2, 0.3};
  Form v = wedge({dx(3, 0, 1, p), dx(3, 1, 1, p), dx(3, 2, 1, p)});
  EXPECT_EQ(top_ratio(2.0 * v, v).value(), 2.0);
  EXPECT_THROW(top_ratio(v, 0.0 * v), SingularVolumeError);
}

TEST(CoframeCoefficients, BasisTwoForm) {
  std::mt19937 rng(5);
  auto p = random_point(rng, 3);
  Frame f{random_form(rng, p, 1, 2), random_form(rng, p, 1, 2), random_form(rng, p, 1, 2)};
  auto b = coeffs_in_coframe(wedge(f[1], f[2]), f);
  EXPECT_NEAR(b[0].value(), 1.0, 1e-13);
  EXPECT_NEAR(b[1].value(), 0.0, 1e-13);
  EXPECT_NEAR(b[2].value(), 0.0, 1e-13);
}

TEST(CoframeCoefficients, ReconstructionAndDualRouteAgree) {
  std::mt19937 rng(6);
  for (int i = 0; i < 100; ++i) {
    auto p = random_point(rng, 3);
    Frame f{random_form(rng, p, 1, 2), random_form(rng, p, 1, 2), random_form(rng, p, 1, 2)};
    if (std::abs(volume(f)[0].value()) < 1e-2) continue;
    Form beta = random_form(rng, p, 2, 2);
    auto b = coeffs_in_coframe(beta, f);
    EXPECT_LE(max_abs_diff(reconstruct_2form(b, f), beta), 1e-10);
    auto e = dual_frame(f);
    auto c = expand_in_coframe(beta, e);
    // expand_in_coframe orders (12, 13, 23)
    EXPECT_NEAR(c[0].value(), b[2].value(), 1e-10);
    EXPECT_NEAR(c[1].value(), b[1].value(), 1e-10);
    EXPECT_NEAR(c[2].value(), b[0].value(), 1e-10);
  }
}

TEST(CoframeCoefficients, DualFramePairing) {
  std::mt19937 rng(7);
  for (int dim : {3, 4}) {
    auto p = random_point(rng, dim);
    Frame f;
    for (int i = 0; i < dim; ++i) f.push_back(random_form(rng, p, 1, 2));
    auto e = dual_frame(f);
    for (int i = 0; i < dim; ++i) {
      auto c = expand_in_coframe(f[i], e);
      for (int j = 0; j < dim; ++j) EXPECT_NEAR(c[j].value(), i == j ? 1.0 : 0.0, 1e-12);
    }
    std::vector<Jet> coeffs;
    Form beta = random_form(rng, p, 2, 2);
    EXPECT_LE(max_abs_diff(assemble(expand_in_coframe(beta, e), 2, f), beta), 1e-10);
  }
}

TEST(Frobenius, ClosedFormIsIntegrable) {
  std::mt19937 rng(8);
  auto p = random_point(rng, 3);
  Frame f{random_form(rng, p, 1, 2), random_form(rng, p, 1, 2), random_form(rng, p, 1, 2)};
  EXPECT_EQ(frobenius_defect(dx(3, 2, 2, p), f).value(), 0.0);
}
