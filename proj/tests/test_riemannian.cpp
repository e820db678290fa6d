#include <gtest/gtest.h>

#include <cmath>

#include "bicontact/errors.hpp"
#include "bicontact/examples.hpp"
#include "bicontact/invariants.hpp"
#include "bicontact/riemannian.hpp"

using namespace bicontact;

namespace {

const Tolerances kTol;

Frame case2_frame(const ExampleSpec& s, const Point& p, int order = 6) {
  Frame w = one_adapt_frame(s.coframe.at(p, order)).frame;
  return case2_adapt_frame(w, kTol).frame;
}

}  // namespace

TEST(LeviCivita, FlatFrame) {
  Coframe f = coframe_from_strings(Chart{{"x", "y", "z"}, {}}, {{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}});
  Frame w = f.at(Point{0.1, 0.2, 0.3}, 3);
  Connection c = levi_civita(w);
  Curvature R = curvature(c, w);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) EXPECT_EQ(c.value(i, j, k), 0.0);
  EXPECT_EQ(scalar_curvature(R), 0.0);
}

TEST(LeviCivita, SkewAndSolvesStructureEquations) {
  for (const auto& s : {example_hyp_C3(-1, "1+z^2"), eta_frame("x", "exp(x)"), example_T2xR(0.3)}) {
    for (const auto& p : sample_box(s.box, 6, 7)) {
      Frame w = one_adapt_frame(s.coframe.at(p, 3)).frame;
      Connection c = levi_civita(w);
      EXPECT_LE(c.structure_residual, 1e-12) << s.name;
      EXPECT_LE(structure_residual(c, w), 1e-12);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k) EXPECT_NEAR(c.value(i, j, k), -c.value(j, i, k), 1e-15);
    }
  }
}

// Any other skew connection fails the torsion-free equations.
TEST(LeviCivita, PerturbationBreaksStructureEquations) {
  ExampleSpec s = eta_frame();
  Frame w = one_adapt_frame(s.coframe.at(Point{0.5, 1.2, 0.1}, 3)).frame;
  Connection c = levi_civita(w);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        Connection q = perturbed(c, i, j, k, 1e-3);
        EXPECT_NEAR(q.value(i, j, k) - c.value(i, j, k), 1e-3, 1e-15);
        EXPECT_NEAR(q.value(j, i, k), -q.value(i, j, k), 1e-15);
        EXPECT_GT(structure_residual(q, w), 1e-4) << i << j << k;
      }
}

TEST(Curvature, SphereHasConstantQuarterCurvature) {
  ExampleSpec s = sphere_frame();
  for (const auto& p : sample_box(s.box, 10, 3)) {
    Frame w = s.coframe.at(p, 3);
    Connection c = levi_civita(w);
    Curvature R = curvature(c, w);
    EXPECT_NEAR(R.sectional(0, 1), 0.25, 1e-10);
    EXPECT_NEAR(R.sectional(0, 2), 0.25, 1e-10);
    EXPECT_NEAR(R.sectional(1, 2), 0.25, 1e-10);
    EXPECT_NEAR(R.value(0, 1, 0, 2), 0.0, 1e-10);
    EXPECT_NEAR(scalar_curvature(R), 1.5, 1e-10);
    EXPECT_LE(R.bianchi_residual, 1e-10);
  }
}

TEST(Curvature, ConstantCExample) {
  for (double psi : {0.0, 0.3, -0.45}) {
    ExampleSpec s = example_T2xR(psi, "z+z^3/3");
    double ch2 = std::pow(std::cosh(2 * psi), 2);
    for (const auto& p : sample_box(s.box, 6, 5)) {
      Frame w = s.coframe.at(p, 3);
      Connection c = levi_civita(w);
      Curvature R = curvature(c, w);
      EXPECT_NEAR(R.value(0, 1, 0, 1), ch2, 1e-9) << psi;
      EXPECT_LE(R.bianchi_residual, 1e-10);
      LeafGeometry g = leaf_geometry(w, c, R, 1e-9);
      EXPECT_NEAR(g.H, 0.0, 1e-10);
      EXPECT_NEAR(g.K_leaf, 0.0, 1e-10);
      EXPECT_NEAR(g.K_leaf, g.K_gauss, 1e-10);
    }
  }
}

// Rotating (w1, w2) by a quarter turn permutes the frame indices of R.
TEST(Curvature, TensorialUnderQuarterTurn) {
  ExampleSpec s = eta_frame("x", "1");
  for (const auto& p : sample_box(s.box, 6, 9)) {
    Frame w = one_adapt_frame(s.coframe.at(p, 3)).frame;
    Frame r{w[1], -w[0], w[2]};
    Curvature A = curvature(levi_civita(w), w);
    Curvature B = curvature(levi_civita(r), r);
    EXPECT_NEAR(B.sectional(0, 1), A.sectional(0, 1), 1e-9);
    EXPECT_NEAR(B.sectional(0, 2), A.sectional(1, 2), 1e-9);
    EXPECT_NEAR(B.sectional(1, 2), A.sectional(0, 2), 1e-9);
    // e1' = e2, e2' = -e1
    EXPECT_NEAR(B.value(0, 2, 1, 2), -A.value(1, 2, 0, 2), 1e-9);
    EXPECT_NEAR(scalar_curvature(A), scalar_curvature(B), 1e-9);
  }
}

TEST(Leaf, ContactThirdFormIsNotIntegrable) {
  ExampleSpec s = sphere_frame();
  Frame w = s.coframe.at(Point{1.0, 0.2, 0.3}, 3);
  Connection c = levi_civita(w);
  EXPECT_THROW(leaf_geometry(w, c, curvature(c, w), 1e-9), NotIntegrable);
}

// On a case-2 frame: H is A3 and the leaf curvature obeys the Gauss equation.
TEST(Leaf, Case2Frames) {
  const ExampleSpec specs[] = {normal_form_3d(1), normal_form_3d(-1, "sin(x)", "exp(x)"), eta_frame(),
                               eta_frame("x^2", "cos(x)")};
  for (const auto& s : specs) {
    for (const auto& p : sample_box(s.box, 6, 13)) {
      Frame w = one_adapt_frame(s.coframe.at(p, 6)).frame;
      Case2Jets c2 = case2_adapt_frame(w, kTol);
      Connection c = levi_civita(c2.frame);
      Curvature R = curvature(c, c2.frame);
      LeafGeometry g = leaf_geometry(c2.frame, c, R, 1e-9);
      EXPECT_NEAR(g.H, c2.A3.value(), 1e-8) << s.name;
      EXPECT_NEAR(g.K_leaf, g.K_gauss, 1e-8) << s.name;
      double det = g.S[0][0] * g.S[1][1] - g.S[0][1] * g.S[1][0];
      EXPECT_NEAR(g.K_gauss - det, R.value(0, 1, 0, 1), 1e-12);
    }
  }
}

// For the eps = 1 normal form with f = g = 0 the ambient Theta^1_2 vanishes
// and the leaf curvature is A3^2 - C^2 - 1. With eps = -1 Theta^1_2 is 1.
TEST(Leaf, NormalFormLeafCurvature) {
  {
    const int eps = 1;
    ExampleSpec s = normal_form_3d(eps);
    for (const auto& p : sample_box(s.box, 6, 2)) {
      Frame w = one_adapt_frame(s.coframe.at(p, 6)).frame;
      Case2Jets c2 = case2_adapt_frame(w, kTol);
      Connection c = levi_civita(c2.frame);
      Curvature R = curvature(c, c2.frame);
      LeafGeometry g = leaf_geometry(c2.frame, c, R, 1e-9);
      double A3 = c2.A3.value(), C = c2.C.value();
      EXPECT_NEAR(R.value(0, 1, 0, 1), 0.0, 1e-8);
      EXPECT_NEAR(g.K_leaf, A3 * A3 - C * C - 0.5 * (1 + eps), 1e-8);
    }
  }
  ExampleSpec s = normal_form_3d(-1);
  for (const auto& p : sample_box(s.box, 6, 2)) {
    Frame w = case2_frame(s, p);
    Curvature R = curvature(levi_civita(w), w);
    EXPECT_NEAR(R.value(0, 1, 0, 1), 1.0, 1e-8);
  }
}

// In general A3^2 - C^2 - (1 + eps)/2 is det S, and the leaf curvature
// differs from it by the ambient Theta^1_2(e1, e2).
TEST(Leaf, LeafCurvatureCarriesAmbientTerm) {
  const ExampleSpec specs[] = {normal_form_3d(1, "sin(x)"), normal_form_3d(-1), normal_form_3d(-1, "0", "exp(x)"),
                               eta_frame(),
                               eta_frame("x^2", "cos(x)")};
  for (const auto& s : specs) {
    for (const auto& p : sample_box(s.box, 6, 2)) {
      Frame w = one_adapt_frame(s.coframe.at(p, 6)).frame;
      int eps = one_adapt_frame(s.coframe.at(p, 1)).eps;
      Case2Jets c2 = case2_adapt_frame(w, kTol);
      Connection c = levi_civita(c2.frame);
      Curvature R = curvature(c, c2.frame);
      LeafGeometry g = leaf_geometry(c2.frame, c, R, 1e-9);
      double A3 = c2.A3.value(), C = c2.C.value();
      double claim = A3 * A3 - C * C - 0.5 * (1 + eps);
      double det = g.S[0][0] * g.S[1][1] - g.S[0][1] * g.S[1][0];
      EXPECT_NEAR(claim, det, 1e-8) << s.name;
      EXPECT_NEAR(g.K_leaf - claim, R.value(0, 1, 0, 1), 1e-7) << s.name;
    }
  }
}

TEST(Curvature, NeedsBudget) {
  ExampleSpec s = sphere_frame();
  Frame w = s.coframe.at(Point{1.0, 0.2, 0.3}, 1);
  Connection c = levi_civita(w);
  EXPECT_THROW(curvature(c, w), BudgetError);
}
