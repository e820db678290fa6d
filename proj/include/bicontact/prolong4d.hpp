#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bicontact/coframe.hpp"
#include "bicontact/invariants.hpp"
#include "bicontact/riemannian.hpp"

namespace bicontact {

// Case-3 structures on a 4D chart, with 0-based slots w1..w4 -> 0..3:
//   dw1 = w1 ^ w4 - C w1 ^ w3 + w2 ^ w3
//   dw2 = w2 ^ w4 + C w2 ^ w3 + eps w1 ^ w3
//   dw3 = 0,  dw4 = E w1 ^ w2

struct EValue {
  Jet E;
  Jet E1, E2;  // dE = E1 w1 + E2 w2 + 2 E w4
  // max of |E3| and |E4 - 2E|; a declared constant E != 0 shows up here
  double dE_residual = 0.0;
};

// E = (dw4 ^ w3 ^ w4) / Omega4. Needs a budget of at least 2.
EValue compute_E(const Frame& f);

// C, eps and E read off the structure equations, with the defect of every
// other coefficient.
struct SympStructure {
  Jet C;
  int eps = 0;
  Jet E;
  Residuals residuals;
  double worst = 0.0;
};

SympStructure symp_structure(const Frame& f);

struct SymplecticCheck {
  double d_theta = 0.0;   // max |d theta^i|
  double theta11 = 0.0;   // theta1 ^ theta1 / Omega4 - 2
  double theta22 = 0.0;   // theta2 ^ theta2 / Omega4 + 2 eps
  double theta12 = 0.0;   // theta1 ^ theta2 / Omega4 - 2C
  // theta_a ^ theta_a / Omega4 - 2 P_C(a) for each sampled a
  std::vector<double> quadratic;
  double worst() const;
};

// theta^i = dw^i for i = 1, 2.
SymplecticCheck symplectic_quadratic_check(const Frame& f, int eps, double C,
                                           std::span<const std::pair<double, double>> a = {});

struct Curvature4 {
  Connection connection;
  Curvature curvature;
  // deviation of each displayed connection form, keyed "w1_2" etc.
  Residuals connection_residuals;
  double S = 0.0, S_predicted = 0.0;
  double Pf = 0.0, Pf_predicted = 0.0;
  double theta34 = 0.0;     // max |R^3_4kl|
  double leaf_trace = 0.0;  // trace of the shape operator of the w3-leaves
};

// Throws BudgetError below budget 2.
Curvature4 curvature4(const Frame& f, const SympStructure& s);

// Q'' = (C^2 + eps + C') Q on a z-interval ---------------------------------

struct QOde {
  std::string C = "0";  // expression in z
  int eps = -1;
  double z0 = 0.0;
  // (Q, Q') at z0
  std::array<double, 2> q1{0.0, 1.0};
  std::array<double, 2> q2{1.0, 0.0};
  double rtol = 1e-10;
  double atol = 1e-12;

  double wronskian0() const { return q1[0] * q2[1] - q1[1] * q2[0]; }
};

// (Q1, Q1', Q2, Q2') at z; throws OdeStepFailure when the integrator gives up.
std::array<double, 4> integrate_q(const QOde& ode, double z);

// max |W(z) - W0| over an even grid of the interval.
double wronskian_drift(const QOde& ode, double z_end, int steps = 100);

// Q1, Q2 as jets on a chart whose coordinate `slot` is z. The Taylor
// coefficients past the first come from the ODE itself.
std::array<Jet, 2> q_jets(const QOde& ode, int dim, int slot, double z, int order);

// Coordinates (x, y, z, w) with w > 0; h is a 2x2 matrix of expressions in
// (x, y), row-major. K = (h11 Q1 + h12 Q2) / sqrt(w), L = (h21 Q1 + h22 Q2) / sqrt(w),
//   w1 = K dx + L dy,  w2 = C w1 - (K_z dx + L_z dy),  w3 = dz,
//   w4 = dw / 2w - K^2 (f/K)_z dx - L^2 (f/L)_z dy,
// with f = w (L_x - K_y) / (W0 det h). E comes out as w.
Coframe normal_form_4d(const QOde& ode, const std::array<std::string, 4>& h = {"1", "0", "0", "1"});

// Round trip for a constructed normal form at p = (x, y, z, w), with E
// declared to be the coordinate w.
struct NormalForm4dCheck {
  double symp = 0.0;     // structure-equation defect with E := w
  double E_error = 0.0;  // compute_E - w
  double dE = 0.0;       // consistency residual of the computed E
};
NormalForm4dCheck check_normal_form_4d(const Coframe& f, std::span<const double> p, int order);

}  // namespace bicontact
