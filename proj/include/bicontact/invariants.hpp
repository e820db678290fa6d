#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bicontact/coframe.hpp"

namespace bicontact {

// Numerical stand-ins for the exact trichotomies of the theory. Every report
// echoes these.
struct Tolerances {
  double shallow = 1e-9;      // identities involving at most first derivatives
  double deep = 1e-6;         // identities several derivative levels down
  double c3_zero = 1e-7;      // |C3| <= c3_zero * (1 + |dC|) means C3 = 0
  double case3 = 1e-10;       // B1^2 + B2^2 below this means case 3
  double linear_band = 1e-9;  // ||C| - 1| inside this band is the linear class
  double contact = 1e-12;     // |w ^ dw| / volume below this is not contact
  double translation = 1e-8;  // probe determinant floor for the A1, A2 translation
};

enum class CaseTag { ConstantC, Case1, Case2, Case3 };
enum class ClassTag { Elliptic, Hyperbolic, Linear };
std::string_view name(CaseTag t);
std::string_view name(ClassTag t);

using Residuals = std::vector<std::pair<std::string, double>>;

inline constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

// Pointwise invariants; fields the pipeline did not reach stay NaN.
struct InvariantRecord {
  Point point;
  int eps = 0;
  int delta = 1;
  double C = kUnset, C1 = kUnset, C2 = kUnset, C3 = kUnset;
  double C33 = kUnset, C333 = kUnset;
  double A1 = kUnset, A2 = kUnset, A3 = kUnset;
  double B1 = kUnset, B2 = kUnset, B3 = kUnset;
  double xi = kUnset, zeta = kUnset, zeta3 = kUnset;
  double rho = kUnset, W = kUnset, E = kUnset;
  std::optional<CaseTag> case_tag;
  std::optional<ClassTag> class_tag;
  Residuals residuals;

  void add(std::string name, double value) { residuals.emplace_back(std::move(name), value); }
  double residual(std::string_view name) const;
};

// One-adaptation ----------------------------------------------------------

struct OneAdaptation {
  Frame frame;
  int eps = 0;
  Jet scale2;  // omega^2 multiplier
  Jet scale3;  // omega^3 multiplier
};

// Rescales omega^2 and omega^3 so that w1^dw1 = w1^w2^w3 = -eps w2^dw2.
OneAdaptation one_adapt_frame(const Frame& raw, double contact_tol = 1e-12);
// Fixes eps over the samples (MixedEpsilon otherwise) and returns the lazily
// adapted coframe.
Coframe one_adapt(const Coframe& raw, std::span<const Point> samples);

// Invariant C and its derivatives ------------------------------------------

Jet compute_C(const Frame& f);

struct CDerivatives {
  Jet C;
  Jet C1, C2, C3;  // components of dC in the current coframe
  Jet C3_volume;   // C3 again, from (dC ^ w1 ^ w2) / Omega
};
CDerivatives compute_C3(const Frame& f);

struct QuadraticClassification {
  double C = 0.0;
  int eps = 0;
  ClassTag tag = ClassTag::Hyperbolic;
  std::string witness;
  double operator()(double a1, double a2) const;
};

QuadraticClassification classify(double C, int eps, double band = 1e-9);
double quadratic_form(double C, int eps, double a1, double a2);
// (w_a ^ dw_a) / Omega for constant a.
Jet contact_ratio(const Frame& f, double a1, double a2);

// a1 e3(a2) - a2 e3(a1).
Jet variable_coefficient_defect(const Frame& f, const Jet& a1, const Jet& a2);

// Taut transformations -----------------------------------------------------

// Signs of 1 + C and 1 - C, fixed per connected sample region.
struct CircleBranch {
  int plus = 1;
  int minus = 1;
};

struct TautCircle {
  Frame eta;
  CircleBranch branch;
  Jet C;
  Jet C3;
  // (eta1 ^ deta2 + eta2 ^ deta1) / Omega, predicted to be kappa * C3.
  Jet cross;
  Jet kappa;
};

TautCircle taut_circle_frame(const Frame& f, CircleBranch branch);
// Throws BranchError when 1 + C or 1 - C changes sign across the samples.
CircleBranch circle_branch(const Coframe& f, std::span<const Point> samples, int order);
Coframe taut_circle_transform(const Coframe& f, std::span<const Point> samples);

// (eta_a ^ deta_a) / Omega, and its value from the diagonalized form:
// s+ a1^2 + s- a2^2 + a1 a2 kappa C3.
Jet taut_circle_ratio(const TautCircle& t, double a1, double a2);
double taut_circle_prediction(const TautCircle& t, double a1, double a2);

struct TautHyperbola {
  Frame eta;
  Jet theta;
  Jet ratio1, ratio2;          // (eta^i ^ d eta^i) / Omega
  Jet predicted1, predicted2;  // Omega -/+ w1 ^ w2 ^ dtheta / (2 cosh^2 theta), over Omega
  Jet sum_defect;              // ratio1 + ratio2, which equals -C3 / (1 + C^2)^(3/2)
  Jet C3;
};

TautHyperbola taut_hyperbola_frame(const Frame& f);
Coframe taut_hyperbola_transform(const Coframe& f);

// Case detection ----------------------------------------------------------

struct CaseProbe {
  CaseTag tag = CaseTag::ConstantC;
  double dC_norm = 0.0;
  double C3 = 0.0;
  double B_sq = kUnset;
};

CaseProbe case_probe(const Frame& one_adapted, const Tolerances& tol);
// Majority tag over the samples; AmbiguousCase lists the dissenting points.
CaseTag case_detect(const Coframe& f, std::span<const Point> samples, int order,
                    const Tolerances& tol);

// Case 2 ------------------------------------------------------------------

struct Case2Jets {
  Frame frame;
  Jet C, C3;
  Jet scale;  // s = sqrt(B1^2 + B2^2) before normalization
  Jet zeta;
  Jet A1, A2, A3;
  Jet B1, B2, B3;
  // (23, 13, 12) coefficients of dw1 and dw2 in the adapted coframe
  std::array<Jet, 3> dw1, dw2;
};

Case2Jets case2_adapt_frame(const Frame& one_adapted, const Tolerances& tol);
Coframe case2_adapt(const Coframe& one_adapted, const Tolerances& tol = {});
// Fills C.., A.., B.., zeta, zeta3, W and the structure-equation residuals.
void fill_case2(InvariantRecord& r, const Case2Jets& c);

struct InvariantCoords {
  Jet C, C3, C33, C333;
  Jet omega_ratio;  // (dC ^ dC3 ^ dC33) / Omega
  Jet predicted;    // -C3^3 (1 - (1+eps) cos^2 zeta + 2 C sin zeta cos zeta + zeta3)
  Jet zeta3;
  double dC_dC3_residual = 0.0;
  // zeta solves the degenerate PDE, so Omega_C vanishes
  bool degenerate = false;
};

InvariantCoords invariant_coords(const Case2Jets& c, int eps, const Tolerances& tol = {});

// Case 1 ------------------------------------------------------------------

struct Translation {
  Frame frame;
  Jet b1, b2;
  double det = 0.0;
  Form dw1, dw2;  // unchanged by the translation
};

// Replaces w3 by w3 + b1 w1 + b2 w2 so that the w1 ^ w2 parts of dw1 and dw2
// vanish. (b1, b2) come from probing the affine dependence on b.
Translation kill_a12(const Frame& f, double det_floor);

struct Case1Jets {
  Frame frame;
  Jet C;
  Jet scale;  // s = sqrt(C1^2 + C2^2) before normalization
  Jet xi;
  Jet b1, b2;
  double probe_det = 0.0;
  Jet A1, A2, A3;
  Jet B1, B2, B3;
  std::array<Jet, 3> dw1, dw2;
};

Case1Jets case1_adapt_frame(const Frame& one_adapted, const Tolerances& tol);
Coframe case1_adapt(const Coframe& one_adapted, const Tolerances& tol = {});
void fill_case1(InvariantRecord& r, const Case1Jets& c, const Tolerances& tol);

// Cartan structures ---------------------------------------------------------

struct CartanStructure {
  Frame frame;
  Jet K;
  double dK_ratio = 0.0;   // (dK ^ w1 ^ w2) / Omega
  double residual = 0.0;   // worst structure-equation defect
};

std::optional<CartanStructure> cartan_structure_check(const Frame& one_adapted, double tol);

// Full pointwise pipeline ---------------------------------------------------

InvariantRecord analyze_point(const Coframe& f, std::span<const double> p, int order,
                              const Tolerances& tol);

}  // namespace bicontact
