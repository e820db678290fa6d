#pragma once

#include <span>
#include <vector>

#include "bicontact/forms.hpp"

namespace bicontact {

// Levi-Civita connection of the metric sum (w^i)^2 for which the coframe is
// orthonormal. Convention: dw^i = -w^i_j ^ w^j with w^i_j = Gamma^i_jk w^k.
class Connection {
 public:
  Connection() = default;
  Connection(int n, std::vector<Jet> gamma) : n_(n), g_(std::move(gamma)) {}

  int dim() const { return n_; }
  // Gamma^i_jk, 0-based; skew in (i, j).
  const Jet& operator()(int i, int j, int k) const { return g_[(i * n_ + j) * n_ + k]; }
  double value(int i, int j, int k) const { return (*this)(i, j, k).value(); }
  // w^i_j in chart coordinates.
  Form form(int i, int j, const Frame& f) const;
  int order() const { return g_.empty() ? 0 : g_.front().order(); }

  // max |dw^i + w^i_j ^ w^j| over coordinate coefficients.
  double structure_residual = 0.0;

 private:
  int n_ = 0;
  std::vector<Jet> g_;
};

Connection levi_civita(const Frame& f);
// Same, with one entry Gamma^i_jk (i < j) shifted by delta; used as a
// negative control for the uniqueness of the solve.
Connection perturbed(const Connection& c, int i, int j, int k, double delta);
double structure_residual(const Connection& c, const Frame& f);

// Theta^i_j = dw^i_j + w^i_k ^ w^k_j, expanded in the coframe:
// Theta^i_j = sum_{k<l} R^i_jkl w^k ^ w^l.
class Curvature {
 public:
  Curvature() = default;
  Curvature(int n, std::vector<Jet> r, std::vector<Form> theta)
      : n_(n), r_(std::move(r)), theta_(std::move(theta)) {}

  int dim() const { return n_; }
  // R^i_jkl for k < l; the other orderings follow by skew symmetry.
  double value(int i, int j, int k, int l) const;
  const Form& theta(int i, int j) const { return theta_[i * n_ + j]; }
  // Theta^i_j(e_i, e_j).
  double sectional(int i, int j) const { return value(i, j, i, j); }

  double bianchi_residual = 0.0;  // max |Theta^i_j ^ w^j|

 private:
  int n_ = 0;
  std::vector<Jet> r_;  // [(i*n + j) * pairs + pair(k, l)]
  std::vector<Form> theta_;
};

Curvature curvature(const Connection& c, const Frame& f);

// Twice the sum of the sectional curvatures over i < j.
double scalar_curvature(const Curvature& R);
// Pf(Theta) / Omega for a 4D coframe, with
// Pf = Theta^1_2 ^ Theta^3_4 - Theta^1_3 ^ Theta^2_4 + Theta^1_4 ^ Theta^2_3.
double pfaffian_ratio(const Curvature& R, const Frame& f);

// Second fundamental form of the leaves of w^normal: S_ab = Gamma^normal_ab
// over the tangential indices.
std::vector<std::vector<double>> shape_operator(const Connection& c, int normal);

struct LeafGeometry {
  std::vector<std::vector<double>> S;
  double H = 0.0;            // half the trace of S
  double K_leaf = 0.0;       // from the pulled-back connection form
  double K_gauss = 0.0;      // Theta^1_2(e1, e2) + det S, the Gauss equation
  double defect = 0.0;       // (w3 ^ dw3) / Omega
};

// Leaves of w^3 on a 3D chart; throws NotIntegrable beyond tol.
LeafGeometry leaf_geometry(const Frame& f, const Connection& c, const Curvature& R, double tol);

}  // namespace bicontact
