#include "bicontact/riemannian.hpp"

#include <array>
#include <cmath>
#include <mutex>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "bicontact/errors.hpp"

namespace bicontact {

namespace {

int pair_rank(int n, int k, int l) {
  return combinations(n, 2).rank[(1u << k) | (1u << l)];
}

// Unknowns are Gamma^i_jk with i < j; the equations are the coframe
// coefficients c^i_ab (a < b) of dw^i = sum (Gamma^i_ab - Gamma^i_ba) w^a ^ w^b.
// The map is constant, so its inverse is computed once per dimension.
const Eigen::MatrixXd& structure_inverse(int n) {
  static std::array<Eigen::MatrixXd, kMaxJetDim + 1> cache;
  static std::array<std::once_flag, kMaxJetDim + 1> once;
  std::call_once(once[n], [n] {
    int pairs = n * (n - 1) / 2;
    int size = pairs * n;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size, size);
    auto unknown = [&](int i, int j, int k, double s, int row) {
      if (i == j) return;
      int col = (i < j ? pair_rank(n, i, j) : pair_rank(n, j, i)) * n + k;
      a(row, col) += i < j ? s : -s;
    };
    for (int i = 0; i < n; ++i)
      for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) {
          int row = i * pairs + pair_rank(n, x, y);
          unknown(i, x, y, 1.0, row);
          unknown(i, y, x, -1.0, row);
        }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) throw Error("Levi-Civita system is singular");
    cache[n] = lu.inverse();
  });
  return cache[n];
}

}  // namespace

Form Connection::form(int i, int j, const Frame& f) const {
  Form out = Form::zero(n_, 1, std::min(order(), frame_budget(f)));
  for (int k = 0; k < n_; ++k) out += f[k] * (*this)(i, j, k);
  return out;
}

double structure_residual(const Connection& c, const Frame& f) {
  double worst = 0.0;
  for (int i = 0; i < c.dim(); ++i) {
    Form r = ext_d(f[i], "levi_civita");
    for (int j = 0; j < c.dim(); ++j) r += wedge(c.form(i, j, f), f[j]);
    worst = std::max(worst, r.max_abs());
  }
  return worst;
}

Connection levi_civita(const Frame& f) {
  int n = static_cast<int>(f.size());
  if (n < 2 || n != f[0].dim()) throw StructuralError("levi_civita needs a full coframe");
  int pairs = n * (n - 1) / 2;
  DualFrame e = dual_frame(f);
  std::vector<Jet> rhs;
  for (int i = 0; i < n; ++i) {
    auto c = expand_in_coframe(ext_d(f[i], "levi_civita"), e);
    rhs.insert(rhs.end(), c.begin(), c.end());
  }
  const Eigen::MatrixXd& inv = structure_inverse(n);
  int size = pairs * n;
  int order = rhs.front().order();
  std::vector<Jet> x(size, Jet(n, order));
  for (int r = 0; r < size; ++r)
    for (int s = 0; s < size; ++s)
      if (inv(r, s) != 0.0) x[r] += rhs[s] * inv(r, s);

  std::vector<Jet> g(n * n * n, Jet(n, order));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      int p = i < j ? pair_rank(n, i, j) : pair_rank(n, j, i);
      for (int k = 0; k < n; ++k) g[(i * n + j) * n + k] = i < j ? x[p * n + k] : -x[p * n + k];
    }
  Connection c(n, std::move(g));
  c.structure_residual = structure_residual(c, f);
  return c;
}

Connection perturbed(const Connection& c, int i, int j, int k, double delta) {
  int n = c.dim();
  std::vector<Jet> g;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int m = 0; m < n; ++m) g.push_back(c(a, b, m));
  g[(i * n + j) * n + k] += delta;
  g[(j * n + i) * n + k] -= delta;
  return Connection(n, std::move(g));
}

double Curvature::value(int i, int j, int k, int l) const {
  if (k == l) return 0.0;
  if (k > l) return -value(i, j, l, k);
  int pairs = n_ * (n_ - 1) / 2;
  return r_[(i * n_ + j) * pairs + pair_rank(n_, k, l)].value();
}

Curvature curvature(const Connection& c, const Frame& f) {
  int n = c.dim();
  std::vector<Form> w;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w.push_back(c.form(i, j, f));
  DualFrame e = dual_frame(f);
  std::vector<Form> theta;
  std::vector<Jet> r;
  double bianchi = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Form t = ext_d(w[i * n + j], "curvature");
      for (int k = 0; k < n; ++k) t += wedge(w[i * n + k], w[k * n + j]);
      auto coeffs = expand_in_coframe(t, e);
      r.insert(r.end(), coeffs.begin(), coeffs.end());
      theta.push_back(std::move(t));
    }
  for (int i = 0; i < n; ++i) {
    Form b = Form::zero(n, 3, theta.front().budget());
    for (int j = 0; j < n; ++j) b += wedge(theta[i * n + j], f[j]);
    bianchi = std::max(bianchi, b.max_abs());
  }
  Curvature out(n, std::move(r), std::move(theta));
  out.bianchi_residual = bianchi;
  return out;
}

double scalar_curvature(const Curvature& R) {
  double s = 0.0;
  for (int i = 0; i < R.dim(); ++i)
    for (int j = i + 1; j < R.dim(); ++j) s += 2.0 * R.sectional(i, j);
  return s;
}

double pfaffian_ratio(const Curvature& R, const Frame& f) {
  if (R.dim() != 4) throw StructuralError("the Pfaffian is implemented for 4D coframes");
  Form pf = wedge(R.theta(0, 1), R.theta(2, 3)) - wedge(R.theta(0, 2), R.theta(1, 3)) +
            wedge(R.theta(0, 3), R.theta(1, 2));
  return top_ratio(pf, volume(f)).value();
}

std::vector<std::vector<double>> shape_operator(const Connection& c, int normal) {
  std::vector<int> tangent;
  for (int i = 0; i < c.dim(); ++i)
    if (i != normal) tangent.push_back(i);
  std::vector<std::vector<double>> s;
  for (int a : tangent) {
    s.emplace_back();
    for (int b : tangent) s.back().push_back(c.value(normal, a, b));
  }
  return s;
}

LeafGeometry leaf_geometry(const Frame& f, const Connection& c, const Curvature& R, double tol) {
  if (c.dim() != 3) throw StructuralError("leaf_geometry handles 3D coframes");
  LeafGeometry g;
  g.defect = frobenius_defect(f[2], f).value();
  if (std::abs(g.defect) > tol) throw NotIntegrable(g.defect);
  g.S = shape_operator(c, 2);
  g.H = 0.5 * (g.S[0][0] + g.S[1][1]);
  double det = g.S[0][0] * g.S[1][1] - g.S[0][1] * g.S[1][0];
  g.K_gauss = R.sectional(0, 1) + det;
  // Pullback to a leaf keeps only the w1 ^ w2 component.
  auto d12 = expand_in_coframe(ext_d(c.form(0, 1, f), "leaf_geometry"), dual_frame(f));
  g.K_leaf = d12[pair_rank(3, 0, 1)].value();
  return g;
}

}  // namespace bicontact
