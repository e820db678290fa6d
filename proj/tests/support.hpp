#pragma once

#include <random>
#include <vector>

#include "bicontact/forms.hpp"

namespace testing_support {

using namespace bicontact;

// A random smooth scalar built from linear forms and elementary functions.
class RandomField {
 public:
  RandomField(std::mt19937& rng, int dim) : dim_(dim) {
    std::uniform_real_distribution<double> u(-1, 1);
    for (auto* v : {&a_, &b_, &c_}) {
      v->resize(dim + 1);
      for (double& x : *v) x = u(rng);
    }
  }

  Jet operator()(const std::vector<double>& p, int order) const {
    auto lin = [&](const std::vector<double>& w) {
      Jet s = Jet::constant(dim_, order, w[dim_]);
      for (int i = 0; i < dim_; ++i) s += w[i] * Jet::variable(dim_, order, i, p[i]);
      return s;
    };
    return sin(lin(a_)) * exp(lin(b_)) + atan(lin(c_)) * lin(a_);
  }

 private:
  int dim_;
  std::vector<double> a_, b_, c_;
};

inline Form random_form(std::mt19937& rng, const std::vector<double>& p, int degree, int order) {
  int dim = static_cast<int>(p.size());
  Form f(dim, degree, order);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = RandomField(rng, dim)(p, order);
  return f;
}

inline std::vector<double> random_point(std::mt19937& rng, int dim, double lo = -1, double hi = 1) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> p(dim);
  for (double& x : p) x = u(rng);
  return p;
}

}  // namespace testing_support

#include <array>
#include <functional>

#include "bicontact/coframe.hpp"

namespace testing_support {

// Finite-difference oracle for 3D coframes: plain doubles, central
// differences of the coefficient values, no jets past order 0.
struct FdFrame {
  std::array<std::array<double, 3>, 3> a{};        // a[i][j]: dx^j coefficient of w^i
  std::array<std::array<std::array<double, 3>, 3>, 3> d{};  // d[i][j][k]: (dw^i)_jk
};

inline FdFrame fd_frame(const Coframe& f, const std::vector<double>& p, double h = 1e-5) {
  auto values = [&](const std::vector<double>& q) {
    Frame w = f.at(q, 0);
    std::array<std::array<double, 3>, 3> a{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a[i][j] = w[i][j].value();
    return a;
  };
  FdFrame out;
  out.a = values(p);
  std::array<std::array<std::array<double, 3>, 3>, 3> grad{};  // grad[i][j][k] = d_k a_ij
  for (int k = 0; k < 3; ++k) {
    auto hi = p, lo = p;
    hi[k] += h;
    lo[k] -= h;
    auto ah = values(hi), al = values(lo);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) grad[i][j][k] = (ah[i][j] - al[i][j]) / (2 * h);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out.d[i][j][k] = grad[i][k][j] - grad[i][j][k];
  return out;
}

// dx^0 ^ dx^1 ^ dx^2 coefficient of (1-form) ^ (2-form).
inline double fd_wedge(const std::array<double, 3>& a, const std::array<std::array<double, 3>, 3>& d) {
  return a[0] * d[1][2] + a[1] * d[2][0] + a[2] * d[0][1];
}

inline double fd_volume(const FdFrame& f) {
  const auto& a = f.a;
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

// (w1 ^ dw2 + w2 ^ dw1) / (2 Omega) for an already one-adapted coframe.
inline double fd_C(const FdFrame& f) {
  return (fd_wedge(f.a[0], f.d[1]) + fd_wedge(f.a[1], f.d[0])) / (2 * fd_volume(f));
}

}  // namespace testing_support
