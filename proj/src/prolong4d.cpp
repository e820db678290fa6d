#include "bicontact/prolong4d.hpp"

#include <algorithm>
#include <cmath>

#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include "bicontact/errors.hpp"

namespace bicontact {

namespace {

void require_4d(const Frame& f, const char* who) {
  if (f.size() != 4 || f[0].dim() != 4) throw StructuralError(fmt::format("{} needs a 4D coframe", who));
}

// Slot of the pair (i, j), i < j, in expand_in_coframe output for 2-forms.
int pair_slot(int i, int j) { return combinations(4, 2).rank[(1u << i) | (1u << j)]; }

}  // namespace

EValue compute_E(const Frame& f) {
  require_4d(f, "compute_E");
  Form omega = volume(f);
  EValue out;
  out.E = top_ratio(wedge({ext_d(f[3], "compute_E"), f[2], f[3]}), omega);
  auto dE = expand_in_coframe(Form::differential(out.E, "compute_E consistency"), dual_frame(f));
  out.E1 = dE[0];
  out.E2 = dE[1];
  out.dE_residual = std::max(std::abs(dE[2].value()), std::abs(dE[3].value() - 2.0 * out.E.value()));
  return out;
}

SympStructure symp_structure(const Frame& f) {
  require_4d(f, "symp_structure");
  DualFrame e = dual_frame(f);
  std::array<std::vector<Jet>, 4> d;
  for (int i = 0; i < 4; ++i) d[i] = expand_in_coframe(ext_d(f[i], "symp_structure"), e);

  SympStructure s;
  s.C = d[1][pair_slot(1, 2)];
  double eps = d[1][pair_slot(0, 2)].value();
  s.eps = eps < 0 ? -1 : 1;
  s.E = d[3][pair_slot(0, 1)];
  double C = s.C.value();

  // Expected coefficients on (12, 13, 14, 23, 24, 34) in 1-based labels.
  std::array<std::array<double, 6>, 4> expected{};
  expected[0][pair_slot(0, 3)] = 1.0;
  expected[0][pair_slot(0, 2)] = -C;
  expected[0][pair_slot(1, 2)] = 1.0;
  expected[1][pair_slot(1, 3)] = 1.0;
  expected[1][pair_slot(1, 2)] = C;
  expected[1][pair_slot(0, 2)] = s.eps;
  expected[3][pair_slot(0, 1)] = s.E.value();
  for (int i = 0; i < 4; ++i) {
    double worst = 0.0;
    for (int k = 0; k < 6; ++k) worst = std::max(worst, std::abs(d[i][k].value() - expected[i][k]));
    s.residuals.emplace_back(fmt::format("symp.dw{}", i + 1), worst);
    s.worst = std::max(s.worst, worst);
  }
  // the C read from dw2 against the one in dw1
  s.residuals.emplace_back("symp.C_cross", d[0][pair_slot(0, 2)].value() + C);
  s.residuals.emplace_back("symp.eps", std::abs(eps) - 1.0);
  return s;
}

double SymplecticCheck::worst() const {
  double w = std::max({std::abs(d_theta), std::abs(theta11), std::abs(theta22), std::abs(theta12)});
  for (double q : quadratic) w = std::max(w, std::abs(q));
  return w;
}

SymplecticCheck symplectic_quadratic_check(const Frame& f, int eps, double C,
                                           std::span<const std::pair<double, double>> a) {
  require_4d(f, "symplectic_quadratic_check");
  Form omega = volume(f);
  Form t1 = ext_d(f[0], "symplectic_quadratic_check");
  Form t2 = ext_d(f[1], "symplectic_quadratic_check");
  SymplecticCheck out;
  out.d_theta = std::max(ext_d(t1, "d theta").max_abs(), ext_d(t2, "d theta").max_abs());
  double r11 = top_ratio_value(wedge(t1, t1), omega);
  double r22 = top_ratio_value(wedge(t2, t2), omega);
  double r12 = top_ratio_value(wedge(t1, t2), omega);
  out.theta11 = r11 - 2.0;
  out.theta22 = r22 + 2.0 * eps;
  out.theta12 = r12 - 2.0 * C;
  for (auto [a1, a2] : a) {
    double lhs = a1 * a1 * r11 + 2.0 * a1 * a2 * r12 + a2 * a2 * r22;
    out.quadratic.push_back(lhs - 2.0 * quadratic_form(C, eps, a1, a2));
  }
  return out;
}

Curvature4 curvature4(const Frame& f, const SympStructure& s) {
  require_4d(f, "curvature4");
  if (frame_budget(f) < 2) throw BudgetError("curvature4");
  Curvature4 out;
  out.connection = levi_civita(f);
  out.curvature = curvature(out.connection, f);

  double C = s.C.value(), E = s.E.value();
  double eps = s.eps;
  struct Entry {
    int i, j;
    std::array<double, 4> g;
  };
  const Entry shown[] = {
      {0, 1, {0.0, 0.0, 0.5 * (1 - eps), -0.5 * E}},
      {2, 0, {-C, 0.5 * (1 + eps), 0.0, 0.0}},
      {2, 1, {0.5 * (1 + eps), C, 0.0, 0.0}},
      {3, 0, {1.0, 0.5 * E, 0.0, 0.0}},
      {3, 1, {-0.5 * E, 1.0, 0.0, 0.0}},
      {3, 2, {0.0, 0.0, 0.0, 0.0}},
  };
  for (const auto& en : shown) {
    double worst = 0.0;
    for (int k = 0; k < 4; ++k)
      worst = std::max(worst, std::abs(out.connection.value(en.i, en.j, k) - en.g[k]));
    out.connection_residuals.emplace_back(fmt::format("w{}_{}", en.i + 1, en.j + 1), worst);
  }

  out.S = scalar_curvature(out.curvature);
  out.S_predicted = -(0.5 * E * E + 2 * C * C + 7 + eps);
  out.Pf = pfaffian_ratio(out.curvature, f);
  out.Pf_predicted = 2.0 * ((1 + eps) + 2 * C * C);
  for (int k = 0; k < 4; ++k)
    for (int l = k + 1; l < 4; ++l)
      out.theta34 = std::max(out.theta34, std::abs(out.curvature.value(2, 3, k, l)));
  auto S = shape_operator(out.connection, 2);
  out.leaf_trace = S[0][0] + S[1][1] + S[2][2];
  return out;
}

// Q-ODE ---------------------------------------------------------------------

namespace {

const std::vector<std::string> kZ{"z"};

Jet c_jet(const QOde& ode, double z, int order) {
  double p[1] = {z};
  return eval_jet(parse(ode.C, kZ), p, order);
}

}  // namespace

std::array<double, 4> integrate_q(const QOde& ode, double z) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 4>;
  Expr C = parse(ode.C, kZ);
  auto rhs = [&](const State& y, State& dy, double t) {
    double p[1] = {t};
    Jet c = eval_jet(C, p, 1);
    double k = c.value() * c.value() + ode.eps + c.gradient(0);
    dy = {y[1], k * y[0], y[3], k * y[2]};
  };
  State y{ode.q1[0], ode.q1[1], ode.q2[0], ode.q2[1]};
  if (z == ode.z0) return y;
  double dt = z > ode.z0 ? 1e-3 : -1e-3;
  auto stepper = odeint::make_controlled(ode.atol, ode.rtol, odeint::runge_kutta_dopri5<State>());
  try {
    odeint::integrate_adaptive(stepper, rhs, y, ode.z0, z, dt);
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception& ex) {
    throw OdeStepFailure(fmt::format("Q-ODE integration to z = {} failed: {}", z, ex.what()));
  }
  for (double v : y)
    if (!std::isfinite(v)) throw OdeStepFailure(fmt::format("Q-ODE blew up before z = {}", z));
  return y;
}

double wronskian_drift(const QOde& ode, double z_end, int steps) {
  double w0 = ode.wronskian0(), worst = 0.0;
  for (int k = 1; k <= steps; ++k) {
    auto y = integrate_q(ode, ode.z0 + (z_end - ode.z0) * k / steps);
    worst = std::max(worst, std::abs(y[0] * y[3] - y[1] * y[2] - w0));
  }
  return worst;
}

std::array<Jet, 2> q_jets(const QOde& ode, int dim, int slot, double z, int order) {
  if (order >= kMaxJetOrder) throw BudgetError("q_jets");
  auto y = integrate_q(ode, z);
  // P = C^2 + eps + C' as a series in t = z - z_p
  Jet c = c_jet(ode, z, order + 1);
  Jet cn = c.truncated(order);
  Jet P = cn * cn + double(ode.eps) + c.partial(0);
  auto p = P.coeffs();
  Jet t = Jet::variable(dim, order, slot, z);
  std::array<Jet, 2> out;
  for (int s = 0; s < 2; ++s) {
    std::vector<double> q(order + 1, 0.0);
    q[0] = y[2 * s];
    if (order >= 1) q[1] = y[2 * s + 1];
    for (int k = 0; k + 2 <= order; ++k) {
      double acc = 0.0;
      for (int j = 0; j <= k; ++j) acc += p[j] * q[k - j];
      q[k + 2] = acc / ((k + 2.0) * (k + 1.0));
    }
    out[s] = compose_series(q, t);
  }
  return out;
}

Coframe normal_form_4d(const QOde& ode, const std::array<std::string, 4>& h) {
  if (ode.wronskian0() == 0.0) throw DegenerateH("Q1 and Q2 must be independent (W0 = 0)");
  Chart chart{{"x", "y", "z", "w"}, {}};
  std::array<Expr, 4> he;
  for (int k = 0; k < 4; ++k) he[k] = parse(h[k], chart.coords);
  Coframe cf;
  cf.chart = chart;
  cf.eps = ode.eps;
  cf.stage = Stage::Case3Prolonged;
  cf.sampler = [ode, he](std::span<const double> p, int order) {
    if (p[3] <= 0) throw DomainError("normal_form_4d w", p[3]);
    int m = order + 2;
    if (m > kMaxJetOrder) throw BudgetError("normal_form_4d");
    auto [Q1, Q2] = q_jets(ode, 4, 2, p[2], m);
    std::array<Jet, 4> hj;
    for (int k = 0; k < 4; ++k) hj[k] = eval_jet(he[k], p, m);
    Jet det = hj[0] * hj[3] - hj[1] * hj[2];
    if (std::abs(det.value()) < 1e-14) throw DegenerateH(fmt::format("det h = {}", det.value()));
    Jet W = Jet::variable(4, m, 3, p[3]);
    Jet root = sqrt(W);
    Jet K = (hj[0] * Q1 + hj[1] * Q2) / root;
    Jet L = (hj[2] * Q1 + hj[3] * Q2) / root;

    int n1 = order + 1;
    Jet fn = W.truncated(n1) * (L.partial(0) - K.partial(1)) / (ode.wronskian0() * det.truncated(n1));
    Jet K1 = K.truncated(n1), L1 = L.truncated(n1);
    Jet fK = (fn / K1).partial(2), fL = (fn / L1).partial(2);

    Jet Kn = K.truncated(order), Ln = L.truncated(order);
    Jet Kz = K.partial(2).truncated(order), Lz = L.partial(2).truncated(order);
    Jet C = compose_series(c_jet(ode, p[2], order).coeffs(), Jet::variable(4, order, 2, p[2]));
    Jet zero(4, order), one = Jet::constant(4, order, 1.0);
    Jet Wn = W.truncated(order);
    return Frame{Form::one_form({Kn, Ln, zero, zero}),
                 Form::one_form({C * Kn - Kz, C * Ln - Lz, zero, zero}),
                 Form::one_form({zero, zero, one, zero}),
                 Form::one_form({-(Kn * Kn) * fK, -(Ln * Ln) * fL, zero, 0.5 / Wn})};
  };
  return cf;
}

NormalForm4dCheck check_normal_form_4d(const Coframe& f, std::span<const double> p, int order) {
  Frame fr = f.at(p, order);
  SympStructure s = symp_structure(fr);
  EValue e = compute_E(fr);
  NormalForm4dCheck out;
  out.symp = std::max(s.worst, std::abs(s.E.value() - p[3]));
  out.E_error = e.E.value() - p[3];
  out.dE = e.dE_residual;
  return out;
}

}  // namespace bicontact
