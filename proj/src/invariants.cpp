#include "bicontact/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <fmt/format.h>

#include "bicontact/errors.hpp"

namespace bicontact {

namespace {

Jet at_order(const Jet& a, int k) { return a.order() == k ? a : a.truncated(k); }

// Binary jet operations between operands of different orders.
Jet mul(const Jet& a, const Jet& b) {
  int k = std::min(a.order(), b.order());
  return at_order(a, k) * at_order(b, k);
}
Jet div(const Jet& a, const Jet& b) {
  int k = std::min(a.order(), b.order());
  return at_order(a, k) / at_order(b, k);
}
Jet add(const Jet& a, const Jet& b) {
  int k = std::min(a.order(), b.order());
  return at_order(a, k) + at_order(b, k);
}
Jet sub(const Jet& a, const Jet& b) {
  int k = std::min(a.order(), b.order());
  return at_order(a, k) - at_order(b, k);
}

int sign_of(double v) { return v < 0 ? -1 : 1; }

void require_3d(const Frame& f, const char* who) {
  if (f.size() != 3 || f[0].dim() != 3)
    throw StructuralError(fmt::format("{} needs a coframe on a 3D chart", who));
}

std::vector<std::size_t> dissenters(const std::vector<int>& tags) {
  std::map<int, int> count;
  for (int t : tags) ++count[t];
  int major = std::max_element(count.begin(), count.end(), [](auto& a, auto& b) {
                return a.second < b.second;
              })->first;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tags.size(); ++i)
    if (tags[i] != major) out.push_back(i);
  return out;
}

}  // namespace

std::string_view name(CaseTag t) {
  switch (t) {
    case CaseTag::ConstantC: return "constantC";
    case CaseTag::Case1: return "case1";
    case CaseTag::Case2: return "case2";
    case CaseTag::Case3: return "case3";
  }
  return "?";
}

std::string_view name(ClassTag t) {
  switch (t) {
    case ClassTag::Elliptic: return "elliptic";
    case ClassTag::Hyperbolic: return "hyperbolic";
    case ClassTag::Linear: return "linear";
  }
  return "?";
}

double InvariantRecord::residual(std::string_view n) const {
  for (const auto& [k, v] : residuals)
    if (k == n) return v;
  return kUnset;
}

OneAdaptation one_adapt_frame(const Frame& raw, double contact_tol) {
  require_3d(raw, "one_adapt");
  Form vol = volume(raw);
  Jet r1 = top_ratio(wedge(raw[0], ext_d(raw[0], "one_adapt")), vol);
  Jet r2 = top_ratio(wedge(raw[1], ext_d(raw[1], "one_adapt")), vol);
  if (std::abs(r1.value()) <= contact_tol || std::abs(r2.value()) <= contact_tol)
    throw ContactFailure(fmt::format("contact condition fails (w1^dw1 {:.3e}, w2^dw2 {:.3e})",
                                     r1.value(), r2.value()),
                         {});
  Jet q = r2 / r1;
  OneAdaptation out;
  out.eps = q.value() > 0 ? -1 : 1;
  Jet root = sqrt(q * static_cast<double>(-out.eps));
  out.scale2 = 1.0 / root;
  out.scale3 = r1 * root;
  int k = r1.order();
  out.frame = {raw[0].truncated(k), raw[1] * out.scale2, raw[2] * out.scale3};
  return out;
}

Coframe one_adapt(const Coframe& raw, std::span<const Point> samples) {
  if (raw.dim() != 3) throw StructuralError("one_adapt needs a 3D chart");
  std::vector<std::size_t> failed;
  std::vector<int> eps;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    try {
      eps.push_back(one_adapt_frame(raw.at(samples[i], 1)).eps);
    } catch (const ContactFailure&) {
      failed.push_back(i);
    }
  }
  if (!failed.empty())
    throw ContactFailure(fmt::format("contact condition fails at {} sample(s)", failed.size()),
                         failed);
  if (eps.empty()) throw Error("one_adapt needs at least one sample point");
  auto odd = dissenters(eps);
  if (!odd.empty())
    throw MixedEpsilon(fmt::format("sign of eps changes at {} sample(s)", odd.size()), odd);

  Coframe out = raw;
  out.stage = Stage::OneAdapted;
  out.eps = eps.front();
  out.sampler = [raw, e = out.eps](std::span<const double> p, int order) {
    OneAdaptation a = one_adapt_frame(raw.at(p, order));
    if (a.eps != e) throw MixedEpsilon("sign of eps differs from the sampled region", {});
    return a.frame;
  };
  return out;
}

Jet compute_C(const Frame& f) {
  require_3d(f, "compute_C");
  Form sum = wedge(f[0], ext_d(f[1], "compute_C")) + wedge(f[1], ext_d(f[0], "compute_C"));
  return top_ratio(sum, volume(f)) * 0.5;
}

CDerivatives compute_C3(const Frame& f) {
  CDerivatives out;
  out.C = compute_C(f);
  Form dC = Form::differential(out.C, "compute_C3");
  auto comps = expand_in_coframe(dC, dual_frame(f));
  out.C1 = comps[0];
  out.C2 = comps[1];
  out.C3 = comps[2];
  out.C3_volume = top_ratio(wedge({dC, f[0], f[1]}), volume(f));
  return out;
}

double quadratic_form(double C, int eps, double a1, double a2) {
  return a1 * a1 - eps * a2 * a2 + 2.0 * C * a1 * a2;
}

double QuadraticClassification::operator()(double a1, double a2) const {
  return quadratic_form(C, eps, a1, a2);
}

QuadraticClassification classify(double C, int eps, double band) {
  QuadraticClassification q;
  q.C = C;
  q.eps = eps;
  if (eps == -1 && std::abs(std::abs(C) - 1.0) <= band) {
    q.tag = ClassTag::Linear;
    q.witness = "taut contact line";
  } else if (eps == -1 && std::abs(C) < 1.0) {
    q.tag = ClassTag::Elliptic;
    q.witness = "taut contact circle";
  } else {
    q.tag = ClassTag::Hyperbolic;
    q.witness = eps == 1 ? "taut contact hyperbola, w1^dw1 = -w2^dw2"
                         : "taut contact hyperbola, w1^dw1 = w2^dw2";
  }
  return q;
}

Jet contact_ratio(const Frame& f, double a1, double a2) {
  Form w = f[0] * a1 + f[1] * a2;
  return top_ratio(wedge(w, ext_d(w, "contact_ratio")), volume(f));
}

Jet variable_coefficient_defect(const Frame& f, const Jet& a1, const Jet& a2) {
  DualFrame e = dual_frame(f);
  return sub(mul(a1, directional(e, 2, a2)), mul(a2, directional(e, 2, a1)));
}

TautCircle taut_circle_frame(const Frame& f, CircleBranch branch) {
  require_3d(f, "taut_circle_transform");
  TautCircle t;
  t.branch = branch;
  CDerivatives d = compute_C3(f);
  t.C = d.C;
  t.C3 = d.C3_volume;
  double c = t.C.value();
  if (sign_of(1.0 + c) != branch.plus || sign_of(1.0 - c) != branch.minus ||
      std::abs(1.0 - std::abs(c)) < 1e-12)
    throw BranchError(fmt::format("C = {} leaves the fixed branch of 1 +- C", c), {});
  Jet ap = (1.0 + t.C) * static_cast<double>(branch.plus);
  Jet am = (1.0 - t.C) * static_cast<double>(branch.minus);
  const double r2 = std::numbers::sqrt2;
  t.eta = {(f[0] + f[1]) / (sqrt(ap) * r2), (f[0] - f[1]) / (sqrt(am) * r2),
           -(f[2] * sqrt(ap * am))};
  Form vol = volume(f);
  Form cross = wedge(t.eta[0], ext_d(t.eta[1], "taut_circle")) +
               wedge(t.eta[1], ext_d(t.eta[0], "taut_circle"));
  t.cross = top_ratio(cross, vol);
  Jet prod = ap * am;
  t.kappa = (am * static_cast<double>(branch.plus) + ap * static_cast<double>(branch.minus)) /
            (2.0 * prod * sqrt(prod));
  return t;
}

Jet taut_circle_ratio(const TautCircle& t, double a1, double a2) {
  Form w = t.eta[0] * a1 + t.eta[1] * a2;
  return top_ratio(wedge(w, ext_d(w, "taut_circle")), volume(t.eta));
}

double taut_circle_prediction(const TautCircle& t, double a1, double a2) {
  return t.branch.plus * a1 * a1 + t.branch.minus * a2 * a2 +
         a1 * a2 * t.kappa.value() * t.C3.value();
}

CircleBranch circle_branch(const Coframe& f, std::span<const Point> samples, int order) {
  std::vector<int> tags;
  std::vector<std::size_t> on_line;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double c = compute_C(f.at(samples[i], order)).value();
    if (std::abs(1.0 - std::abs(c)) < 1e-12) on_line.push_back(i);
    tags.push_back(2 * sign_of(1.0 + c) + sign_of(1.0 - c));
  }
  if (!on_line.empty()) throw BranchError("|C| = 1 at sample points", on_line);
  if (tags.empty()) throw Error("circle_branch needs at least one sample point");
  auto odd = dissenters(tags);
  if (!odd.empty())
    throw BranchError(fmt::format("1 +- C changes sign at {} sample(s)", odd.size()), odd);
  // tags are 2*plus + minus with plus, minus in {-1, 1}
  int t = tags.front();
  return {t > 0 ? 1 : -1, t == 3 || t == -1 ? 1 : -1};
}

Coframe taut_circle_transform(const Coframe& f, std::span<const Point> samples) {
  if (f.eps != -1) throw Error("the taut circle transform needs eps = -1");
  CircleBranch b = circle_branch(f, samples, 2);
  return map_frames(f, [b](const Frame& w) { return taut_circle_frame(w, b).eta; });
}

TautHyperbola taut_hyperbola_frame(const Frame& f) {
  require_3d(f, "taut_hyperbola_transform");
  TautHyperbola t;
  CDerivatives d = compute_C3(f);
  t.C3 = d.C3_volume;
  t.theta = asinh(d.C);
  Jet ch = cosh(t.theta);
  Jet c = cosh(t.theta * 0.5), s = sinh(t.theta * 0.5);
  t.eta = {(f[0] * c + f[1] * s) / ch, (f[1] * c - f[0] * s) / ch, f[2] * ch};
  Form vol = volume(f);
  t.ratio1 = top_ratio(wedge(t.eta[0], ext_d(t.eta[0], "taut_hyperbola")), vol);
  t.ratio2 = top_ratio(wedge(t.eta[1], ext_d(t.eta[1], "taut_hyperbola")), vol);
  Jet tilt = top_ratio(wedge({f[0], f[1], Form::differential(t.theta, "taut_hyperbola")}), vol);
  Jet corr = div(tilt, ch * ch * 2.0);
  t.predicted1 = 1.0 - corr;
  t.predicted2 = -1.0 - corr;
  t.sum_defect = t.ratio1 + t.ratio2;
  return t;
}

Coframe taut_hyperbola_transform(const Coframe& f) {
  if (f.eps != 1) throw Error("the taut hyperbola transform needs eps = +1");
  return map_frames(f, [](const Frame& w) { return taut_hyperbola_frame(w).eta; });
}

CaseProbe case_probe(const Frame& f, const Tolerances& tol) {
  CaseProbe p;
  CDerivatives d = compute_C3(f);
  p.dC_norm = std::hypot(d.C1.value(), d.C2.value(), d.C3.value());
  p.C3 = d.C3.value();
  if (p.dC_norm <= tol.shallow) {
    p.tag = CaseTag::ConstantC;
    return p;
  }
  if (std::abs(p.C3) <= tol.c3_zero * (1.0 + p.dC_norm)) {
    p.tag = CaseTag::Case1;
    return p;
  }
  Form w3 = Form::differential(d.C, "case_detect") / d.C3_volume;
  Frame g{f[0], f[1], w3};
  auto B = coeffs_in_coframe(ext_d(w3, "case_detect"), g);
  p.B_sq = B[0].value() * B[0].value() + B[1].value() * B[1].value();
  p.tag = p.B_sq <= tol.case3 ? CaseTag::Case3 : CaseTag::Case2;
  return p;
}

CaseTag case_detect(const Coframe& f, std::span<const Point> samples, int order,
                    const Tolerances& tol) {
  std::vector<int> tags;
  for (const auto& p : samples) tags.push_back(static_cast<int>(case_probe(f.at(p, order), tol).tag));
  if (tags.empty()) throw Error("case_detect needs at least one sample point");
  auto odd = dissenters(tags);
  if (!odd.empty())
    throw AmbiguousCase(fmt::format("case tag differs at {} sample(s)", odd.size()), odd);
  return static_cast<CaseTag>(tags.front());
}

Case2Jets case2_adapt_frame(const Frame& f, const Tolerances& tol) {
  require_3d(f, "case2_adapt");
  Case2Jets c;
  CDerivatives d = compute_C3(f);
  c.C = d.C;
  c.C3 = d.C3_volume;
  double norm = std::hypot(d.C1.value(), d.C2.value(), d.C3.value());
  if (std::abs(c.C3.value()) <= tol.c3_zero * (1.0 + norm))
    throw CriticalPoint(fmt::format("C3 = {:.3e} vanishes", c.C3.value()));

  Form w3 = Form::differential(c.C, "case2_adapt") / c.C3;
  Form dw3 = ext_d(w3, "case2_adapt");
  Frame g{f[0], f[1], w3};
  auto raw = coeffs_in_coframe(dw3, g);
  Jet ssq = raw[0] * raw[0] + raw[1] * raw[1];
  if (ssq.value() <= tol.case3)
    throw DegenerateB(fmt::format("B1^2 + B2^2 = {:.3e}; this is case 3", ssq.value()));
  c.scale = sqrt(ssq);

  c.frame = {f[0] * c.scale, f[1] * c.scale, w3.truncated(c.scale.order())};
  auto B = coeffs_in_coframe(dw3, c.frame);
  c.B1 = B[0];
  c.B2 = B[1];
  c.B3 = B[2];
  c.zeta = atan2(c.B2, c.B1);

  c.dw1 = coeffs_in_coframe(ext_d(c.frame[0], "case2_adapt"), c.frame);
  c.dw2 = coeffs_in_coframe(ext_d(c.frame[1], "case2_adapt"), c.frame);
  c.A2 = c.dw1[2];
  c.A1 = -c.dw2[2];
  c.A3 = add(c.dw1[1], c.C);
  return c;
}

Coframe case2_adapt(const Coframe& f, const Tolerances& tol) {
  if (f.stage != Stage::OneAdapted) throw Error("case2_adapt needs a one-adapted coframe");
  Coframe out = map_frames(f, [tol](const Frame& w) { return case2_adapt_frame(w, tol).frame; });
  out.stage = Stage::Case2Adapted;
  return out;
}

void fill_case2(InvariantRecord& r, const Case2Jets& c) {
  const double eps = r.eps;
  r.case_tag = CaseTag::Case2;
  r.C = c.C.value();
  r.C1 = 0.0;
  r.C2 = 0.0;
  r.C3 = c.C3.value();
  r.A1 = c.A1.value();
  r.A2 = c.A2.value();
  r.A3 = c.A3.value();
  r.B1 = c.B1.value();
  r.B2 = c.B2.value();
  r.B3 = c.B3.value();
  r.zeta = c.zeta.value();

  r.add("struct2.dw1_23", c.dw1[0].value() - 1.0);
  r.add("struct2.dw2_13", c.dw2[1].value() - eps);
  r.add("struct2.A3_cross", c.dw2[0].value() - r.C - r.A3);
  r.add("struct2.dw3_12", r.B3);
  r.add("struct2.B_norm", r.B1 * r.B1 + r.B2 * r.B2 - 1.0);
  r.add("struct2.B1_cos", r.B1 - std::cos(r.zeta));
  r.add("struct2.B2_sin", r.B2 - std::sin(r.zeta));

  DualFrame e = dual_frame(c.frame);
  if (c.zeta.order() >= 1) {
    auto dz = expand_in_coframe(Form::differential(c.zeta, "zeta"), e);
    double z1 = dz[0].value(), z2 = dz[1].value();
    r.zeta3 = dz[2].value();
    double s = std::sin(r.zeta), co = std::cos(r.zeta);
    r.W = co * (z1 - r.A2) - s * (z2 + r.A1);
    r.add("der2.W_fit", s * (z1 - r.A2) + co * (z2 + r.A1));
  }
  // dC = C3 w3 read back from the adapted coframe
  if (c.frame[0].budget() >= 2) {
    CDerivatives d = compute_C3(c.frame);
    r.add("struct2.C_recomputed", d.C.value() - r.C);
    r.add("struct2.C1", d.C1.value());
    r.add("struct2.C2", d.C2.value());
    r.add("struct2.C3_recomputed", d.C3.value() - r.C3);
  }
}

InvariantCoords invariant_coords(const Case2Jets& c, int eps, const Tolerances& tol) {
  InvariantCoords out;
  DualFrame e = dual_frame(c.frame);
  out.C = c.C;
  out.C3 = c.C3;
  out.C33 = directional(e, 2, c.C3);
  out.C333 = directional(e, 2, out.C33);
  Form dC = Form::differential(c.C, "invariant_coords");
  Form dC3 = Form::differential(c.C3, "invariant_coords");
  Form dC33 = Form::differential(out.C33, "invariant_coords");
  out.omega_ratio = top_ratio(wedge({dC, dC3, dC33}), volume(c.frame));

  out.zeta3 = directional(e, 2, c.zeta);
  int k = out.zeta3.order();
  Jet z = at_order(c.zeta, k), C = at_order(c.C, k), C3 = at_order(c.C3, k);
  Jet cz = cos(z), sz = sin(z);
  Jet bracket = 1.0 - (1.0 + eps) * cz * cz + 2.0 * C * sz * cz + out.zeta3;
  out.predicted = -(C3 * C3 * C3 * bracket);
  out.degenerate = std::abs(bracket.value()) <= tol.deep;

  auto m = coeffs_in_coframe(wedge(dC, dC3), c.frame);
  double c3sq = c.C3.value() * c.C3.value();
  double zv = c.zeta.value();
  out.dC_dC3_residual = std::max({std::abs(m[0].value() - c3sq * std::cos(zv)),
                                  std::abs(m[1].value() - c3sq * std::sin(zv)),
                                  std::abs(m[2].value())});
  return out;
}

Translation kill_a12(const Frame& f, double det_floor) {
  require_3d(f, "translation");
  Translation t;
  t.dw1 = ext_d(f[0], "translation");
  t.dw2 = ext_d(f[1], "translation");
  auto probe = [&](double b1, double b2) {
    Frame g{f[0], f[1], f[2] + f[0] * b1 + f[1] * b2};
    // (A1, A2) = (-(dw2)_12, (dw1)_12)
    return std::pair{-coeffs_in_coframe(t.dw2, g)[2], coeffs_in_coframe(t.dw1, g)[2]};
  };
  auto [a1, a2] = probe(0, 0);
  auto [p1, p2] = probe(1, 0);
  auto [q1, q2] = probe(0, 1);
  Jet m00 = p1 - a1, m01 = q1 - a1, m10 = p2 - a2, m11 = q2 - a2;
  Jet det = m00 * m11 - m01 * m10;
  t.det = det.value();
  if (std::abs(t.det) <= det_floor)
    throw DegenerateTranslation(
        fmt::format("translation probe determinant {:.3e} vanishes", t.det));
  t.b1 = (m01 * a2 - m11 * a1) / det;
  t.b2 = (m10 * a1 - m00 * a2) / det;
  int k = t.b1.order();
  t.frame = {f[0].truncated(k), f[1].truncated(k), f[2] + f[0] * t.b1 + f[1] * t.b2};
  return t;
}

Case1Jets case1_adapt_frame(const Frame& f, const Tolerances& tol) {
  require_3d(f, "case1_adapt");
  Case1Jets c;
  CDerivatives d = compute_C3(f);
  c.C = d.C;
  double n12 = std::hypot(d.C1.value(), d.C2.value());
  if (n12 <= tol.shallow) throw CriticalPoint(fmt::format("|dC| = {:.3e} vanishes", n12));
  c.scale = sqrt(d.C1 * d.C1 + d.C2 * d.C2);
  c.xi = atan2(d.C2, d.C1);
  Frame g{f[0] * c.scale, f[1] * c.scale, f[2].truncated(c.scale.order())};

  Translation t = kill_a12(g, tol.translation);
  c.frame = t.frame;
  c.b1 = t.b1;
  c.b2 = t.b2;
  c.probe_det = t.det;
  c.dw1 = coeffs_in_coframe(t.dw1, c.frame);
  c.dw2 = coeffs_in_coframe(t.dw2, c.frame);
  c.A2 = c.dw1[2];
  c.A1 = -c.dw2[2];
  c.A3 = add(c.dw1[1], c.C);
  auto B = coeffs_in_coframe(ext_d(c.frame[2], "case1_adapt"), c.frame);
  c.B1 = B[0];
  c.B2 = B[1];
  c.B3 = B[2];
  return c;
}

Coframe case1_adapt(const Coframe& f, const Tolerances& tol) {
  if (f.stage != Stage::OneAdapted) throw Error("case1_adapt needs a one-adapted coframe");
  Coframe out = map_frames(f, [tol](const Frame& w) { return case1_adapt_frame(w, tol).frame; });
  out.stage = Stage::Case1Adapted;
  return out;
}

void fill_case1(InvariantRecord& r, const Case1Jets& c, const Tolerances& tol) {
  const double eps = r.eps;
  r.case_tag = CaseTag::Case1;
  r.C = c.C.value();
  r.C1 = std::cos(c.xi.value());
  r.C2 = std::sin(c.xi.value());
  r.C3 = 0.0;
  r.A1 = c.A1.value();
  r.A2 = c.A2.value();
  r.A3 = c.A3.value();
  r.B1 = c.B1.value();
  r.B2 = c.B2.value();
  r.B3 = c.B3.value();
  r.xi = c.xi.value();

  r.add("struct1.dw1_23", c.dw1[0].value() - 1.0);
  r.add("struct1.dw2_13", c.dw2[1].value() - eps);
  r.add("struct1.A1", r.A1);
  r.add("struct1.A2", r.A2);
  r.add("struct1.A3_cross", c.dw2[0].value() - r.C - r.A3);
  if (c.frame[0].budget() >= 2) {
    CDerivatives d = compute_C3(c.frame);
    r.add("struct1.C1_cos", d.C1.value() - r.C1);
    r.add("struct1.C2_sin", d.C2.value() - r.C2);
    r.add("struct1.C3", d.C3.value());
  }

  DualFrame e = dual_frame(c.frame);
  auto dx = expand_in_coframe(Form::differential(c.xi, "xi"), e);
  double x1 = dx[0].value(), x2 = dx[1].value(), x3 = dx[2].value();
  double s = std::sin(r.xi), co = std::cos(r.xi);
  r.rho = -x1 * s + x2 * co;
  r.add("der1.rho_fit", x1 * co + x2 * s);
  if (std::abs(r.B3) <= tol.deep) {
    double s2 = std::sin(2 * r.xi), c2 = std::cos(2 * r.xi);
    double xi3 = 0.5 * (eps + 1) * c2 + r.C * s2 + 0.5 * (1 - eps);
    r.add("der1.xi3", x3 - xi3);
    r.add("der1.A3", r.A3 - (-0.5 * (eps + 1) * s2 + r.C * c2));
    double den = xi3 + eps - 1;
    if (std::abs(den) > tol.deep) r.add("der1.rho", r.rho - s2 / den);
  }
}

std::optional<CartanStructure> cartan_structure_check(const Frame& f, double tol) {
  require_3d(f, "cartan_structure_check");
  Form vol = volume(f);
  Form dw1 = ext_d(f[0], "cartan"), dw2 = ext_d(f[1], "cartan");
  double r12 = top_ratio(wedge(f[0], dw2), vol).value();
  double r21 = top_ratio(wedge(f[1], dw1), vol).value();
  if (std::abs(r12) > tol || std::abs(r21) > tol) return std::nullopt;
  int eps = -sign_of(top_ratio(wedge(f[1], dw2), vol).value());

  Translation t = kill_a12(f, 1e-8);
  CartanStructure out;
  out.frame = t.frame;
  auto a = coeffs_in_coframe(t.dw1, t.frame);
  auto b = coeffs_in_coframe(t.dw2, t.frame);
  auto k = coeffs_in_coframe(ext_d(t.frame[2], "cartan"), t.frame);
  out.K = k[2];
  out.residual = std::max({std::abs(a[0].value() - 1.0), std::abs(a[1].value()),
                           std::abs(a[2].value()), std::abs(b[0].value()),
                           std::abs(b[1].value() - eps), std::abs(b[2].value()),
                           std::abs(k[0].value()), std::abs(k[1].value())});
  if (out.K.order() >= 1)
    out.dK_ratio = top_ratio(wedge({Form::differential(out.K, "cartan"), t.frame[0], t.frame[1]}),
                             volume(t.frame))
                       .value();
  return out;
}

InvariantRecord analyze_point(const Coframe& f, std::span<const double> p, int order,
                              const Tolerances& tol) {
  InvariantRecord r;
  r.point.assign(p.begin(), p.end());
  Frame w = f.at(p, order);
  if (f.stage == Stage::Raw) {
    OneAdaptation a = one_adapt_frame(w, tol.contact);
    w = a.frame;
    r.eps = a.eps;
  } else {
    r.eps = f.eps;
  }
  Form vol = volume(w);
  r.add("adapt.w1dw1", top_ratio(wedge(w[0], ext_d(w[0])), vol).value() - 1.0);
  r.add("adapt.w2dw2", top_ratio(wedge(w[1], ext_d(w[1])), vol).value() + r.eps);

  CDerivatives d = compute_C3(w);
  r.C = d.C.value();
  r.C1 = d.C1.value();
  r.C2 = d.C2.value();
  r.C3 = d.C3.value();
  r.class_tag = classify(r.C, r.eps, tol.linear_band).tag;

  CaseProbe probe = case_probe(w, tol);
  r.case_tag = probe.tag;
  switch (probe.tag) {
    case CaseTag::ConstantC: break;
    case CaseTag::Case1: fill_case1(r, case1_adapt_frame(w, tol), tol); break;
    case CaseTag::Case2: {
      Case2Jets c = case2_adapt_frame(w, tol);
      fill_case2(r, c);
      if (c.frame[0].budget() >= 2) {
        InvariantCoords ic = invariant_coords(c, r.eps, tol);
        r.C33 = ic.C33.value();
        r.C333 = ic.C333.value();
        r.add("coords.omega_C", ic.omega_ratio.value() - ic.predicted.value());
        r.add("coords.dC_dC3", ic.dC_dC3_residual);
      }
      break;
    }
    case CaseTag::Case3: r.add("case3.B_sq", probe.B_sq); break;
  }
  return r;
}

}  // namespace bicontact
