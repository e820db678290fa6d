#include "bicontact/examples.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "bicontact/errors.hpp"

namespace bicontact {

namespace {

constexpr double kPi = std::numbers::pi;

Chart chart(std::vector<std::string> coords, ParamTable params = {}) {
  return Chart{std::move(coords), std::move(params)};
}

// Rejects points outside an open domain before any jet is evaluated.
Coframe restrict_domain(Coframe f, std::function<bool(std::span<const double>)> inside,
                        std::string who) {
  f.sampler = [inner = f.sampler, inside = std::move(inside), who = std::move(who)](
                  std::span<const double> p, int order) {
    if (!inside(p)) throw DomainError(who, p[0]);
    return inner(p, order);
  };
  return f;
}

// d(expr)/dx_slot as a jet of the requested order.
Jet derivative(const Expr& e, std::span<const double> p, int order, int slot,
               const ParamTable& params = {}) {
  if (order >= kMaxJetOrder) throw BudgetError("derivative of a generator function");
  return eval_jet(e, p, order + 1, params).partial(slot);
}

std::string wrap(const std::string& s) { return "(" + s + ")"; }

}  // namespace

double ExampleSpec::expected_value(const std::string& key, std::span<const double> p) const {
  for (const auto& [k, v] : expected) {
    if (k != key) continue;
    auto params = coframe.chart.param_names();
    return eval(parse(v, coframe.chart.coords, params), p, coframe.chart.params);
  }
  throw Error(fmt::format("example {} has no expected value for {}", name, key));
}

bool ExampleSpec::has_expected(const std::string& key) const {
  for (const auto& [k, v] : expected)
    if (k == key) return true;
  return false;
}

ExampleSpec example_hyp_C3(int eps, const std::string& c3) {
  ExampleSpec s;
  s.name = "hyp_C3";
  s.description = fmt::format("mixed elliptic/hyperbolic structure with C = z, eps = {}, C3 = {}",
                              eps, c3);
  std::string q1 = "((x+y)*z-(x-y))", q2 = "(eps*(x+y)+(x-y)*z)", k = wrap(c3);
  s.coframe = coframe_from_strings(chart({"x", "y", "z"}, {{"eps", double(eps)}}),
                                   {{"1", "1", "-" + q1 + "/" + k},
                                    {"1", "-1", q2 + "/" + k},
                                    {"0", "0", "1/" + k}});
  s.expected = {{"C", "z"}, {"eps", std::to_string(eps)}, {"C3", c3}};
  s.box = {{{-1, 1}, {-1, 1}, {-0.8, 0.8}}};
  return s;
}

ExampleSpec example_T2xR(double psi, const std::string& Psi) {
  ExampleSpec s;
  s.name = "T2xR";
  s.description = fmt::format("constant C = sinh(2 psi) with psi = {}, Psi(z) = {}", psi, Psi);
  Chart c = chart({"theta", "phi", "z"}, {{"psi", psi}});
  auto names = c.param_names();
  // (f, g) is the hyperbolic rotation by psi of (cosh Psi, sinh Psi); the
  // rotation has determinant cosh(2 psi).
  std::string P = wrap(Psi);
  std::string f = "(cosh(" + P + "-psi)/cosh(2*psi))";
  std::string g = "(sinh(" + P + "+psi)/cosh(2*psi))";
  std::string C = "sinh(2*psi)";
  auto e = [&](const std::string& t) { return make_field(parse(t, c.coords, names), c.params); };
  Expr psi_expr = parse(Psi, c.coords, names);
  ScalarField w3 = [psi_expr, params = c.params, psi](std::span<const double> p, int order) {
    // f g' - f' g = Psi' / cosh(2 psi)
    Jet d = derivative(psi_expr, p, order, 2, params);
    if (d.value() == 0.0) throw DomainError("example_T2xR Psi'", 0.0);
    return d / std::cosh(2 * psi);
  };
  s.coframe = coframe_from_fields(
      c, {{e(f), e(g), e(g + "-2*" + C + "*" + f)},
          {e("2*" + C + "*" + f + "-" + g), e("-" + f), e(g)},
          {nullptr, nullptr, w3}});
  s.expected = {{"C", C}, {"eps", "1"}, {"curvature", "cosh(2*psi)^2"}};
  s.box = {{{0, 2 * kPi}, {0, 2 * kPi}, {-1, 1}}};
  return s;
}

namespace {

// (eta1, eta2) of the normal form as coordinate one-forms.
std::pair<Form, Form> normal_form_eta(int eps, const Expr& f, const Expr& g,
                                      std::span<const double> p, int order) {
  Jet X = Jet::variable(3, order, 0, p[0]);
  Jet Y = Jet::variable(3, order, 1, p[1]);
  Jet Z = Jet::variable(3, order, 2, p[2]);
  Jet F = eval_jet(f, p, order), G = eval_jet(g, p, order);
  Jet Fp = derivative(f, p, order, 0);
  Jet csc = 1.0 / sin(2.0 * X);
  Jet cot = cos(2.0 * X) * csc;
  Jet Y2 = Y * Y;
  Jet common = Y2 * G - (F * F + Fp + 1.0) * Y2 * log(Y) - Z * F;
  Jet N1, N2;
  if (eps == 1) {
    N1 = common + 2.0 * Y * (F - 2.0 * cot) * csc;
    N2 = (2.0 * Z - Y2 * F - 2.0 * Y * csc) / Y;
  } else {
    N1 = common - 2.0 * Y * cot * F + 2.0 * Y + 4.0 * Y * csc * csc;
    N2 = (2.0 * Z - Y2 * F + 2.0 * Y * cot) / Y;
  }
  Jet zero(3, order);
  Form eta1 = Form::one_form({N1 / Y2, N2 / Y2, -1.0 / Y2});
  Form eta2 = Form::one_form({Z / Y2, -1.0 / Y, zero});
  return {eta1, eta2};
}

bool in_normal_form_domain(std::span<const double> p) {
  return p[0] > 0 && p[0] < kPi / 4 && p[1] > 0;
}

}  // namespace

ExampleSpec normal_form_3d(int eps, const std::string& f, const std::string& g) {
  if (eps != 1 && eps != -1) throw DomainError("normal_form_3d eps", eps);
  ExampleSpec s;
  s.name = "normal_form_3d";
  s.description = fmt::format("A1 = A2 = 0 normal form, eps = {}, f = {}, g = {}", eps, f, g);
  Chart c = chart({"x", "y", "z"});
  Expr fe = parse(f, c.coords), ge = parse(g, c.coords);
  Coframe cf;
  cf.chart = c;
  cf.sampler = [eps, fe, ge](std::span<const double> p, int order) {
    auto [eta1, eta2] = normal_form_eta(eps, fe, ge, p, order);
    Jet X = Jet::variable(3, order, 0, p[0]);
    Jet Y = Jet::variable(3, order, 1, p[1]);
    Jet zero(3, order);
    Jet cx = cos(X), sx = sin(X);
    return Frame{eta1 * cx + eta2 * sx, eta2 * cx - eta1 * sx,
                 Form::one_form({1.0 / Y, zero, zero})};
  };
  s.coframe = restrict_domain(std::move(cf), in_normal_form_domain, "normal_form_3d");
  s.expected = {{"C", eps == 1 ? "cot(2*x)" : "-csc(2*x)"}, {"eps", std::to_string(eps)},
                {"A1", "0"}, {"A2", "0"}};
  s.box = {{{0.1, 0.7}, {0.5, 2.0}, {-1, 1}}};
  return s;
}

ExampleSpec eta_frame(const std::string& f, const std::string& g) {
  ExampleSpec s;
  s.name = "eta_frame";
  s.description = fmt::format("(eta1, eta2, dx) of the eps = 1 normal form, f = {}, g = {}", f, g);
  Chart c = chart({"x", "y", "z"});
  Expr fe = parse(f, c.coords), ge = parse(g, c.coords);
  Coframe cf;
  cf.chart = c;
  cf.sampler = [fe, ge](std::span<const double> p, int order) {
    auto [eta1, eta2] = normal_form_eta(1, fe, ge, p, order);
    Jet zero(3, order);
    return Frame{eta1, eta2, Form::one_form({Jet::constant(3, order, 1.0), zero, zero})};
  };
  s.coframe = restrict_domain(
      std::move(cf),
      [](std::span<const double> p) { return p[1] > 0 && std::abs(std::sin(2 * p[0])) > 1e-12; },
      "eta_frame");
  s.expected = {{"C", "csc(2*x)/y"}, {"eps", "-1"}};
  s.box = {{{0.2, 0.7}, {0.5, 3.0}, {-1, 1}}};
  return s;
}

ExampleSpec example_4d(Example4d kind, int eps, const std::string& c3) {
  ExampleSpec s;
  if (kind == Example4d::Ezero) {
    s.name = "4d_Ezero";
    s.description = fmt::format("E = 0: the C = z structure scaled by exp(-s), eps = {}, C3 = {}",
                                eps, c3);
    std::string q1 = "((x+y)*z-(x-y))", q2 = "(eps*(x+y)+(x-y)*z)", k = wrap(c3);
    s.coframe = coframe_from_strings(
        chart({"x", "y", "z", "s"}, {{"eps", double(eps)}}),
        {{"exp(-s)", "exp(-s)", "-exp(-s)*" + q1 + "/" + k, "0"},
         {"exp(-s)", "-exp(-s)", "exp(-s)*" + q2 + "/" + k, "0"},
         {"0", "0", "1/" + k, "0"},
         {"0", "0", "0", "1"}});
    s.expected = {{"E", "0"}, {"C", "z"}, {"eps", std::to_string(eps)}};
    s.box = {{{-1, 1}, {-1, 1}, {-0.8, 0.8}, {-0.5, 0.5}}};
  } else {
    s.name = "4d_Enonzero";
    s.description = "E != 0 with tan(z) coefficients on -pi/2 < z < pi/2";
    std::string a = "exp(-w)", b = "exp(y*(x+z)-w)";
    Coframe cf = coframe_from_strings(
        chart({"x", "y", "z", "w"}),
        {{"z*" + a, "y*" + b, "z*" + a, "0"},
         {"-(z*tan(z)+1)*" + a, "-y*tan(z)*" + b, "-(z*tan(z)+1)*" + a, "0"},
         {"0", "0", "1", "0"},
         {"-y", "0", "-y", "1"}});
    s.coframe = restrict_domain(
        std::move(cf), [](std::span<const double> p) { return std::abs(p[2]) < kPi / 2; },
        "example_4d z");
    s.expected = {{"E", "exp(2*w-y*(x+z))/y"}, {"C", "-tan(z)"}, {"eps", "1"}};
    s.box = {{{-0.5, 0.5}, {0.5, 1.5}, {-1, 1}, {-0.5, 0.5}}};
  }
  return s;
}

ExampleSpec sphere_frame() {
  ExampleSpec s;
  s.name = "sphere";
  s.description = "Euler-angle coframe of the unit sphere frame bundle, K = 1";
  Coframe cf = coframe_from_strings(chart({"theta", "phi", "psi"}),
                                    {{"cos(psi)", "-sin(psi)*sin(theta)", "0"},
                                     {"sin(psi)", "cos(psi)*sin(theta)", "0"},
                                     {"0", "-cos(theta)", "1"}});
  s.coframe = restrict_domain(
      std::move(cf), [](std::span<const double> p) { return p[0] > 0 && p[0] < kPi; },
      "sphere_frame theta");
  s.expected = {{"C", "0"}, {"eps", "-1"}, {"K", "1"}};
  s.box = {{{0.3, 2.8}, {-kPi, kPi}, {-kPi, kPi}}};
  return s;
}

ExampleSpec case1_frame() {
  ExampleSpec s;
  s.name = "case1";
  s.description = "a structure with C3 = 0 and dC != 0";
  s.coframe = coframe_from_strings(chart({"x", "y", "z"}),
                                   {{"cos(z)", "sin(z)", "0"},
                                    {"x*cos(z)-sin(z)", "cos(z)+x*sin(z)", "0"},
                                    {"0", "0", "1"}});
  s.expected = {{"C", "x/sqrt(1+x^2)"}, {"eps", "-1"}};
  s.box = {{{-1, 1}, {-1, 1}, {-1, 1}}};
  return s;
}

std::vector<std::string> example_names() {
  return {"hyp_C3", "T2xR", "normal_form_3d", "eta_frame", "4d_Ezero", "4d_Enonzero",
          "sphere", "case1"};
}

ExampleSpec make_example(const std::string& name,
                         const std::vector<std::pair<std::string, std::string>>& params) {
  std::map<std::string, std::string> p(params.begin(), params.end());
  auto get = [&](const std::string& k, const std::string& def) {
    auto it = p.find(k);
    std::string v = it == p.end() ? def : it->second;
    if (it != p.end()) p.erase(it);
    return v;
  };
  auto get_int = [&](const std::string& k, int def) {
    return static_cast<int>(std::lround(std::stod(get(k, std::to_string(def)))));
  };
  ExampleSpec s;
  if (name == "hyp_C3") {
    int eps = get_int("eps", -1);
    s = example_hyp_C3(eps, get("C3", "1"));
  } else if (name == "T2xR") {
    double psi = std::stod(get("psi", "0.3"));
    s = example_T2xR(psi, get("Psi", "z"));
  } else if (name == "normal_form_3d") {
    int eps = get_int("eps", 1);
    std::string f = get("f", "0");
    s = normal_form_3d(eps, f, get("g", "0"));
  } else if (name == "eta_frame") {
    std::string f = get("f", "0");
    s = eta_frame(f, get("g", "0"));
  } else if (name == "4d_Ezero") {
    int eps = get_int("eps", -1);
    s = example_4d(Example4d::Ezero, eps, get("C3", "1"));
  } else if (name == "4d_Enonzero") {
    s = example_4d(Example4d::Enonzero);
  } else if (name == "sphere") {
    s = sphere_frame();
  } else if (name == "case1") {
    s = case1_frame();
  } else {
    throw Error(fmt::format("unknown example '{}'", name));
  }
  if (!p.empty()) throw Error(fmt::format("example {} has no parameter '{}'", name, p.begin()->first));
  return s;
}

}  // namespace bicontact
