#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bicontact/errors.hpp"
#include "bicontact/examples.hpp"
#include "bicontact/report.hpp"

using namespace bicontact;

#ifndef BICONTACT_DATA_DIR
#error "BICONTACT_DATA_DIR must point at the data directory"
#endif

namespace {

const std::string kData = BICONTACT_DATA_DIR;

const char* kHyp = R"frame([chart]   coords = x y z
[params]  eps = -1
[omega1]  dx = "1"  dy = "1"  dz = "-((x+y)*z-(x-y))"
[omega2]  dx = "1"  dy = "-1" dz = "eps*(x+y)+(x-y)*z"
[omega3]  dz = "1"
)frame";

template <class E>
E expect_throw(const std::string& text) {
  try {
    parse_coframe(text);
  } catch (const E& e) {
    return e;
  } catch (const std::exception& e) {
    ADD_FAILURE() << "wrong exception: " << e.what();
    throw;
  }
  ADD_FAILURE() << "no exception";
  throw std::logic_error("unreachable");
}

RunConfig example_config(const std::string& command, const std::string& example, int points = 10) {
  RunConfig c;
  c.command = command;
  c.example = example;
  c.points = points;
  return c;
}

}  // namespace

TEST(Parse, SectionFormat) {
  Coframe f = parse_coframe(kHyp);
  ASSERT_EQ(f.dim(), 3);
  EXPECT_EQ(f.chart.coords, (std::vector<std::string>{"x", "y", "z"}));
  Frame w = f.at(Point{0.2, 0.3, 0.4}, 1);
  EXPECT_DOUBLE_EQ(w[1][2].value(), -(0.5) + (-0.1) * 0.4);
  EXPECT_DOUBLE_EQ(w[2][0].value(), 0.0);
}

TEST(Parse, CommentsAndBlankLines) {
  Coframe f = parse_coframe(std::string("# header\n\n") + kHyp + "\n# trailing\n");
  EXPECT_EQ(f.dim(), 3);
}

TEST(Parse, SyntaxErrorsCarryPosition) {
  auto e = expect_throw<InputError>("[chart] coords = x y z\n[omega1] dx = \"1+\"\n");
  EXPECT_EQ(e.line(), 2);
  EXPECT_GT(e.column(), 14);
  auto u = expect_throw<InputError>("[chart] coords = x y z\n[bogus] a = 1\n");
  EXPECT_EQ(u.line(), 2);
  EXPECT_EQ(u.column(), 1);
  auto k = expect_throw<InputError>("[chart] coords = x y z\n[omega1]  dq = \"1\"\n");
  EXPECT_EQ(k.line(), 2);
  auto n = expect_throw<InputError>("[chart] coords = x y z\n[params] eps = minus\n");
  EXPECT_EQ(n.line(), 2);
  auto q = expect_throw<InputError>("[chart] coords = x y z\n[omega1] dx = \"1\n");
  EXPECT_EQ(q.line(), 2);
}

TEST(Parse, ArityAndIdentifiers) {
  std::string text = kHyp;
  std::string no3 = text.substr(0, text.find("[omega3]"));
  expect_throw<ArityError>(no3);
  expect_throw<ArityError>(text + "[omega4] dx = \"1\"\n");
  expect_throw<ArityError>("[omega1] dx = \"1\"\n");
  expect_throw<UnknownIdentifier>("[chart] coords = x y z\n[omega1] dx = \"k\"\n[omega2] dy = \"1\"\n[omega3] dz = \"1\"\n");
}

TEST(Parse, FileMatchesGenerator) {
  Coframe f = load_coframe(kData + "/hyp_ex.frame");
  ExampleSpec s = example_hyp_C3(-1, "1+z^2");
  for (const auto& p : sample_box(s.box, 10, 42)) {
    Frame a = f.at(p, 2), b = s.coframe.at(p, 2);
    for (int i = 0; i < 3; ++i)
      for (std::size_t k = 0; k < a[i].size(); ++k)
        for (std::size_t m = 0; m < a[i][k].coeffs().size(); ++m)
          EXPECT_NEAR(a[i][k].coeffs()[m], b[i][k].coeffs()[m], 1e-13);
  }
  EXPECT_THROW(load_coframe(kData + "/missing.frame"), Error);
}

TEST(Parse, Box) {
  Box b = parse_box("-1:1, 0.5:2,-3e-1:0");
  ASSERT_EQ(b.ranges.size(), 3u);
  EXPECT_EQ(b.ranges[2], (std::pair{-0.3, 0.0}));
  EXPECT_THROW(parse_box("1:0"), Error);
  EXPECT_THROW(parse_box("a:b"), Error);
  EXPECT_THROW(parse_box("0:1,"), Error);
}

TEST(Json, SeventeenDigitsAndNulls) {
  nlohmann::ordered_json j;
  j["third"] = 1.0 / 3.0;
  j["nan"] = std::nan("");
  j["n"] = 3;
  std::string s = to_json_text(j, -1);
  EXPECT_NE(s.find("0.33333333333333331"), std::string::npos) << s;
  EXPECT_NE(s.find("\"nan\":null"), std::string::npos) << s;
  EXPECT_NE(s.find("\"n\":3"), std::string::npos) << s;
  // order is preserved
  EXPECT_LT(s.find("third"), s.find("nan"));
}

TEST(Tolerance, Tiers) {
  Tolerances t;
  EXPECT_EQ(tolerance_for("adapt.w1dw1", t), t.shallow);
  EXPECT_EQ(tolerance_for("coords.omega_C", t), t.deep);
  EXPECT_EQ(tolerance_for("der2.W_fit", t), t.deep);
  EXPECT_EQ(tolerance_for("nf4.symp", t), t.deep);
}

TEST(Run, InvariantsOnExample) {
  Report r = run(example_config("invariants", "hyp_C3"));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.exit_code, 0);
  const auto& j = r.json;
  EXPECT_EQ(j["tool"], "bicontact");
  EXPECT_EQ(j["config"]["samples"]["seed"], 42);
  ASSERT_EQ(j["rows"].size(), 10u);
  for (const auto& row : j["rows"]) {
    double z = row["point"][2].get<double>();
    EXPECT_NEAR(row["C"].get<double>(), z, 1e-9);
    EXPECT_EQ(row["case"], "case3");
  }
  EXPECT_TRUE(j["summary"].contains("expected.C"));
}

TEST(Run, IsDeterministic) {
  RunConfig c = example_config("invariants", "eta_frame", 8);
  std::string a = to_json_text(run(c).json), b = to_json_text(run(c).json);
  EXPECT_EQ(a, b);
  c.seed = 7;
  EXPECT_NE(a, to_json_text(run(c).json));
}

TEST(Run, ClassifyHistogram) {
  RunConfig c = example_config("classify", "eta_frame", 60);
  c.box = parse_box("0.2:1.3,0.3:3,-1:1");
  Report r = run(c);
  const auto& h = r.json["histogram"]["class"];
  int ell = h.value("elliptic", 0), hyp = h.value("hyperbolic", 0), band = h.value("excluded_band", 0);
  EXPECT_GT(ell, 0);
  EXPECT_GT(hyp, 0);
  EXPECT_EQ(ell + hyp + band, 60);
}

TEST(Run, CurvatureOnConstantC) {
  RunConfig c = example_config("curvature", "T2xR", 5);
  c.params = {{"psi", "0.3"}};
  Report r = run(c);
  EXPECT_TRUE(r.pass);
  double ch2 = std::pow(std::cosh(0.6), 2);
  for (const auto& row : r.json["rows"]) EXPECT_NEAR(row["theta12"].get<double>(), ch2, 1e-9);
}

TEST(Run, ExplicitPoints) {
  RunConfig c = example_config("invariants", "eta_frame");
  c.at = {{std::numbers::pi / 4, 2.0, 0.0}, {std::numbers::pi / 4, 0.5, 0.0}};
  Report r = run(c);
  ASSERT_EQ(r.json["rows"].size(), 2u);
  EXPECT_NEAR(r.json["rows"][0]["C"].get<double>(), 0.5, 1e-9);
  EXPECT_EQ(r.json["rows"][0]["class"], "elliptic");
  EXPECT_EQ(r.json["rows"][1]["class"], "hyperbolic");
}

TEST(Run, ExitCodes) {
  RunConfig tight = example_config("check", "eta_frame", 5);
  tight.tol.shallow = 1e-30;
  tight.tol.deep = 1e-30;
  Report r = run(tight);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.exit_code, 1);

  RunConfig bad = example_config("invariants", "no_such_example");
  EXPECT_EQ(run(bad).exit_code, 2);

  RunConfig off = example_config("invariants", "normal_form_3d", 3);
  off.at = {{1.2, 1.0, 0.0}};
  Report e = run(off);
  EXPECT_EQ(e.exit_code, 2);
  ASSERT_EQ(e.json["errors"].size(), 1u);
  EXPECT_EQ(e.json["errors"][0]["type"], "DomainError");
}

TEST(Run, FileInputWithOverride) {
  RunConfig c;
  c.command = "invariants";
  c.input = kData + "/hyp_ex.frame";
  c.points = 6;
  c.params = {{"eps", "1"}};
  Report r = run(c);
  EXPECT_EQ(r.exit_code, 0);
  for (const auto& row : r.json["rows"]) EXPECT_EQ(row["eps"], 1);
}

TEST(Run, FourDimensional) {
  RunConfig c;
  c.command = "fourdim";
  c.input = kData + "/enonzero.frame";
  c.box = parse_box("-0.5:0.5,0.5:1.5,-1:1,-0.5:0.5");
  c.points = 6;
  Report r = run(c);
  EXPECT_EQ(r.exit_code, 0) << to_json_text(r.json["summary"]);
}
