#include "bicontact/report.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "bicontact/errors.hpp"
#include "bicontact/examples.hpp"
#include "bicontact/prolong4d.hpp"
#include "bicontact/riemannian.hpp"

namespace bicontact {

using json = nlohmann::ordered_json;

// Input format ----------------------------------------------------------------

namespace {

struct Token {
  enum Kind { Section, Word, Equals, String } kind;
  std::string text;
  int line, col;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  std::size_t i = 0, line_start = 0;
  auto col = [&](std::size_t at) { return static_cast<int>(at - line_start) + 1; };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      line_start = ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '[') {
      std::size_t end = text.find(']', i);
      std::size_t nl = text.find('\n', i);
      if (end == std::string_view::npos || end > nl)
        throw InputError("unterminated section header", line, col(i));
      out.push_back({Token::Section, std::string(text.substr(i + 1, end - i - 1)), line, col(i)});
      i = end + 1;
    } else if (c == '=') {
      out.push_back({Token::Equals, "=", line, col(i)});
      ++i;
    } else if (c == '"') {
      std::size_t end = text.find('"', i + 1);
      std::size_t nl = text.find('\n', i);
      if (end == std::string_view::npos || end > nl)
        throw InputError("unterminated string", line, col(i));
      out.push_back({Token::String, std::string(text.substr(i + 1, end - i - 1)), line, col(i) + 1});
      i = end + 1;
    } else {
      std::size_t start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
             text[i] != '=' && text[i] != '#' && text[i] != '"' && text[i] != '[')
        ++i;
      out.push_back({Token::Word, std::string(text.substr(start, i - start)), line, col(start)});
    }
  }
  return out;
}

struct Entry {
  std::string value;
  int line, col;
};

}  // namespace

Coframe parse_coframe(std::string_view text) {
  auto tokens = tokenize(text);
  std::vector<std::string> coords;
  ParamTable params;
  std::map<int, std::map<std::string, Entry>> omega;
  std::string section;

  std::size_t i = 0;
  auto expect_key = [&](const Token& t) {
    if (t.kind != Token::Word) throw InputError(fmt::format("expected a key, got '{}'", t.text), t.line, t.col);
    if (i + 1 >= tokens.size() || tokens[i + 1].kind != Token::Equals)
      throw InputError(fmt::format("expected '=' after '{}'", t.text), t.line, t.col + int(t.text.size()));
  };
  while (i < tokens.size()) {
    const Token& t = tokens[i];
    if (t.kind == Token::Section) {
      section = t.text;
      bool known = section == "chart" || section == "params";
      if (section.size() == 6 && section.starts_with("omega") && section[5] >= '1' && section[5] <= '4') {
        known = true;
        int k = section[5] - '0';
        if (omega.count(k)) throw InputError(fmt::format("duplicate section [{}]", section), t.line, t.col);
        omega[k];
      }
      if (!known) throw InputError(fmt::format("unknown section [{}]", section), t.line, t.col);
      ++i;
      continue;
    }
    if (section.empty()) throw InputError("entry outside of a section", t.line, t.col);
    expect_key(t);
    i += 2;
    if (section == "chart") {
      if (t.text != "coords") throw InputError(fmt::format("unknown chart key '{}'", t.text), t.line, t.col);
      // every following word on the same line
      while (i < tokens.size() && tokens[i].kind == Token::Word && tokens[i].line == t.line)
        coords.push_back(tokens[i++].text);
      if (coords.size() != 3 && coords.size() != 4)
        throw InputError(fmt::format("a chart needs 3 or 4 coordinates, got {}", coords.size()), t.line,
                         t.col);
      continue;
    }
    if (i >= tokens.size() || tokens[i].kind == Token::Section || tokens[i].kind == Token::Equals)
      throw InputError(fmt::format("missing value for '{}'", t.text), t.line, t.col);
    const Token& v = tokens[i++];
    if (section == "params") {
      try {
        std::size_t used = 0;
        double x = std::stod(v.text, &used);
        if (used != v.text.size()) throw std::invalid_argument(v.text);
        params[t.text] = x;
      } catch (const std::logic_error&) {
        throw InputError(fmt::format("parameter '{}' needs a number", t.text), v.line, v.col);
      }
      continue;
    }
    auto& row = omega[section[5] - '0'];
    if (row.count(t.text)) throw InputError(fmt::format("duplicate key '{}'", t.text), t.line, t.col);
    row[t.text] = {v.text, v.line, v.col};
  }

  if (coords.empty()) throw ArityError("missing [chart] coords");
  int n = static_cast<int>(coords.size());
  Chart chart{coords, params};
  auto names = chart.param_names();

  // Syntax and key errors come before arity so they carry a position.
  std::vector<std::vector<Expr>> rows(n);
  for (auto& [k, row] : omega) {
    if (k > n) continue;
    for (const auto& c : coords) {
      auto it = row.find("d" + c);
      if (it == row.end()) {
        rows[k - 1].push_back(parse("0", coords, names));
        continue;
      }
      try {
        rows[k - 1].push_back(parse(it->second.value, coords, names));
      } catch (const ParseError& e) {
        throw InputError(e.what(), it->second.line, it->second.col + int(e.position()));
      }
      row.erase(it);
    }
    if (!row.empty()) {
      const auto& [key, e] = *row.begin();
      throw InputError(fmt::format("'{}' is not d<coordinate> for this chart", key), e.line, e.col);
    }
  }
  for (int k = 1; k <= n; ++k)
    if (!omega.count(k)) throw ArityError(fmt::format("missing [omega{}] section for a {}D chart", k, n));
  for (const auto& [k, row] : omega)
    if (k > n) throw ArityError(fmt::format("[omega{}] given for a {}D chart", k, n));
  return coframe_from_expressions(std::move(chart), std::move(rows));
}

Coframe load_coframe(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open {}", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_coframe(ss.str());
}

Box parse_box(std::string_view text) {
  Box box;
  auto number = [&](std::string_view part) {
    double v = 0.0;
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || end != part.data() + part.size() || part.empty())
      throw Error(fmt::format("bad number '{}' in --box {}", part, text));
    return v;
  };
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    std::string_view part = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    auto colon = part.find(':');
    if (colon == std::string_view::npos) throw Error(fmt::format("box range '{}' needs lo:hi", part));
    double lo = number(part.substr(0, colon)), hi = number(part.substr(colon + 1));
    if (!(lo < hi)) throw Error(fmt::format("empty box range '{}'", part));
    box.ranges.emplace_back(lo, hi);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return box;
}

std::vector<std::string> command_names() {
  return {"check", "invariants", "classify", "taut", "curvature", "fourdim", "normal-form", "example"};
}

double tolerance_for(std::string_view residual, const Tolerances& tol) {
  for (std::string_view deep : {"der", "coords.", "expected.", "curv4.", "leaf.", "nf4."})
    if (residual.starts_with(deep)) return tol.deep;
  return tol.shallow;
}

// JSON output -----------------------------------------------------------------

namespace {

void write_json(std::string& out, const json& j, int indent, int depth) {
  auto newline = [&](int d) {
    if (indent <= 0) return;
    out += '\n';
    out.append(std::size_t(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::null: out += "null"; break;
    case json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
    case json::value_t::number_integer: out += std::to_string(j.get<std::int64_t>()); break;
    case json::value_t::number_unsigned: out += std::to_string(j.get<std::uint64_t>()); break;
    case json::value_t::number_float: {
      double v = j.get<double>();
      out += std::isfinite(v) ? fmt::format("{:.17g}", v) : "null";
      break;
    }
    case json::value_t::string: out += j.dump(); break;
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        if (!flat) newline(depth + 1);
        write_json(out, e, indent, depth + 1);
        first = false;
      }
      if (!flat) newline(depth);
      out += ']';
      break;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        newline(depth + 1);
        out += json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        write_json(out, it.value(), indent, depth + 1);
        first = false;
      }
      newline(depth);
      out += '}';
      break;
    }
    default: out += j.dump(); break;
  }
}

}  // namespace

std::string to_json_text(const json& j, int indent) {
  std::string out;
  write_json(out, j, indent, 0);
  out += '\n';
  return out;
}

// Running commands -------------------------------------------------------------

namespace {

std::string error_kind(const std::exception& e) {
#define BICONTACT_KIND(T) \
  if (dynamic_cast<const T*>(&e)) return #T;
  BICONTACT_KIND(InputError)
  BICONTACT_KIND(ArityError)
  BICONTACT_KIND(ParseError)
  BICONTACT_KIND(UnknownIdentifier)
  BICONTACT_KIND(DomainError)
  BICONTACT_KIND(BudgetError)
  BICONTACT_KIND(SingularVolumeError)
  BICONTACT_KIND(ContactFailure)
  BICONTACT_KIND(MixedEpsilon)
  BICONTACT_KIND(BranchError)
  BICONTACT_KIND(AmbiguousCase)
  BICONTACT_KIND(CriticalPoint)
  BICONTACT_KIND(DegenerateB)
  BICONTACT_KIND(DegenerateTranslation)
  BICONTACT_KIND(NotIntegrable)
  BICONTACT_KIND(OdeStepFailure)
  BICONTACT_KIND(DegenerateH)
  BICONTACT_KIND(StructuralError)
  BICONTACT_KIND(Error)
#undef BICONTACT_KIND
  return "std::exception";
}

json point_json(std::span<const double> p) { return json(std::vector<double>(p.begin(), p.end())); }

// Collects residuals, global checks and errors for one run.
class Collector {
 public:
  explicit Collector(const Tolerances& tol) : tol_(tol) {}

  void residual(const std::string& name, double v) {
    auto [it, fresh] = stats_.try_emplace(name);
    if (fresh) order_.push_back(name);
    Stat& s = it->second;
    double a = std::abs(v);
    if (std::isnan(v)) ++s.nan;
    else {
      s.max = std::max(s.max, a);
      s.sum += a;
      ++s.count;
    }
  }
  void residuals(const Residuals& r, json& row) {
    json obj = json::object();
    for (const auto& [k, v] : r) {
      residual(k, v);
      obj[k] = v;
    }
    row["residuals"] = std::move(obj);
  }
  void check(const std::string& name, double value, double tolerance) {
    bool ok = std::abs(value) <= tolerance;
    pass_ = pass_ && ok;
    checks_.push_back(json{{"name", name}, {"value", value}, {"tolerance", tolerance}, {"pass", ok}});
  }
  void error(const std::exception& e, std::optional<std::size_t> point = {}) {
    errored_ = true;
    json j;
    j["point"] = point ? json(*point) : json(nullptr);
    j["type"] = error_kind(e);
    j["message"] = e.what();
    errors_.push_back(std::move(j));
  }
  void count(const std::string& histogram, const std::string& key) { hist_[histogram][key] += 1; }

  json summary() {
    json out = json::object();
    for (const auto& name : order_) {
      const Stat& s = stats_[name];
      double tol = tolerance_for(name, tol_);
      bool ok = s.nan == 0 && s.max <= tol;
      pass_ = pass_ && ok;
      out[name] = json{{"max", s.max},
                       {"mean", s.count ? s.sum / s.count : 0.0},
                       {"count", s.count},
                       {"nan", s.nan},
                       {"tolerance", tol},
                       {"pass", ok}};
    }
    return out;
  }
  json histograms() const {
    json out = json::object();
    for (const auto& [h, counts] : hist_) {
      json c = json::object();
      for (const auto& [k, v] : counts) c[k] = v;
      out[h] = std::move(c);
    }
    return out;
  }
  const json& checks() const { return checks_; }
  const json& errors() const { return errors_; }
  bool pass() const { return pass_ && !errored_; }
  bool errored() const { return errored_; }

 private:
  struct Stat {
    double max = 0.0, sum = 0.0;
    int count = 0, nan = 0;
  };
  Tolerances tol_;
  std::vector<std::string> order_;
  std::map<std::string, Stat> stats_;
  std::map<std::string, std::map<std::string, int>> hist_;
  json checks_ = json::array();
  json errors_ = json::array();
  bool pass_ = true;
  bool errored_ = false;
};

struct Source {
  Coframe coframe;
  std::optional<ExampleSpec> spec;
  Box box;
};

std::string param(const RunConfig& c, const std::string& key, const std::string& def) {
  for (const auto& [k, v] : c.params)
    if (k == key) return v;
  return def;
}

Box default_box(int dim) {
  Box b;
  b.ranges.assign(dim, {-1.0, 1.0});
  return b;
}

Source resolve(const RunConfig& c) {
  Source s;
  if (!c.example.empty()) {
    s.spec = make_example(c.example, c.params);
    s.coframe = s.spec->coframe;
    s.box = s.spec->box;
  } else if (!c.input.empty()) {
    std::ifstream in(c.input);
    if (!in) throw Error(fmt::format("cannot open {}", c.input));
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    // --param overrides come last, so they win over the file's [params]
    if (!c.params.empty()) {
      text += "\n[params]\n";
      for (const auto& [k, v] : c.params) text += k + " = " + v + "\n";
    }
    s.coframe = parse_coframe(text);
    s.box = default_box(s.coframe.dim());
  } else {
    throw Error("no input: give a coframe file or --example");
  }
  if (c.box) s.box = *c.box;
  if (static_cast<int>(s.box.ranges.size()) != s.coframe.dim())
    throw ArityError(fmt::format("box has {} ranges for a {}D chart", s.box.ranges.size(), s.coframe.dim()));
  return s;
}

std::vector<Point> samples(const RunConfig& c, const Box& box) {
  if (!c.at.empty()) return c.at;
  return sample_box(box, c.points, c.seed);
}

json record_json(const InvariantRecord& r) {
  json row;
  row["point"] = point_json(r.point);
  row["eps"] = r.eps;
  row["case"] = r.case_tag ? json(std::string(name(*r.case_tag))) : json(nullptr);
  row["class"] = r.class_tag ? json(std::string(name(*r.class_tag))) : json(nullptr);
  const std::pair<const char*, double> fields[] = {
      {"C", r.C},     {"C1", r.C1}, {"C2", r.C2}, {"C3", r.C3},     {"C33", r.C33},
      {"C333", r.C333}, {"A1", r.A1}, {"A2", r.A2}, {"A3", r.A3},   {"B1", r.B1},
      {"B2", r.B2},   {"B3", r.B3}, {"xi", r.xi}, {"zeta", r.zeta}, {"zeta3", r.zeta3},
      {"rho", r.rho}, {"W", r.W},   {"E", r.E}};
  for (const auto& [k, v] : fields) row[k] = v;
  return row;
}

double record_field(const InvariantRecord& r, const std::string& key) {
  if (key == "C") return r.C;
  if (key == "C3") return r.C3;
  if (key == "A1") return r.A1;
  if (key == "A2") return r.A2;
  if (key == "eps") return r.eps;
  return kUnset;
}

// Expected-value comparisons recorded as residuals.
void compare_expected(const ExampleSpec& spec, std::span<const double> p,
                      const std::vector<std::pair<std::string, double>>& actual, Residuals& out) {
  for (const auto& [key, value] : actual) {
    if (!spec.has_expected(key) || std::isnan(value)) continue;
    out.emplace_back("expected." + key, value - spec.expected_value(key, p));
  }
}

Coframe adapted(const Source& s, std::span<const Point> pts) {
  if (s.coframe.stage != Stage::Raw) return s.coframe;
  return one_adapt(s.coframe, pts);
}

void run_invariants(const RunConfig& c, const Source& s, std::span<const Point> pts, Collector& col,
                    json& rows, bool residuals_only) {
  Coframe f = adapted(s, pts);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    try {
      InvariantRecord r = analyze_point(f, pts[k], c.order, c.tol);
      if (s.spec) {
        std::vector<std::pair<std::string, double>> actual;
        for (const auto& [key, v] : s.spec->expected) actual.emplace_back(key, record_field(r, key));
        compare_expected(*s.spec, pts[k], actual, r.residuals);
      }
      json row;
      if (residuals_only) {
        row["point"] = point_json(r.point);
        row["case"] = r.case_tag ? json(std::string(name(*r.case_tag))) : json(nullptr);
      } else {
        row = record_json(r);
      }
      col.residuals(r.residuals, row);
      if (r.case_tag) col.count("case", std::string(name(*r.case_tag)));
      if (r.class_tag) col.count("class", std::string(name(*r.class_tag)));
      rows.push_back(std::move(row));
    } catch (const Error& e) {
      col.error(e, k);
    }
  }
}

void run_classify(const RunConfig& c, const Source& s, std::span<const Point> pts, Collector& col,
                  json& rows) {
  Coframe f = adapted(s, pts);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    try {
      double C = compute_C(f.at(pts[k], 2)).value();
      auto q = classify(C, f.eps, c.tol.linear_band);
      json row;
      row["point"] = point_json(pts[k]);
      row["C"] = C;
      row["eps"] = f.eps;
      row["class"] = std::string(name(q.tag));
      row["witness"] = q.witness;
      bool excluded = q.tag == ClassTag::Linear;
      row["excluded"] = excluded;
      col.count("class", excluded ? "excluded_band" : std::string(name(q.tag)));
      rows.push_back(std::move(row));
    } catch (const Error& e) {
      col.error(e, k);
    }
  }
}

std::vector<std::pair<double, double>> circle_parameters(CircleBranch b) {
  std::vector<std::pair<double, double>> a;
  for (int k = 0; k < 8; ++k) {
    double t = 2.0 * std::numbers::pi * k / 8.0;
    if (b.plus > 0 && b.minus > 0) a.emplace_back(std::cos(t), std::sin(t));
    else {
      // a on s+ a1^2 + s- a2^2 = 1
      double u = -1.5 + 3.0 * k / 7.0;
      if (b.plus > 0) a.emplace_back(std::cosh(u), std::sinh(u));
      else a.emplace_back(std::sinh(u), std::cosh(u));
    }
  }
  return a;
}

void run_taut(const RunConfig& c, const Source& s, std::span<const Point> pts, Collector& col, json& rows) {
  Coframe f = adapted(s, pts);
  if (f.eps == -1) {
    CircleBranch branch = circle_branch(f, pts, 2);
    auto as = circle_parameters(branch);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      try {
        TautCircle t = taut_circle_frame(f.at(pts[k], c.order), branch);
        double worst = 0.0;
        for (auto [a1, a2] : as)
          worst = std::max(worst, std::abs(taut_circle_ratio(t, a1, a2).value() -
                                           taut_circle_prediction(t, a1, a2)));
        json row;
        row["point"] = point_json(pts[k]);
        row["transform"] = "circle";
        row["C"] = t.C.value();
        row["C3"] = t.C3.value();
        row["kappa"] = t.kappa.value();
        row["branch"] = json::array({branch.plus, branch.minus});
        Residuals r{{"taut.circle", worst},
                    {"taut.circle_cross", t.cross.value() - t.kappa.value() * t.C3.value()}};
        col.residuals(r, row);
        rows.push_back(std::move(row));
      } catch (const Error& e) {
        col.error(e, k);
      }
    }
  } else {
    for (std::size_t k = 0; k < pts.size(); ++k) {
      try {
        Frame fr = f.at(pts[k], c.order);
        TautHyperbola h = taut_hyperbola_frame(fr);
        double C = compute_C(fr).value();
        json row;
        row["point"] = point_json(pts[k]);
        row["transform"] = "hyperbola";
        row["C"] = C;
        row["theta"] = h.theta.value();
        row["ratio1"] = h.ratio1.value();
        row["ratio2"] = h.ratio2.value();
        Residuals r{{"taut.hyperbola1", h.ratio1.value() - h.predicted1.value()},
                    {"taut.hyperbola2", h.ratio2.value() - h.predicted2.value()},
                    {"taut.hyperbola_sum",
                     h.sum_defect.value() + h.C3.value() / std::pow(1.0 + C * C, 1.5)}};
        col.residuals(r, row);
        rows.push_back(std::move(row));
      } catch (const Error& e) {
        col.error(e, k);
      }
    }
  }
}

void run_fourdim(const RunConfig& c, const Source& s, std::span<const Point> pts, Collector& col,
                 json& rows) {
  const std::pair<double, double> as[] = {{1.0, 0.0}, {0.0, 1.0}, {0.6, 0.8}, {-0.8, 0.6}};
  for (std::size_t k = 0; k < pts.size(); ++k) {
    try {
      Frame fr = s.coframe.at(pts[k], c.order);
      SympStructure st = symp_structure(fr);
      EValue e = compute_E(fr);
      SymplecticCheck sq = symplectic_quadratic_check(fr, st.eps, st.C.value(), as);
      Curvature4 cv = curvature4(fr, st);
      json row;
      row["point"] = point_json(pts[k]);
      row["eps"] = st.eps;
      row["C"] = st.C.value();
      row["E"] = e.E.value();
      row["S"] = cv.S;
      row["Pf"] = cv.Pf;
      Residuals r = st.residuals;
      r.emplace_back("symp.dE", e.dE_residual);
      r.emplace_back("sq.d_theta", sq.d_theta);
      r.emplace_back("sq.theta11", sq.theta11);
      r.emplace_back("sq.theta22", sq.theta22);
      r.emplace_back("sq.theta12", sq.theta12);
      double qa = 0.0;
      for (double q : sq.quadratic) qa = std::max(qa, std::abs(q));
      r.emplace_back("sq.quadratic", qa);
      r.emplace_back("curv4.levi_civita", cv.connection.structure_residual);
      for (const auto& [name, v] : cv.connection_residuals) r.emplace_back("curv4." + name, v);
      r.emplace_back("curv4.S", cv.S - cv.S_predicted);
      r.emplace_back("curv4.Pf", cv.Pf - cv.Pf_predicted);
      r.emplace_back("curv4.theta34", cv.theta34);
      r.emplace_back("curv4.leaf_trace", cv.leaf_trace);
      if (s.spec)
        compare_expected(*s.spec, pts[k],
                         {{"E", e.E.value()}, {"C", st.C.value()}, {"eps", double(st.eps)}}, r);
      col.residuals(r, row);
      rows.push_back(std::move(row));
    } catch (const Error& e) {
      col.error(e, k);
    }
  }
}

void run_curvature(const RunConfig& c, const Source& s, std::span<const Point> pts, Collector& col,
                   json& rows) {
  if (s.coframe.dim() == 4) return run_fourdim(c, s, pts, col, rows);
  Coframe f = adapted(s, pts);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    try {
      Frame fr = f.at(pts[k], c.order);
      json row;
      row["point"] = point_json(pts[k]);
      std::optional<Case2Jets> c2;
      if (case_probe(fr, c.tol).tag == CaseTag::Case2) {
        c2 = case2_adapt_frame(fr, c.tol);
        fr = c2->frame;
      }
      row["frame"] = c2 ? "case2" : "one_adapted";
      Connection lc = levi_civita(fr);
      Curvature R = curvature(lc, fr);
      row["theta12"] = R.value(0, 1, 0, 1);
      row["K12"] = R.sectional(0, 1);
      row["K13"] = R.sectional(0, 2);
      row["K23"] = R.sectional(1, 2);
      row["S"] = scalar_curvature(R);
      Residuals r{{"curv.levi_civita", lc.structure_residual}, {"curv.bianchi", R.bianchi_residual}};
      try {
        LeafGeometry g = leaf_geometry(fr, lc, R, c.tol.shallow);
        row["H"] = g.H;
        row["K_leaf"] = g.K_leaf;
        row["K_gauss"] = g.K_gauss;
        r.emplace_back("leaf.gauss", g.K_leaf - g.K_gauss);
        if (c2) {
          double A3 = c2->A3.value(), C = c2->C.value();
          row["H_minus_A3"] = g.H - A3;
          row["K_leaf_minus_claim"] = g.K_leaf - (A3 * A3 - C * C - 0.5 * (1 + f.eps));
        }
      } catch (const NotIntegrable& e) {
        row["H"] = nullptr;
        row["leaf_defect"] = e.defect();
      }
      col.residuals(r, row);
      rows.push_back(std::move(row));
    } catch (const Error& e) {
      col.error(e, k);
    }
  }
}

QOde qode_from(const RunConfig& c) {
  QOde o;
  o.C = param(c, "C", "0");
  o.eps = std::stoi(param(c, "eps", "-1"));
  o.z0 = std::stod(param(c, "z0", "0"));
  o.q1 = {std::stod(param(c, "q1", "0")), std::stod(param(c, "q1p", "1"))};
  o.q2 = {std::stod(param(c, "q2", "1")), std::stod(param(c, "q2p", "0"))};
  return o;
}

void run_normal_form(const RunConfig& c, std::span<const Point> pts, Collector& col, json& rows) {
  QOde o = qode_from(c);
  double z1 = std::stod(param(c, "z1", "1"));
  col.check("ode.wronskian_drift", wronskian_drift(o, z1), 1e-8);
  std::array<std::string, 4> h{param(c, "h11", "1"), param(c, "h12", "0"), param(c, "h21", "0"),
                               param(c, "h22", "1")};
  Coframe f = normal_form_4d(o, h);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    try {
      NormalForm4dCheck chk = check_normal_form_4d(f, pts[k], c.order);
      json row;
      row["point"] = point_json(pts[k]);
      row["E_minus_w"] = chk.E_error;
      Residuals r{{"nf4.symp", chk.symp}, {"nf4.E", chk.E_error}, {"nf4.dE", chk.dE}};
      col.residuals(r, row);
      rows.push_back(std::move(row));
    } catch (const Error& e) {
      col.error(e, k);
    }
  }
}

json config_json(const RunConfig& c, const Box& box, std::size_t count) {
  json j;
  j["command"] = c.command;
  j["input"] = c.input.empty() ? json(nullptr) : json(c.input);
  j["example"] = c.example.empty() ? json(nullptr) : json(c.example);
  json params = json::object();
  for (const auto& [k, v] : c.params) params[k] = v;
  j["params"] = std::move(params);
  j["order"] = c.order;
  j["tolerances"] = json{{"shallow", c.tol.shallow},   {"deep", c.tol.deep},
                         {"c3_zero", c.tol.c3_zero},   {"case3", c.tol.case3},
                         {"linear_band", c.tol.linear_band}, {"contact", c.tol.contact},
                         {"translation", c.tol.translation}};
  json samples;
  samples["count"] = count;
  samples["seed"] = c.seed;
  if (c.at.empty()) {
    json b = json::array();
    for (auto [lo, hi] : box.ranges) b.push_back(json::array({lo, hi}));
    samples["box"] = std::move(b);
  } else {
    samples["explicit"] = true;
  }
  j["samples"] = std::move(samples);
  return j;
}

}  // namespace

Report run(const RunConfig& config) {
  RunConfig c = config;
  Collector col(c.tol);
  json rows = json::array();
  Box box;
  std::size_t count = 0;

  try {
    if (c.order < 1 || c.order > kMaxJetOrder) throw Error(fmt::format("order must be in 1..{}", kMaxJetOrder));
    for (double t : {c.tol.shallow, c.tol.deep, c.tol.c3_zero, c.tol.case3, c.tol.linear_band,
                     c.tol.contact, c.tol.translation})
      if (!(t > 0)) throw Error("tolerances must be positive");

    bool four_d_nf = c.command == "normal-form" && param(c, "dim", "3") == "4";
    if (c.command == "normal-form" && !four_d_nf) {
      // the 3D normal form runs through the full pipeline with its expected table
      std::vector<std::pair<std::string, std::string>> p;
      for (const auto& [k, v] : c.params)
        if (k != "dim") p.emplace_back(k, v);
      c.example = "normal_form_3d";
      c.params = p;
    }
    if (four_d_nf) {
      box = c.box ? *c.box : Box{{{-1, 1}, {-1, 1}, {0, 1}, {0.5, 2}}};
      auto pts = samples(c, box);
      count = pts.size();
      run_normal_form(c, pts, col, rows);
    } else {
      if (c.command == "example" && c.example.empty()) std::swap(c.example, c.input);
      Source s = resolve(c);
      box = s.box;
      auto pts = samples(c, box);
      count = pts.size();
      for (const auto& p : pts)
        if (static_cast<int>(p.size()) != s.coframe.dim())
          throw ArityError(fmt::format("point of dimension {} on a {}D chart", p.size(), s.coframe.dim()));
      bool four = s.coframe.dim() == 4;
      const std::string& cmd = c.command;
      if (four && cmd != "check" && cmd != "fourdim" && cmd != "curvature" && cmd != "example" &&
          cmd != "invariants")
        throw StructuralError(fmt::format("'{}' needs a 3D coframe", cmd));
      if (!four && cmd == "fourdim") throw StructuralError("'fourdim' needs a 4D coframe");
      if (four) run_fourdim(c, s, pts, col, rows);
      else if (cmd == "invariants" || cmd == "example" || cmd == "normal-form")
        run_invariants(c, s, pts, col, rows, false);
      else if (cmd == "check") run_invariants(c, s, pts, col, rows, true);
      else if (cmd == "classify") run_classify(c, s, pts, col, rows);
      else if (cmd == "taut") run_taut(c, s, pts, col, rows);
      else if (cmd == "curvature") run_curvature(c, s, pts, col, rows);
      else throw Error(fmt::format("unknown command '{}'", cmd));
    }
  } catch (const std::exception& e) {
    col.error(e);
  }

  Report rep;
  json& j = rep.json;
  j["tool"] = "bicontact";
  j["version"] = std::string(kToolVersion);
  j["config"] = config_json(c, box, count);
  j["rows"] = std::move(rows);
  j["summary"] = col.summary();
  j["histogram"] = col.histograms();
  j["checks"] = col.checks();
  j["errors"] = col.errors();
  rep.pass = col.pass();
  j["pass"] = rep.pass;
  rep.exit_code = col.errored() ? 2 : (rep.pass ? 0 : 1);
  return rep;
}

}  // namespace bicontact
