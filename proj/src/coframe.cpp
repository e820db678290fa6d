#include "bicontact/coframe.hpp"

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "bicontact/errors.hpp"

namespace bicontact {

std::vector<std::string> Chart::param_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : params) out.push_back(k);
  return out;
}

std::string_view name(Stage s) {
  switch (s) {
    case Stage::Raw: return "raw";
    case Stage::OneAdapted: return "one-adapted";
    case Stage::Case1Adapted: return "case1-adapted";
    case Stage::Case2Adapted: return "case2-adapted";
    case Stage::Case3Prolonged: return "case3-prolonged";
  }
  return "?";
}

Frame Coframe::at(std::span<const double> p, int order) const {
  if (static_cast<int>(p.size()) != dim())
    throw StructuralError(fmt::format("point has {} coordinates, chart has {}", p.size(), dim()));
  Frame f = sampler(p, order);
  double scale = 1.0;
  for (const auto& w : f) scale *= std::max(w.max_abs(), 1e-300);
  double v = volume(f)[0].value();
  if (!(std::abs(v) > 1e-14 * scale))
    throw SingularVolumeError(fmt::format("coframe degenerates (volume {:.3e})", v));
  return f;
}

Coframe coframe_from_fields(Chart chart, std::vector<std::vector<ScalarField>> coeffs) {
  int dim = chart.dim();
  if (dim < 3 || dim > 4) throw StructuralError("charts have 3 or 4 coordinates");
  if (static_cast<int>(coeffs.size()) != dim)
    throw ArityError(fmt::format("expected {} one-forms, got {}", dim, coeffs.size()));
  for (const auto& row : coeffs)
    if (static_cast<int>(row.size()) != dim)
      throw ArityError(fmt::format("expected {} coefficients per one-form", dim));
  Coframe out;
  out.chart = std::move(chart);
  out.sampler = [coeffs = std::move(coeffs)](std::span<const double> p, int order) {
    int dim = static_cast<int>(p.size());
    Frame f;
    for (const auto& row : coeffs) {
      std::vector<Jet> c;
      c.reserve(row.size());
      for (const auto& field : row) c.push_back(field ? field(p, order) : Jet(dim, order));
      f.push_back(Form::one_form(std::move(c)));
    }
    return f;
  };
  return out;
}

Coframe coframe_from_expressions(Chart chart, std::vector<std::vector<Expr>> coeffs) {
  std::vector<std::vector<ScalarField>> fields;
  for (auto& row : coeffs) {
    std::vector<ScalarField> r;
    for (auto& e : row) r.push_back(make_field(std::move(e), chart.params));
    fields.push_back(std::move(r));
  }
  return coframe_from_fields(std::move(chart), std::move(fields));
}

Coframe coframe_from_strings(Chart chart, const std::vector<std::vector<std::string>>& coeffs) {
  auto names = chart.param_names();
  std::vector<std::vector<Expr>> exprs;
  for (const auto& row : coeffs) {
    std::vector<Expr> r;
    for (const auto& s : row) r.push_back(parse(s, chart.coords, names));
    exprs.push_back(std::move(r));
  }
  return coframe_from_expressions(std::move(chart), std::move(exprs));
}

Coframe map_frames(const Coframe& f, std::function<Frame(const Frame&)> fn) {
  Coframe out = f;
  out.sampler = [inner = f.sampler, fn = std::move(fn)](std::span<const double> p, int order) {
    return fn(inner(p, order));
  };
  return out;
}

std::vector<Point> sample_box(const Box& box, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    Point p;
    for (auto [lo, hi] : box.ranges) p.push_back(std::uniform_real_distribution<double>(lo, hi)(rng));
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace bicontact
