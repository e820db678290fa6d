#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bicontact/expr.hpp"
#include "bicontact/forms.hpp"

namespace bicontact {

struct Chart {
  std::vector<std::string> coords;
  ParamTable params;

  int dim() const { return static_cast<int>(coords.size()); }
  std::vector<std::string> param_names() const;
};

enum class Stage { Raw, OneAdapted, Case1Adapted, Case2Adapted, Case3Prolonged };
std::string_view name(Stage s);

using Point = std::vector<double>;
// Evaluates every coframe entry at a point as jets of the requested order.
using FrameSampler = std::function<Frame(std::span<const double>, int)>;

struct Coframe {
  Chart chart;
  int eps = 0;  // 0 until one-adapted
  int delta = 1;
  Stage stage = Stage::Raw;
  FrameSampler sampler;

  // Throws SingularVolumeError when the coframe degenerates at p.
  Frame at(std::span<const double> p, int order) const;
  int dim() const { return chart.dim(); }
};

// coeffs[i][j] is the dx^j coefficient of omega^(i+1); empty fields are zero.
Coframe coframe_from_fields(Chart chart, std::vector<std::vector<ScalarField>> coeffs);
Coframe coframe_from_expressions(Chart chart, std::vector<std::vector<Expr>> coeffs);
Coframe coframe_from_strings(Chart chart, const std::vector<std::vector<std::string>>& coeffs);

// Same chart and metadata, each form replaced through fn.
Coframe map_frames(const Coframe& f, std::function<Frame(const Frame&)> fn);

struct Box {
  std::vector<std::pair<double, double>> ranges;
};

// Uniform samples in a box from a seeded mt19937_64.
std::vector<Point> sample_box(const Box& box, int count, std::uint64_t seed);

}  // namespace bicontact
