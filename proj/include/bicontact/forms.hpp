#pragma once

#include <array>
#include <initializer_list>
#include <string_view>
#include <vector>

#include "bicontact/jet.hpp"

namespace bicontact {

// Strictly increasing index tuples of a given length, in lexicographic order.
// Each tuple is stored as a bitmask over the chart coordinates.
struct CombinationTable {
  int dim = 0;
  int degree = 0;
  std::vector<unsigned> masks;
  std::array<int, 16> rank{};  // mask -> position, -1 when absent

  std::vector<int> indices(int k) const;
};

const CombinationTable& combinations(int dim, int degree);
int binomial(int n, int k);

// A p-form at a point: jet-valued coefficients on dx^I for increasing I.
// The order budget is the common jet order of the coefficients.
class Form {
 public:
  Form() = default;
  Form(int dim, int degree, int order);

  static Form zero(int dim, int degree, int order) { return Form(dim, degree, order); }
  static Form scalar(Jet f);
  static Form one_form(std::vector<Jet> coeffs);
  // df for a 0-form jet; consumes one level of budget.
  static Form differential(const Jet& f, std::string_view stage = "differential");

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int budget() const { return order_; }
  std::size_t size() const { return c_.size(); }

  const Jet& operator[](std::size_t k) const { return c_[k]; }
  Jet& operator[](std::size_t k) { return c_[k]; }
  // Coefficient on dx^{i1} ^ ... ^ dx^{ip}; indices are 0-based, increasing.
  const Jet& at(std::initializer_list<int> idx) const;
  Jet& at(std::initializer_list<int> idx);
  const std::vector<Jet>& coeffs() const { return c_; }

  Form truncated(int order) const;
  // Coefficient values at the base point.
  std::vector<double> values() const;
  double max_abs() const;

  Form& operator+=(const Form& o);
  Form& operator-=(const Form& o);
  Form& operator*=(double s);
  Form& operator*=(const Jet& f);

  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator-(Form a) { return a *= -1.0; }
  friend Form operator*(Form a, double s) { return a *= s; }
  friend Form operator*(double s, Form a) { return a *= s; }
  friend Form operator*(const Jet& f, Form a) { return a *= f; }
  friend Form operator*(Form a, const Jet& f) { return a *= f; }
  Form operator/(const Jet& f) const;

 private:
  void align(Form& o);

  int dim_ = 0;
  int degree_ = 0;
  int order_ = 0;
  std::vector<Jet> c_;
};

Form wedge(const Form& a, const Form& b);
Form wedge(std::initializer_list<Form> forms);
// Exterior derivative; an exhausted budget raises BudgetError naming `stage`.
Form ext_d(const Form& a, std::string_view stage = "ext_d");

// The scalar lambda with a = lambda * b for top-degree forms.
Jet top_ratio(const Form& a, const Form& b);
double top_ratio_value(const Form& a, const Form& b);

// A coframe evaluated at a point.
using Frame = std::vector<Form>;

Form volume(const Frame& f);
int frame_budget(const Frame& f);
Frame truncated(const Frame& f, int order);

// (b23, b13, b12) of a 2-form against a 3D coframe via volume ratios.
std::array<Jet, 3> coeffs_in_coframe(const Form& beta, const Frame& f);
Form reconstruct_2form(const std::array<Jet, 3>& b, const Frame& f);
// (a ^ da) / Omega for a 1-form on a 3D chart.
Jet frobenius_defect(const Form& a, const Frame& f);

// Dual frame e_i = sum_j n[j][i] d/dx^j of a coframe.
struct DualFrame {
  int dim = 0;
  std::vector<std::vector<Jet>> n;
};

DualFrame dual_frame(const Frame& f);
// e_i(f); the result has order min(order(n), order(f) - 1).
Jet directional(const DualFrame& e, int i, const Jet& f);
// Coefficients of a p-form on omega^I (increasing I, lexicographic).
std::vector<Jet> expand_in_coframe(const Form& beta, const DualFrame& e);
// Inverse of expand_in_coframe.
Form assemble(const std::vector<Jet>& coeffs, int degree, const Frame& f);

// Jet-valued dense matrix inverse (Gauss-Jordan, pivoting on values).
std::vector<std::vector<Jet>> inverse(std::vector<std::vector<Jet>> m);

}  // namespace bicontact
