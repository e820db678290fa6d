#include "bicontact/forms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <mutex>

#include <fmt/format.h>

#include "bicontact/errors.hpp"

namespace bicontact {

namespace {

constexpr double kSingularVolume = 1e-13;

int parity_before(unsigned mask, int i) {
  return std::popcount(mask & ((1u << i) - 1u));
}

// Sign of dx^I ^ dx^J relative to dx^{I u J}.
int merge_sign(unsigned a, unsigned b) {
  int swaps = 0;
  for (int j = 0; j < kMaxJetDim; ++j)
    if (b & (1u << j)) swaps += std::popcount(a & ~((1u << (j + 1)) - 1u));
  return swaps % 2 ? -1 : 1;
}

Jet det(const std::vector<std::vector<Jet>>& m, std::vector<int>& rows, std::vector<int>& cols) {
  if (rows.size() == 1) return m[rows[0]][cols[0]];
  Jet total;
  int r = rows.front();
  std::vector<int> sub_rows(rows.begin() + 1, rows.end());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    std::vector<int> sub_cols;
    for (std::size_t c = 0; c < cols.size(); ++c)
      if (c != k) sub_cols.push_back(cols[c]);
    Jet term = m[r][cols[k]] * det(m, sub_rows, sub_cols);
    if (k % 2) term = -term;
    total = total.empty() ? term : total + term;
  }
  return total;
}

}  // namespace

int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<int> CombinationTable::indices(int k) const {
  std::vector<int> out;
  for (int i = 0; i < dim; ++i)
    if (masks[k] & (1u << i)) out.push_back(i);
  return out;
}

const CombinationTable& combinations(int dim, int degree) {
  if (dim < 1 || dim > kMaxJetDim || degree < 0 || degree > dim)
    throw StructuralError(fmt::format("no {}-forms on a {}-dimensional chart", degree, dim));
  static std::once_flag flag;
  static std::array<std::array<CombinationTable, kMaxJetDim + 1>, kMaxJetDim + 1> tables;
  std::call_once(flag, [] {
    for (int n = 1; n <= kMaxJetDim; ++n) {
      for (int p = 0; p <= n; ++p) {
        CombinationTable& t = tables[n][p];
        t.dim = n;
        t.degree = p;
        t.rank.fill(-1);
        std::vector<std::vector<int>> tuples;
        for (unsigned m = 0; m < (1u << n); ++m) {
          if (std::popcount(m) != p) continue;
          std::vector<int> idx;
          for (int i = 0; i < n; ++i)
            if (m & (1u << i)) idx.push_back(i);
          tuples.push_back(idx);
        }
        std::sort(tuples.begin(), tuples.end());
        for (const auto& idx : tuples) {
          unsigned m = 0;
          for (int i : idx) m |= 1u << i;
          t.rank[m] = static_cast<int>(t.masks.size());
          t.masks.push_back(m);
        }
      }
    }
  });
  return tables[dim][degree];
}

Form::Form(int dim, int degree, int order) : dim_(dim), degree_(degree), order_(order) {
  const auto& t = combinations(dim, degree);
  c_.assign(t.masks.size(), Jet(dim, order));
}

Form Form::scalar(Jet f) {
  Form out(f.dim(), 0, f.order());
  out.c_[0] = std::move(f);
  return out;
}

Form Form::one_form(std::vector<Jet> coeffs) {
  if (coeffs.empty()) throw StructuralError("empty 1-form");
  int dim = coeffs[0].dim();
  if (static_cast<int>(coeffs.size()) != dim)
    throw StructuralError("1-form needs one coefficient per coordinate");
  int order = coeffs[0].order();
  for (const auto& c : coeffs) order = std::min(order, c.order());
  Form out(dim, 1, order);
  for (int i = 0; i < dim; ++i) out.c_[i] = coeffs[i].truncated(order);
  return out;
}

Form Form::differential(const Jet& f, std::string_view stage) {
  return ext_d(scalar(f), stage);
}

const Jet& Form::at(std::initializer_list<int> idx) const {
  return const_cast<Form*>(this)->at(idx);
}

Jet& Form::at(std::initializer_list<int> idx) {
  unsigned m = 0;
  int prev = -1;
  for (int i : idx) {
    if (i <= prev || i >= dim_) throw StructuralError("form index must be increasing and in range");
    m |= 1u << i;
    prev = i;
  }
  if (static_cast<int>(idx.size()) != degree_) throw StructuralError("form index has wrong length");
  return c_[combinations(dim_, degree_).rank[m]];
}

Form Form::truncated(int order) const {
  Form out = *this;
  out.order_ = order;
  for (auto& c : out.c_) c = c.truncated(order);
  return out;
}

std::vector<double> Form::values() const {
  std::vector<double> v;
  v.reserve(c_.size());
  for (const auto& c : c_) v.push_back(c.value());
  return v;
}

double Form::max_abs() const {
  double m = 0.0;
  for (const auto& c : c_) m = std::max(m, std::abs(c.value()));
  return m;
}

void Form::align(Form& o) {
  if (dim_ != o.dim_ || degree_ != o.degree_)
    throw StructuralError(fmt::format("form shape mismatch: {}-form on R^{} vs {}-form on R^{}",
                                      degree_, dim_, o.degree_, o.dim_));
  if (order_ > o.order_) *this = truncated(o.order_);
  if (o.order_ > order_) o = o.truncated(order_);
}

Form& Form::operator+=(const Form& o) {
  Form b = o;
  align(b);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += b.c_[k];
  return *this;
}

Form& Form::operator-=(const Form& o) {
  Form b = o;
  align(b);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= b.c_[k];
  return *this;
}

Form& Form::operator*=(double s) {
  for (auto& c : c_) c *= s;
  return *this;
}

Form& Form::operator*=(const Jet& f) {
  if (f.dim() != dim_) throw StructuralError("scalar and form live on different charts");
  int order = std::min(order_, f.order());
  if (order < order_) *this = truncated(order);
  Jet g = f.order() == order ? f : f.truncated(order);
  for (auto& c : c_) c = c * g;
  return *this;
}

Form Form::operator/(const Jet& f) const {
  int order = std::min(order_, f.order());
  return truncated(order) * (1.0 / (f.order() == order ? f : f.truncated(order)));
}

Form wedge(const Form& a, const Form& b) {
  if (a.dim() != b.dim()) throw StructuralError("wedge of forms on different charts");
  int p = a.degree() + b.degree();
  if (p > a.dim()) throw StructuralError(fmt::format("wedge degree {} exceeds dimension", p));
  int order = std::min(a.budget(), b.budget());
  Form x = a.budget() == order ? a : a.truncated(order);
  Form y = b.budget() == order ? b : b.truncated(order);
  Form out(a.dim(), p, order);
  const auto& ta = combinations(a.dim(), a.degree());
  const auto& tb = combinations(a.dim(), b.degree());
  const auto& to = combinations(a.dim(), p);
  for (std::size_t i = 0; i < ta.masks.size(); ++i) {
    for (std::size_t j = 0; j < tb.masks.size(); ++j) {
      unsigned mi = ta.masks[i], mj = tb.masks[j];
      if (mi & mj) continue;
      Jet term = x[i] * y[j];
      if (merge_sign(mi, mj) < 0) term = -term;
      out[to.rank[mi | mj]] += term;
    }
  }
  return out;
}

Form wedge(std::initializer_list<Form> forms) {
  auto it = forms.begin();
  Form out = *it++;
  for (; it != forms.end(); ++it) out = wedge(out, *it);
  return out;
}

Form ext_d(const Form& a, std::string_view stage) {
  if (a.budget() < 1) throw BudgetError(std::string(stage));
  if (a.degree() + 1 > a.dim()) return Form(a.dim(), a.degree(), a.budget() - 1);
  const auto& ta = combinations(a.dim(), a.degree());
  const auto& to = combinations(a.dim(), a.degree() + 1);
  Form out(a.dim(), a.degree() + 1, a.budget() - 1);
  for (std::size_t k = 0; k < ta.masks.size(); ++k) {
    unsigned m = ta.masks[k];
    for (int i = 0; i < a.dim(); ++i) {
      if (m & (1u << i)) continue;
      Jet term = a[k].partial(i);
      if (parity_before(m, i) % 2) term = -term;
      out[to.rank[m | (1u << i)]] += term;
    }
  }
  return out;
}

Jet top_ratio(const Form& a, const Form& b) {
  if (a.degree() != a.dim() || b.degree() != b.dim() || a.dim() != b.dim())
    throw StructuralError("top_ratio needs two top-degree forms");
  double b0 = b[0].value();
  if (!(std::abs(b0) > kSingularVolume))
    throw SingularVolumeError(fmt::format("reference volume vanishes ({:.3e})", b0));
  int order = std::min(a.budget(), b.budget());
  return a[0].truncated(order) / b[0].truncated(order);
}

double top_ratio_value(const Form& a, const Form& b) {
  double b0 = b[0].value();
  if (!(std::abs(b0) > kSingularVolume))
    throw SingularVolumeError(fmt::format("reference volume vanishes ({:.3e})", b0));
  return a[0].value() / b0;
}

Form volume(const Frame& f) {
  Form v = f.at(0);
  for (std::size_t i = 1; i < f.size(); ++i) v = wedge(v, f[i]);
  return v;
}

int frame_budget(const Frame& f) {
  int b = f.at(0).budget();
  for (const auto& w : f) b = std::min(b, w.budget());
  return b;
}

Frame truncated(const Frame& f, int order) {
  Frame out;
  for (const auto& w : f) out.push_back(w.budget() == order ? w : w.truncated(order));
  return out;
}

std::array<Jet, 3> coeffs_in_coframe(const Form& beta, const Frame& f) {
  if (beta.dim() != 3 || beta.degree() != 2 || f.size() != 3)
    throw StructuralError("coeffs_in_coframe expects a 2-form and a 3D coframe");
  Form omega = volume(f);
  return {top_ratio(wedge(beta, f[0]), omega), -top_ratio(wedge(beta, f[1]), omega),
          top_ratio(wedge(beta, f[2]), omega)};
}

Form reconstruct_2form(const std::array<Jet, 3>& b, const Frame& f) {
  return b[0] * wedge(f[1], f[2]) + b[1] * wedge(f[0], f[2]) + b[2] * wedge(f[0], f[1]);
}

Jet frobenius_defect(const Form& a, const Frame& f) {
  return top_ratio(wedge(a, ext_d(a, "frobenius_defect")), volume(f));
}

std::vector<std::vector<Jet>> inverse(std::vector<std::vector<Jet>> m) {
  std::size_t n = m.size();
  int dim = m[0][0].dim();
  int order = m[0][0].order();
  for (const auto& row : m)
    for (const auto& v : row) order = std::min(order, v.order());
  for (auto& row : m)
    for (auto& v : row)
      if (v.order() != order) v = v.truncated(order);

  std::vector<std::vector<Jet>> inv(n, std::vector<Jet>(n, Jet(dim, order)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] += 1.0;

  double scale = 0.0;
  for (const auto& row : m)
    for (const auto& v : row) scale = std::max(scale, std::abs(v.value()));

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r][col].value()) > std::abs(m[piv][col].value())) piv = r;
    if (!(std::abs(m[piv][col].value()) > 1e-14 * std::max(scale, 1.0)))
      throw SingularVolumeError("coframe matrix is singular");
    std::swap(m[col], m[piv]);
    std::swap(inv[col], inv[piv]);
    Jet r = 1.0 / m[col][col];
    for (std::size_t c = 0; c < n; ++c) {
      m[col][c] = m[col][c] * r;
      inv[col][c] = inv[col][c] * r;
    }
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col) continue;
      Jet factor = m[row][col];
      if (factor.value() == 0.0 &&
          std::all_of(factor.coeffs().begin(), factor.coeffs().end(),
                      [](double v) { return v == 0.0; }))
        continue;
      for (std::size_t c = 0; c < n; ++c) {
        m[row][c] -= factor * m[col][c];
        inv[row][c] -= factor * inv[col][c];
      }
    }
  }
  return inv;
}

DualFrame dual_frame(const Frame& f) {
  int n = static_cast<int>(f.size());
  if (n != f.at(0).dim()) throw StructuralError("coframe size must equal chart dimension");
  // m[i][j] = omega^i(d/dx^j); the dual frame is its inverse transposed.
  std::vector<std::vector<Jet>> m(n);
  for (int i = 0; i < n; ++i) {
    if (f[i].degree() != 1) throw StructuralError("coframe entries must be 1-forms");
    m[i] = f[i].coeffs();
  }
  DualFrame e;
  e.dim = n;
  e.n = inverse(std::move(m));
  return e;
}

Jet directional(const DualFrame& e, int i, const Jet& f) {
  int order = std::min(e.n[0][0].order(), f.order() - 1);
  if (order < 0) throw BudgetError("directional derivative");
  Jet out(f.dim(), order);
  for (int j = 0; j < e.dim; ++j) out += e.n[j][i].truncated(order) * f.partial(j).truncated(order);
  return out;
}

std::vector<Jet> expand_in_coframe(const Form& beta, const DualFrame& e) {
  int p = beta.degree();
  const auto& t = combinations(beta.dim(), p);
  int order = std::min(beta.budget(), e.n[0][0].order());
  std::vector<Jet> out;
  if (p == 0) return {beta[0].truncated(order)};
  std::vector<std::vector<Jet>> n = e.n;
  for (auto& row : n)
    for (auto& v : row) v = v.truncated(order);
  for (std::size_t target = 0; target < t.masks.size(); ++target) {
    std::vector<int> cols = t.indices(static_cast<int>(target));
    Jet acc(beta.dim(), order);
    for (std::size_t src = 0; src < t.masks.size(); ++src) {
      std::vector<int> rows = t.indices(static_cast<int>(src));
      acc += beta[src].truncated(order) * det(n, rows, cols);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

Form assemble(const std::vector<Jet>& coeffs, int degree, const Frame& f) {
  int dim = f.at(0).dim();
  const auto& t = combinations(dim, degree);
  Form out;
  for (std::size_t k = 0; k < t.masks.size(); ++k) {
    std::vector<int> idx = t.indices(static_cast<int>(k));
    Form term = f[idx[0]];
    for (std::size_t a = 1; a < idx.size(); ++a) term = wedge(term, f[idx[a]]);
    term *= coeffs[k];
    out = k == 0 ? term : out + term;
  }
  return out;
}

}  // namespace bicontact
