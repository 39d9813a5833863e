#include "carnot/filtration.hpp"

#include <random>

namespace carnot {

std::vector<VectorQ> default_sample_points(int dim, std::uint64_t seed, int count)
{
  std::vector<VectorQ> points;
  points.push_back(VectorQ::Zero(dim));
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i) {
    VectorQ p(dim);
    for (int j = 0; j < dim; ++j) {
      const long num = static_cast<long>(rng() % 7) - 3;
      const long den = static_cast<long>(rng() % 4) + 1;
      p[j] = Rational(num, den);
    }
    points.push_back(std::move(p));
  }
  return points;
}

FilteredChart::FilteredChart(std::vector<std::string> coordinates, int depth, std::vector<PolyVectorField> frame,
                             std::vector<int> orders, std::vector<VectorQ> sample_points)
    : coordinates_(std::move(coordinates)),
      depth_(depth),
      frame_(std::move(frame)),
      orders_(std::move(orders)),
      sample_points_(std::move(sample_points))
{
  const int n = dim();
  if (n == 0)
    throw std::invalid_argument("chart needs at least one frame field");
  if (static_cast<int>(coordinates_.size()) != n)
    throw DimensionMismatch("chart needs one coordinate name per frame field");
  if (static_cast<int>(orders_.size()) != n)
    throw DimensionMismatch("chart needs one order per frame field");
  if (depth_ < 1)
    throw std::invalid_argument("depth must be at least 1");
  for (int a = 0; a < n; ++a) {
    if (orders_[static_cast<std::size_t>(a)] < 1 || orders_[static_cast<std::size_t>(a)] > depth_)
      throw std::invalid_argument("frame order " + std::to_string(orders_[static_cast<std::size_t>(a)]) +
                                  " outside 1.." + std::to_string(depth_));
    if (a > 0 && orders_[static_cast<std::size_t>(a)] < orders_[static_cast<std::size_t>(a - 1)])
      throw std::invalid_argument("frame orders must be nondecreasing");
    const auto& x = frame_[static_cast<std::size_t>(a)];
    if (x.dim() != n || !(x.layout() == layout()))
      throw DimensionMismatch("frame field " + std::to_string(a + 1) + " does not live on the chart");
  }
  if (sample_points_.empty())
    sample_points_ = default_sample_points(n);
  for (const auto& p : sample_points_)
    if (p.size() != n)
      throw DimensionMismatch("sample point dimension mismatch");
}

int FilteredChart::degree_cap() const
{
  int cap = kDefaultDegreeCap;
  for (const auto& x : frame_)
    for (const auto& c : x.components())
      cap = std::max(cap, c.degree_cap());
  return cap;
}

std::vector<int> FilteredChart::ranks() const
{
  std::vector<int> r;
  for (int i = 1; i <= depth_; ++i)
    r.push_back(static_cast<int>(std::count_if(orders_.begin(), orders_.end(), [i](int o) { return o <= i; })));
  return r;
}

VectorQ frame_coordinates_at(const FilteredChart& chart, const VectorQ& p, const VectorQ& v)
{
  if (v.size() != chart.dim())
    throw DimensionMismatch("frame_coordinates_at: vector dimension mismatch");
  auto c = solve_exact(chart.frame_matrix_at(p), v);
  if (!c)
    throw SingularFrame("frame is singular at " + to_string(p));
  return *c;
}

namespace {

std::vector<PolyVectorField> all_brackets(const FilteredChart& chart)
{
  const int n = chart.dim();
  std::vector<PolyVectorField> out(static_cast<std::size_t>(n * n));
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      PolyVectorField br = lie_bracket(chart.frame(a), chart.frame(b));
      out[static_cast<std::size_t>(b * n + a)] = -Rational(1) * br;
      out[static_cast<std::size_t>(a * n + b)] = std::move(br);
    }
    out[static_cast<std::size_t>(a * n + a)] = PolyVectorField::zero(chart.layout(), chart.degree_cap());
  }
  return out;
}

CheckReport validate_with(const FilteredChart& chart, const std::vector<PolyVectorField>& brackets)
{
  CheckReport report;
  report.note = "verified at sample points (" + std::to_string(chart.sample_points().size()) + ")";
  const int n = chart.dim();
  std::string frame_witness;
  std::string bracket_witness;
  for (std::size_t idx = 0; idx < chart.sample_points().size(); ++idx) {
    const VectorQ& p = chart.sample_points()[idx];
    const std::string where = "sample point #" + std::to_string(idx) + " " + to_string(p);
    const MatrixQ f = chart.frame_matrix_at(p);
    if (determinant_exact(f).is_zero()) {
      if (frame_witness.empty())
        frame_witness = "frame singular at " + where;
      continue;
    }
    for (int a = 0; a < n && bracket_witness.empty(); ++a) {
      for (int b = a + 1; b < n && bracket_witness.empty(); ++b) {
        const int bound = std::min(chart.order(a) + chart.order(b), chart.depth());
        const VectorQ c = *solve_exact(f, brackets[static_cast<std::size_t>(a * n + b)].evaluate(p));
        for (int k = 0; k < n; ++k) {
          if (chart.order(k) > bound && !c[k].is_zero()) {
            bracket_witness = "pair (" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ") at " + where +
                              ": [X" + std::to_string(a + 1) + ",X" + std::to_string(b + 1) + "] has component " +
                              to_string(c[k]) + " along X" + std::to_string(k + 1) + " of order " +
                              std::to_string(chart.order(k)) + " > " + std::to_string(bound);
            break;
          }
        }
      }
    }
  }
  report.add("frame_invertible", frame_witness.empty(), frame_witness);
  report.add("bracket_condition", bracket_witness.empty(), bracket_witness);
  return report;
}

// Determinant of a polynomial matrix by dynamic programming over column
// subsets; rows are consumed in order.
Polynomial poly_determinant(const std::vector<std::vector<const Polynomial*>>& m, VariableLayout layout, int cap)
{
  const std::size_t n = m.size();
  if (n == 0)
    return Polynomial::constant(layout, Rational(1), cap);
  std::vector<std::optional<Polynomial>> f(std::size_t(1) << n);
  f[0] = Polynomial::constant(layout, Rational(1), cap);
  for (std::size_t mask = 0; mask < f.size(); ++mask) {
    if (!f[mask] || f[mask]->is_zero())
      continue;
    const std::size_t row = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (row >= n)
      continue;
    for (std::size_t c = 0; c < n; ++c) {
      if (mask & (std::size_t(1) << c))
        continue;
      const Polynomial& entry = *m[row][c];
      if (entry.is_zero())
        continue;
      const int above = __builtin_popcountll(mask >> (c + 1));
      Polynomial term = *f[mask] * entry;
      if (above % 2)
        term = -term;
      auto& slot = f[mask | (std::size_t(1) << c)];
      if (slot)
        *slot += term;
      else
        slot = std::move(term);
    }
  }
  return f.back() ? *f.back() : Polynomial(layout, cap);
}

} // namespace

CheckReport validate_filtration(const FilteredChart& chart) { return validate_with(chart, all_brackets(chart)); }

struct ValidatedChart::Impl {
  FilteredChart chart;
  CheckReport report;
  std::vector<PolyVectorField> brackets;
  bool unimodular = false;
  std::vector<Polynomial> coframe;                // row-major, (F^{-1})_{a i}
  std::vector<std::vector<Polynomial>> structure; // n*n entries of length n
};

ValidatedChart ValidatedChart::validate(FilteredChart chart)
{
  auto impl = std::make_shared<Impl>(Impl{std::move(chart), {}, {}, false, {}, {}});
  const FilteredChart& c = impl->chart;
  impl->brackets = all_brackets(c);
  impl->report = validate_with(c, impl->brackets);
  if (const Check* failed = impl->report.first_failure())
    throw FiltrationError("chart fails " + failed->name + ": " + failed->witness);

  const int n = c.dim();
  const int cap = c.degree_cap();
  std::vector<std::vector<const Polynomial*>> entries(static_cast<std::size_t>(n),
                                                      std::vector<const Polynomial*>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a)
      entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] = &c.frame(a)[i];
  const Polynomial det = poly_determinant(entries, c.layout(), cap);
  if (det.is_constant() && !det.is_zero()) {
    impl->unimodular = true;
    const Rational inv_det = Rational(1) / det.constant_term();
    impl->coframe.assign(static_cast<std::size_t>(n * n), Polynomial(c.layout(), cap));
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < n; ++a) {
        // (F^{-1})_{a i} = cofactor_{i a} / det
        std::vector<std::vector<const Polynomial*>> minor;
        for (int r = 0; r < n; ++r) {
          if (r == i)
            continue;
          std::vector<const Polynomial*> row;
          for (int col = 0; col < n; ++col)
            if (col != a)
              row.push_back(entries[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]);
          minor.push_back(std::move(row));
        }
        Polynomial cof = poly_determinant(minor, c.layout(), cap) * inv_det;
        if ((i + a) % 2)
          cof = -cof;
        impl->coframe[static_cast<std::size_t>(a * n + i)] = std::move(cof);
      }
    }
  }
  ValidatedChart handle(impl);
  if (impl->unimodular) {
    impl->structure.resize(static_cast<std::size_t>(n * n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        impl->structure[static_cast<std::size_t>(a * n + b)] =
            handle.frame_coefficients(impl->brackets[static_cast<std::size_t>(a * n + b)]);
  }
  return handle;
}

const FilteredChart& ValidatedChart::chart() const { return impl_->chart; }
const CheckReport& ValidatedChart::report() const { return impl_->report; }
bool ValidatedChart::unimodular() const { return impl_->unimodular; }

const PolyVectorField& ValidatedChart::frame_bracket(int a, int b) const
{
  const int n = dim();
  if (a < 0 || b < 0 || a >= n || b >= n)
    throw std::out_of_range("frame_bracket: index out of range");
  return impl_->brackets[static_cast<std::size_t>(a * n + b)];
}

std::vector<Polynomial> ValidatedChart::frame_coefficients(const PolyVectorField& field) const
{
  if (!impl_->unimodular)
    throw SingularFrame("frame determinant is not a nonzero constant; no polynomial frame coefficients");
  const int n = dim();
  if (field.dim() != n)
    throw DimensionMismatch("frame_coefficients: field dimension mismatch");
  const VariableLayout layout = field.layout();
  std::vector<Polynomial> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    Polynomial sum(layout, chart().degree_cap());
    for (int i = 0; i < n; ++i) {
      const Polynomial& co = impl_->coframe[static_cast<std::size_t>(a * n + i)];
      if (co.is_zero() || field[i].is_zero())
        continue;
      sum += (layout.time ? co.with_time() : co) * field[i];
    }
    out.push_back(std::move(sum));
  }
  return out;
}

const std::vector<Polynomial>& ValidatedChart::structure_functions(int a, int b) const
{
  if (!impl_->unimodular)
    throw SingularFrame("frame determinant is not a nonzero constant; no polynomial structure functions");
  const int n = dim();
  if (a < 0 || b < 0 || a >= n || b >= n)
    throw std::out_of_range("structure_functions: index out of range");
  return impl_->structure[static_cast<std::size_t>(a * n + b)];
}

GradedLieAlgebra<Rational> osculating_algebra_at(const ValidatedChart& chart, const VectorQ& p)
{
  const FilteredChart& c = chart.chart();
  const int n = c.dim();
  if (p.size() != n)
    throw DimensionMismatch("osculating_algebra_at: point dimension mismatch");
  const MatrixQ f = c.frame_matrix_at(p);
  GradedLieAlgebra<Rational> alg(c.orders());
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      auto coords = solve_exact(f, chart.frame_bracket(a, b).evaluate(p));
      if (!coords)
        throw SingularFrame("frame is singular at " + to_string(p));
      VectorQ graded = VectorQ::Zero(n);
      for (int k = 0; k < n; ++k)
        if (c.order(k) == c.order(a) + c.order(b))
          graded[k] = (*coords)[k];
      if (!is_zero_vector(graded))
        alg = alg.with_bracket(a, b, graded);
    }
  }
  return alg;
}

Splitting::Splitting(ValidatedChart chart, Corrections corrections) : chart_(std::move(chart))
{
  const int n = chart_.dim();
  const VariableLayout layout = chart_.chart().layout();
  for (auto& [ab, poly] : corrections) {
    const auto [a, b] = ab;
    if (a < 0 || b < 0 || a >= n || b >= n)
      throw std::out_of_range("splitting correction index out of range");
    if (!(chart_.order(b) < chart_.order(a)))
      throw std::invalid_argument("splitting correction (" + std::to_string(a + 1) + "," + std::to_string(b + 1) +
                                  ") must map into strictly lower order");
    if (!(poly.layout() == layout))
      throw DimensionMismatch("splitting correction must be a polynomial in the chart coordinates");
    if (!poly.is_zero())
      corrections_.emplace(ab, std::move(poly));
  }

  // S is unit upper triangular in the weight-ordered basis; back substitution
  // gives the exact polynomial inverse.
  const int cap = chart_.chart().degree_cap();
  inverse_.assign(static_cast<std::size_t>(n * n), Polynomial(layout, cap));
  for (int j = 0; j < n; ++j) {
    for (int i = n - 1; i >= 0; --i) {
      Polynomial y = i == j ? Polynomial::constant(layout, Rational(1), cap) : Polynomial(layout, cap);
      for (int k = i + 1; k < n; ++k) {
        const Polynomial& below = inverse_[static_cast<std::size_t>(k * n + j)];
        if (below.is_zero())
          continue;
        auto it = corrections_.find({k, i});
        if (it != corrections_.end())
          y -= it->second * below;
      }
      inverse_[static_cast<std::size_t>(i * n + j)] = std::move(y);
    }
  }
}

Polynomial Splitting::entry(int b, int a) const
{
  const VariableLayout layout = chart_.chart().layout();
  if (a == b)
    return Polynomial::constant(layout, Rational(1));
  auto it = corrections_.find({a, b});
  return it == corrections_.end() ? Polynomial(layout) : it->second;
}

const Polynomial& Splitting::inverse_entry(int b, int a) const
{
  const int n = chart_.dim();
  return inverse_.at(static_cast<std::size_t>(b * n + a));
}

Splitting canonical_splitting(const ValidatedChart& chart) { return Splitting(chart, {}); }

} // namespace carnot
