#include "carnot/tangent_algebroid.hpp"

#include <algorithm>
#include <sstream>

namespace carnot {

namespace {

VariableLayout section_layout(const ValidatedChart& chart) { return VariableLayout{chart.dim(), true}; }

void check_coefficients(const ValidatedChart& chart, const std::vector<Polynomial>& coefficients)
{
  if (static_cast<int>(coefficients.size()) != chart.dim())
    throw DimensionMismatch("section needs one coefficient per frame field");
  for (const auto& c : coefficients)
    if (!(c.layout() == section_layout(chart)))
      throw DimensionMismatch("section coefficients must be polynomials in the chart coordinates and t");
}

void require_same_chart(const ValidatedChart& a, const ValidatedChart& b, const char* op)
{
  if (!(a == b))
    throw ChartMismatch(std::string(op) + ": operands live on different charts");
}

std::vector<std::string> section_names(const ValidatedChart& chart)
{
  std::vector<std::string> names = chart.chart().coordinates();
  names.push_back("t");
  return names;
}

void require_member(const HSection& s, const char* op)
{
  const Membership m = membership_XH(s);
  if (!m)
    throw MembershipError(std::string(op) + ": section is not in the module: " + m.describe());
}

} // namespace

HSection::HSection(ValidatedChart chart, std::vector<Polynomial> coefficients)
    : chart_(std::move(chart)), coefficients_(std::move(coefficients))
{
  check_coefficients(chart_, coefficients_);
}

HSection HSection::zero(const ValidatedChart& chart)
{
  return HSection(chart, std::vector<Polynomial>(static_cast<std::size_t>(chart.dim()),
                                                 Polynomial(section_layout(chart), chart.chart().degree_cap())));
}

HSection HSection::frame_field(const ValidatedChart& chart, int a, int power)
{
  HSection s = zero(chart);
  s.coefficients_.at(static_cast<std::size_t>(a)) =
      Polynomial::time_power(section_layout(chart), power, chart.chart().degree_cap());
  return s;
}

bool HSection::is_zero() const
{
  return std::all_of(coefficients_.begin(), coefficients_.end(), [](const Polynomial& p) { return p.is_zero(); });
}

HSection HSection::operator+(const HSection& other) const
{
  require_same_chart(chart_, other.chart_, "section sum");
  HSection out = *this;
  for (std::size_t a = 0; a < coefficients_.size(); ++a)
    out.coefficients_[a] += other.coefficients_[a];
  return out;
}

HSection HSection::operator-(const HSection& other) const
{
  require_same_chart(chart_, other.chart_, "section difference");
  HSection out = *this;
  for (std::size_t a = 0; a < coefficients_.size(); ++a)
    out.coefficients_[a] -= other.coefficients_[a];
  return out;
}

HSection operator*(const Polynomial& f, const HSection& s)
{
  HSection out = s;
  for (auto& c : out.coefficients_)
    c = f * c;
  return out;
}

PolyVectorField HSection::to_field() const
{
  const VariableLayout layout = section_layout(chart_);
  const int cap = chart_.chart().degree_cap();
  PolyVectorField out = PolyVectorField::zero(layout, cap);
  for (int a = 0; a < dim(); ++a)
    if (!coefficients_[static_cast<std::size_t>(a)].is_zero())
      out += coefficients_[static_cast<std::size_t>(a)] * chart_.chart().frame(a).with_time();
  return out;
}

bool HSection::operator==(const HSection& other) const
{
  return chart_ == other.chart_ && coefficients_ == other.coefficients_;
}

GradedSection::GradedSection(ValidatedChart chart, std::vector<Polynomial> coefficients)
    : chart_(std::move(chart)), coefficients_(std::move(coefficients))
{
  check_coefficients(chart_, coefficients_);
}

GradedSection GradedSection::zero(const ValidatedChart& chart)
{
  return GradedSection(chart, std::vector<Polynomial>(static_cast<std::size_t>(chart.dim()),
                                                      Polynomial(section_layout(chart), chart.chart().degree_cap())));
}

bool GradedSection::is_zero() const
{
  return std::all_of(coefficients_.begin(), coefficients_.end(), [](const Polynomial& p) { return p.is_zero(); });
}

GradedSection GradedSection::at_zero() const
{
  GradedSection out = *this;
  for (auto& c : out.coefficients_)
    c = c.time_coefficient(0).with_time();
  return out;
}

VectorQ GradedSection::value(const VectorQ& x, const Rational& t) const
{
  if (x.size() != dim())
    throw DimensionMismatch("graded section value: point dimension mismatch");
  VectorQ xt(dim() + 1);
  xt.head(dim()) = x;
  xt[dim()] = t;
  VectorQ out(dim());
  for (int a = 0; a < dim(); ++a)
    out[a] = coefficients_[static_cast<std::size_t>(a)].evaluate(xt);
  return out;
}

bool GradedSection::operator==(const GradedSection& other) const
{
  return chart_ == other.chart_ && coefficients_ == other.coefficients_;
}

std::string Membership::describe() const
{
  if (holds || !witness)
    return "member";
  return "(a,k)=(" + std::to_string(witness->first + 1) + "," + std::to_string(witness->second) +
         "): coefficient of X" + std::to_string(witness->first + 1) + " has a nonzero t^" +
         std::to_string(witness->second) + " term";
}

Membership membership_XH(const HSection& s)
{
  for (int a = 0; a < s.dim(); ++a) {
    const int v = s[a].time_valuation();
    if (v < s.chart().order(a))
      return Membership{false, std::make_pair(a, v)};
  }
  return Membership{};
}

PolyVectorField ev_t(const HSection& s, const Rational& t0)
{
  if (t0.is_zero())
    throw DomainError("ev_t needs t != 0; use ev0H at t = 0");
  const FilteredChart& chart = s.chart().chart();
  PolyVectorField out = PolyVectorField::zero(chart.layout(), chart.degree_cap());
  for (int a = 0; a < s.dim(); ++a) {
    const Polynomial c = s[a].at_time(t0);
    if (!c.is_zero())
      out += c * chart.frame(a);
  }
  return out;
}

GradedSection ev0H(const HSection& s)
{
  require_member(s, "ev0H");
  std::vector<Polynomial> q;
  for (int a = 0; a < s.dim(); ++a)
    q.push_back(s[a].time_coefficient(s.chart().order(a)).with_time());
  return GradedSection(s.chart(), std::move(q));
}

HSection phi_psi(const Splitting& psi, const GradedSection& y)
{
  require_same_chart(psi.chart(), y.chart(), "phi_psi");
  const ValidatedChart& chart = psi.chart();
  HSection out = HSection::zero(chart);
  std::vector<Polynomial> p = out.coefficients();
  for (int a = 0; a < y.dim(); ++a) {
    if (y[a].is_zero())
      continue;
    const Polynomial scaled = y[a].times_time_power(chart.order(a));
    p[static_cast<std::size_t>(a)] += scaled;
    for (const auto& [ab, s] : psi.corrections())
      if (ab.first == a)
        p[static_cast<std::size_t>(ab.second)] += s.with_time() * scaled;
  }
  return HSection(chart, std::move(p));
}

GradedSection phi_psi_inverse(const Splitting& psi, const HSection& s)
{
  require_same_chart(psi.chart(), s.chart(), "phi_psi_inverse");
  require_member(s, "phi_psi_inverse");
  const ValidatedChart& chart = psi.chart();
  const int n = chart.dim();
  std::vector<Polynomial> q;
  for (int a = 0; a < n; ++a) {
    Polynomial sum(section_layout(chart), chart.chart().degree_cap());
    for (int b = 0; b < n; ++b) {
      const Polynomial& inv = psi.inverse_entry(a, b);
      if (!inv.is_zero() && !s[b].is_zero())
        sum += inv.with_time() * s[b];
    }
    q.push_back(sum.divide_by_time_power(chart.order(a)));
  }
  return GradedSection(chart, std::move(q));
}

MatrixQ TransitionMatrix::at(const Rational& t) const
{
  MatrixQ m(dim_, dim_);
  VectorQ tv(1);
  tv[0] = t;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      m(i, j) = (*this)(i, j).evaluate(tv);
  return m;
}

bool TransitionMatrix::is_identity() const
{
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      const Polynomial& e = (*this)(i, j);
      if (i == j ? !(e.is_constant() && e.constant_term() == 1) : !e.is_zero())
        return false;
    }
  }
  return true;
}

std::string TransitionMatrix::to_string() const
{
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < dim_; ++i) {
    os << (i ? ", [" : "[");
    for (int j = 0; j < dim_; ++j)
      os << (j ? ", " : "") << carnot::to_string((*this)(i, j), {"t"});
    os << ']';
  }
  os << ']';
  return os.str();
}

TransitionMatrix transition_matrix(const Splitting& psi, const Splitting& phi, const VectorQ& p)
{
  require_same_chart(psi.chart(), phi.chart(), "transition_matrix");
  const ValidatedChart& chart = psi.chart();
  const int n = chart.dim();
  if (p.size() != n)
    throw DimensionMismatch("transition_matrix: point dimension mismatch");
  if (determinant_exact(chart.chart().frame_matrix_at(p)).is_zero())
    throw SingularFrame("frame is singular at " + to_string(p));
  const MatrixQ m = *inverse_exact(phi.matrix_at(p)) * psi.matrix_at(p);
  const VariableLayout tl{0, true};
  std::vector<Polynomial> entries;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      // t^{-o_j} m_jk t^{o_k}; m_jk vanishes unless o_j < o_k or j = k
      const Polynomial scaled = Polynomial::constant(tl, m(j, k)).times_time_power(chart.order(k));
      entries.push_back(scaled.divide_by_time_power(chart.order(j)));
    }
  }
  return TransitionMatrix(n, std::move(entries));
}

HSection algebroid_bracket(const HSection& s1, const HSection& s2)
{
  require_same_chart(s1.chart(), s2.chart(), "algebroid_bracket");
  require_member(s1, "algebroid_bracket");
  require_member(s2, "algebroid_bracket");
  const ValidatedChart& chart = s1.chart();
  const int n = chart.dim();
  std::vector<PolyVectorField> frame;
  for (int a = 0; a < n; ++a)
    frame.push_back(chart.chart().frame(a).with_time());

  std::vector<Polynomial> out = HSection::zero(chart).coefficients();
  for (int a = 0; a < n; ++a) {
    const Polynomial& pa = s1[a];
    const Polynomial& qa = s2[a];
    for (int b = 0; b < n; ++b) {
      const Polynomial& qb = s2[b];
      // p_a X_a(q_b) X_b - q_a X_a(p_b) X_b
      if (!pa.is_zero() && !qb.is_zero())
        out[static_cast<std::size_t>(b)] += pa * apply(frame[static_cast<std::size_t>(a)], qb);
      if (!qa.is_zero() && !s1[b].is_zero())
        out[static_cast<std::size_t>(b)] -= qa * apply(frame[static_cast<std::size_t>(a)], s1[b]);
      if (a == b || pa.is_zero() || qb.is_zero())
        continue;
      const Polynomial pq = pa * qb;
      const auto& c = chart.structure_functions(a, b);
      for (int k = 0; k < n; ++k)
        if (!c[static_cast<std::size_t>(k)].is_zero())
          out[static_cast<std::size_t>(k)] += pq * c[static_cast<std::size_t>(k)].with_time();
    }
  }
  return HSection(chart, std::move(out));
}

GradedSection osculating_bracket(const GradedSection& y1, const GradedSection& y2)
{
  require_same_chart(y1.chart(), y2.chart(), "osculating_bracket");
  const ValidatedChart& chart = y1.chart();
  const int n = chart.dim();
  std::vector<Polynomial> out = GradedSection::zero(chart).coefficients();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b || y1[a].is_zero() || y2[b].is_zero())
        continue;
      const auto& c = chart.structure_functions(a, b);
      const Polynomial prod = y1[a] * y2[b];
      for (int k = 0; k < n; ++k)
        if (chart.order(k) == chart.order(a) + chart.order(b) && !c[static_cast<std::size_t>(k)].is_zero())
          out[static_cast<std::size_t>(k)] += prod * c[static_cast<std::size_t>(k)].with_time();
    }
  }
  return GradedSection(chart, std::move(out));
}

namespace {

std::string render(const ValidatedChart& chart, const std::vector<Polynomial>& coefficients, const char* prefix)
{
  const auto names = section_names(chart);
  std::string out;
  for (std::size_t a = 0; a < coefficients.size(); ++a) {
    if (coefficients[a].is_zero())
      continue;
    if (!out.empty())
      out += " + ";
    out += "(" + to_string(coefficients[a], names) + ")*" + prefix + std::to_string(a + 1);
  }
  return out.empty() ? "0" : out;
}

} // namespace

std::string to_string(const HSection& s) { return render(s.chart(), s.coefficients(), "X"); }
std::string to_string(const GradedSection& y) { return render(y.chart(), y.coefficients(), "e"); }

} // namespace carnot
