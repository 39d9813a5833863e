#include "carnot/vector_field.hpp"

#include <algorithm>

namespace carnot {

PolyVectorField::PolyVectorField(std::vector<Polynomial> components) : components_(std::move(components))
{
  if (components_.empty())
    return;
  layout_ = components_.front().layout();
  for (const auto& c : components_)
    if (!(c.layout() == layout_))
      throw DimensionMismatch("vector field components use different variable sets");
  if (layout_.space != dim())
    throw DimensionMismatch("vector field needs one component per chart coordinate");
}

PolyVectorField PolyVectorField::zero(VariableLayout layout, int degree_cap)
{
  return PolyVectorField(std::vector<Polynomial>(static_cast<std::size_t>(layout.space), Polynomial(layout, degree_cap)));
}

PolyVectorField PolyVectorField::coordinate(VariableLayout layout, int j, int degree_cap)
{
  std::vector<Polynomial> comps(static_cast<std::size_t>(layout.space), Polynomial(layout, degree_cap));
  comps.at(static_cast<std::size_t>(j)) = Polynomial::constant(layout, Rational(1), degree_cap);
  return PolyVectorField(std::move(comps));
}

bool PolyVectorField::is_zero() const
{
  return std::all_of(components_.begin(), components_.end(), [](const Polynomial& p) { return p.is_zero(); });
}

PolyVectorField& PolyVectorField::operator+=(const PolyVectorField& other)
{
  if (dim() != other.dim())
    throw DimensionMismatch("vector field addition: dimension mismatch");
  for (std::size_t i = 0; i < components_.size(); ++i)
    components_[i] += other.components_[i];
  return *this;
}

PolyVectorField& PolyVectorField::operator-=(const PolyVectorField& other)
{
  if (dim() != other.dim())
    throw DimensionMismatch("vector field subtraction: dimension mismatch");
  for (std::size_t i = 0; i < components_.size(); ++i)
    components_[i] -= other.components_[i];
  return *this;
}

PolyVectorField operator*(const Polynomial& f, const PolyVectorField& x)
{
  std::vector<Polynomial> comps;
  comps.reserve(x.components_.size());
  for (const auto& c : x.components_)
    comps.push_back(f * c);
  return PolyVectorField(std::move(comps));
}

PolyVectorField operator*(const Rational& s, const PolyVectorField& x)
{
  PolyVectorField out = x;
  for (auto& c : out.components_)
    c *= s;
  return out;
}

PolyVectorField PolyVectorField::at_time(const Rational& t) const
{
  std::vector<Polynomial> comps;
  for (const auto& c : components_)
    comps.push_back(c.at_time(t));
  return PolyVectorField(std::move(comps));
}

PolyVectorField PolyVectorField::with_time() const
{
  std::vector<Polynomial> comps;
  for (const auto& c : components_)
    comps.push_back(c.with_time());
  return PolyVectorField(std::move(comps));
}

VectorQ evaluate(const PolyVectorField& x, const VectorQ& point)
{
  if (point.size() != x.layout().count())
    throw DimensionMismatch("evaluate: point dimension does not match the chart");
  return x.evaluate(point);
}

Polynomial apply(const PolyVectorField& x, const Polynomial& f)
{
  if (!(x.layout() == f.layout()))
    throw DimensionMismatch("apply: variable-set mismatch");
  Polynomial out(f.layout(), std::max(f.degree_cap(), x.dim() ? x[0].degree_cap() : f.degree_cap()));
  for (int j = 0; j < x.dim(); ++j) {
    if (x[j].is_zero())
      continue;
    Polynomial d = f.derivative(j);
    if (!d.is_zero())
      out += x[j] * d;
  }
  return out;
}

PolyVectorField lie_bracket(const PolyVectorField& x, const PolyVectorField& y)
{
  if (!(x.layout() == y.layout()) || x.dim() != y.dim())
    throw DimensionMismatch("lie_bracket: variable-set mismatch");
  std::vector<Polynomial> comps;
  comps.reserve(static_cast<std::size_t>(x.dim()));
  for (int i = 0; i < x.dim(); ++i)
    comps.push_back(apply(x, y[i]) - apply(y, x[i]));
  return PolyVectorField(std::move(comps));
}

} // namespace carnot
