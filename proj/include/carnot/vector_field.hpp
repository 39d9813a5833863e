#pragma once

#include "carnot/polynomial.hpp"

#include <vector>

namespace carnot {

/// Vector field sum_i X^i d/dx_i with polynomial coefficients. Coefficients
/// may depend on t as a parameter; derivatives are taken in x only.
class PolyVectorField {
public:
  PolyVectorField() = default;
  explicit PolyVectorField(std::vector<Polynomial> components);

  static PolyVectorField zero(VariableLayout layout, int degree_cap = kDefaultDegreeCap);
  /// The coordinate field d/dx_j.
  static PolyVectorField coordinate(VariableLayout layout, int j, int degree_cap = kDefaultDegreeCap);

  int dim() const { return static_cast<int>(components_.size()); }
  const VariableLayout& layout() const { return layout_; }
  const std::vector<Polynomial>& components() const { return components_; }
  const Polynomial& operator[](int i) const { return components_.at(static_cast<std::size_t>(i)); }

  bool is_zero() const;

  PolyVectorField& operator+=(const PolyVectorField& other);
  PolyVectorField& operator-=(const PolyVectorField& other);
  friend PolyVectorField operator+(PolyVectorField a, const PolyVectorField& b) { return a += b; }
  friend PolyVectorField operator-(PolyVectorField a, const PolyVectorField& b) { return a -= b; }
  friend PolyVectorField operator*(const Polynomial& f, const PolyVectorField& x);
  friend PolyVectorField operator*(const Rational& s, const PolyVectorField& x);

  PolyVectorField at_time(const Rational& t) const;
  PolyVectorField with_time() const;

  template <typename Scalar>
  VectorX<Scalar> evaluate(const VectorX<Scalar>& point) const
  {
    VectorX<Scalar> out(dim());
    for (int i = 0; i < dim(); ++i)
      out[i] = components_[static_cast<std::size_t>(i)].evaluate(point);
    return out;
  }

  bool operator==(const PolyVectorField& other) const = default;

private:
  VariableLayout layout_{};
  std::vector<Polynomial> components_;
};

/// Exact value at a point; the point has one coordinate per layout variable.
VectorQ evaluate(const PolyVectorField& x, const VectorQ& point);

/// Directional derivative sum_j X^j df/dx_j.
Polynomial apply(const PolyVectorField& x, const Polynomial& f);

/// [X, Y]^i = sum_j (X^j d_j Y^i - Y^j d_j X^i).
PolyVectorField lie_bracket(const PolyVectorField& x, const PolyVectorField& y);

} // namespace carnot
