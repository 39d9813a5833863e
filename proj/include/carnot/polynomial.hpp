#pragma once

#include "carnot/errors.hpp"
#include "carnot/rational.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace carnot {

inline constexpr int kDefaultDegreeCap = 8;

/// Chart coordinates x_1..x_n, optionally followed by the deformation
/// parameter t. The parameter is never differentiated by vector fields.
struct VariableLayout {
  int space = 0;
  bool time = false;

  int count() const { return space + (time ? 1 : 0); }
  int time_index() const { return space; }
  bool operator==(const VariableLayout&) const = default;
};

using Exponents = std::vector<int>;

/// Canonical term order: higher total degree first, then lexicographically
/// larger exponent vectors first.
struct MonomialOrder {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// No zero coefficients are stored. The degree cap bounds the degree in the
/// chart coordinates; t is excluded so that t^k factors in sections do not
/// count against it. Arithmetic results inherit the larger cap of the operands
/// and throw DegreeOverflow past it.
class Polynomial {
public:
  using Terms = std::map<Exponents, Rational, MonomialOrder>;

  Polynomial() = default;
  explicit Polynomial(VariableLayout layout, int degree_cap = kDefaultDegreeCap);

  static Polynomial constant(VariableLayout layout, const Rational& value, int degree_cap = kDefaultDegreeCap);
  static Polynomial variable(VariableLayout layout, int index, int degree_cap = kDefaultDegreeCap);
  static Polynomial monomial(VariableLayout layout, Exponents exponents, const Rational& coefficient,
                             int degree_cap = kDefaultDegreeCap);
  /// t^k in the given layout, which must carry a time variable.
  static Polynomial time_power(VariableLayout layout, int k, int degree_cap = kDefaultDegreeCap);

  const VariableLayout& layout() const { return layout_; }
  int degree_cap() const { return degree_cap_; }
  const Terms& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  int space_degree() const;
  int degree_in(int var) const;
  /// Smallest power of t over all terms; a huge value for the zero polynomial.
  int time_valuation() const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  Polynomial& operator*=(const Rational& scalar);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
  Polynomial operator-() const;

  Polynomial derivative(int var) const;
  /// Substitutes value for var; the variable stays in the layout.
  Polynomial substitute(int var, const Rational& value) const;
  /// Restriction to a fixed t; the result has no time variable.
  Polynomial at_time(const Rational& t) const;
  /// Coefficient of t^k as a polynomial without time variable.
  Polynomial time_coefficient(int k) const;
  /// Exact division by t^k; throws MembershipError if t^k does not divide.
  Polynomial divide_by_time_power(int k) const;
  /// Multiplication by t^k.
  Polynomial times_time_power(int k) const;
  /// Same polynomial over the layout extended by a time variable.
  Polynomial with_time() const;
  Polynomial with_degree_cap(int cap) const;

  template <typename Scalar>
  Scalar evaluate(const VectorX<Scalar>& point) const;

  bool operator==(const Polynomial& other) const { return layout_ == other.layout_ && terms_ == other.terms_; }

private:
  void require_same_layout(const Polynomial& other, const char* op) const;
  void check_cap(const Exponents& e) const;
  void add_term(const Exponents& e, const Rational& c);

  VariableLayout layout_{};
  int degree_cap_ = kDefaultDegreeCap;
  Terms terms_;
};

template <typename Scalar>
Scalar Polynomial::evaluate(const VectorX<Scalar>& point) const
{
  const int nv = layout_.count();
  if (point.size() != nv)
    throw DimensionMismatch("polynomial evaluation: point has wrong dimension");
  Scalar sum(0);
  for (const auto& [e, c] : terms_) {
    Scalar term = scalar_cast<Scalar>(c);
    for (int i = 0; i < nv; ++i)
      for (int k = 0; k < e[i]; ++k)
        term *= point[i];
    sum += term;
  }
  return sum;
}

/// Flat coefficient/exponent arrays for repeated numeric evaluation.
template <typename Scalar>
class CompiledPolynomial {
public:
  CompiledPolynomial() = default;
  explicit CompiledPolynomial(const Polynomial& p) : nvars_(p.layout().count())
  {
    for (const auto& [e, c] : p.terms()) {
      coefficients_.push_back(scalar_cast<Scalar>(c));
      exponents_.insert(exponents_.end(), e.begin(), e.end());
      for (int x : e)
        max_exponent_ = std::max(max_exponent_, x);
    }
  }

  bool is_zero() const { return coefficients_.empty(); }

  /// powers(i, k) must hold point[i]^k for k <= max_exponent().
  Scalar evaluate(const MatrixX<Scalar>& powers) const
  {
    Scalar sum(0);
    for (std::size_t t = 0; t < coefficients_.size(); ++t) {
      Scalar term = coefficients_[t];
      const int* e = exponents_.data() + t * static_cast<std::size_t>(nvars_);
      for (int i = 0; i < nvars_; ++i)
        if (e[i] != 0)
          term *= powers(i, e[i]);
      sum += term;
    }
    return sum;
  }

  int max_exponent() const { return max_exponent_; }

private:
  int nvars_ = 0;
  int max_exponent_ = 0;
  std::vector<Scalar> coefficients_;
  std::vector<int> exponents_;
};

/// Table of point[i]^k, k = 0..max_exponent.
template <typename Scalar>
MatrixX<Scalar> power_table(const VectorX<Scalar>& point, int max_exponent)
{
  MatrixX<Scalar> powers(point.size(), max_exponent + 1);
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    powers(i, 0) = Scalar(1);
    for (int k = 1; k <= max_exponent; ++k)
      powers(i, k) = powers(i, k - 1) * point[i];
  }
  return powers;
}

/// Text grammar: sums of terms `c * x1^a1 * ... * xn^an`, c an integer or
/// `p/q`, whitespace-insensitive. names has one entry per layout variable.
Polynomial parse_polynomial(std::string_view text, VariableLayout layout, const std::vector<std::string>& names,
                            int degree_cap = kDefaultDegreeCap);

/// Canonical rendering in the canonical term order; parse(to_string(p)) == p.
std::string to_string(const Polynomial& p, const std::vector<std::string>& names);

} // namespace carnot
