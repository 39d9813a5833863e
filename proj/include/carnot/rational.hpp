#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <string>
#include <string_view>
#include <type_traits>

namespace carnot {

/// Exact rational scalar. Expression templates are off so that the type
/// behaves like a plain value inside Eigen expressions.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorQ = VectorX<Rational>;
using MatrixQ = MatrixX<Rational>;

template <typename Scalar>
inline constexpr bool is_exact_v = std::is_same_v<Scalar, Rational>;

/// Parses "p/q", "p" or a signed variant of either. Throws ParseError.
Rational parse_rational(std::string_view text);

/// Canonical form: "p" for integers, "p/q" otherwise (q > 0, reduced).
std::string to_string(const Rational& value);

/// Shortest round-trip decimal rendering of a double.
std::string format_double(double value);

Rational pow(const Rational& base, int exponent);

inline bool is_zero(const Rational& value) { return value.is_zero(); }
inline bool is_zero(double value) { return value == 0.0; }

template <typename Scalar>
Scalar scalar_cast(const Rational& value)
{
  if constexpr (is_exact_v<Scalar>)
    return value;
  else
    return value.template convert_to<Scalar>();
}

/// Doubles are dyadic rationals, so this conversion is exact.
inline Rational to_rational(double value) { return Rational(value); }
inline const Rational& to_rational(const Rational& value) { return value; }

template <typename Scalar>
VectorQ to_rational(const VectorX<Scalar>& v)
{
  VectorQ out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out[i] = to_rational(v[i]);
  return out;
}

template <typename Scalar>
VectorX<Scalar> vector_cast(const VectorQ& v)
{
  VectorX<Scalar> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out[i] = scalar_cast<Scalar>(v[i]);
  return out;
}

/// Max-norm, promoted to double for reporting.
template <typename Scalar>
double max_abs(const VectorX<Scalar>& v)
{
  double m = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double a;
    if constexpr (is_exact_v<Scalar>)
      a = std::abs(v[i].template convert_to<double>());
    else
      a = std::abs(static_cast<double>(v[i]));
    m = std::max(m, a);
  }
  return m;
}

template <typename Scalar>
bool is_zero_vector(const VectorX<Scalar>& v)
{
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!is_zero(v[i]))
      return false;
  return true;
}

std::string to_string(const VectorQ& v);

} // namespace carnot
