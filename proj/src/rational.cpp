#include "carnot/rational.hpp"

#include "carnot/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

namespace carnot {

namespace {

bool all_digits(std::string_view s)
{
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

} // namespace

Rational parse_rational(std::string_view text)
{
  std::size_t begin = 0;
  while (begin < text.size() && std::isspace(static_cast<unsigned char>(text[begin])))
    ++begin;
  std::size_t end = text.size();
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1])))
    --end;
  std::string_view body = text.substr(begin, end - begin);
  if (body.empty())
    throw ParseError("empty rational literal", 0, static_cast<int>(begin) + 1);

  bool negative = false;
  std::size_t pos = 0;
  if (body[0] == '+' || body[0] == '-') {
    negative = body[0] == '-';
    pos = 1;
  }
  std::string_view digits = body.substr(pos);
  std::size_t slash = digits.find('/');
  std::string_view num = digits.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : digits.substr(slash + 1);
  if (!all_digits(num))
    throw ParseError("malformed rational literal '" + std::string(body) + "'", 0, static_cast<int>(begin + pos) + 1);
  if (!all_digits(den))
    throw ParseError("malformed denominator in '" + std::string(body) + "'", 0,
                     static_cast<int>(begin + pos + slash) + 2);
  Integer n{std::string(num)};
  Integer d{std::string(den)};
  if (d.is_zero())
    throw ParseError("zero denominator in '" + std::string(body) + "'", 0, static_cast<int>(begin + pos + slash) + 2);
  if (negative)
    n = -n;
  return Rational(n, d);
}

std::string to_string(const Rational& value)
{
  const auto num = numerator(value);
  const auto den = denominator(value);
  if (den == 1)
    return num.str();
  return num.str() + "/" + den.str();
}

std::string to_string(const VectorQ& v)
{
  std::string out = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i)
      out += ", ";
    out += to_string(v[i]);
  }
  return out + ")";
}

std::string format_double(double value)
{
  if (std::isnan(value))
    return "nan";
  if (std::isinf(value))
    return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

Rational pow(const Rational& base, int exponent)
{
  if (exponent < 0) {
    if (base.is_zero())
      throw std::domain_error("zero to a negative power");
    return pow(Rational(1) / base, -exponent);
  }
  Rational result(1);
  Rational b = base;
  while (exponent > 0) {
    if (exponent & 1)
      result *= b;
    b *= b;
    exponent >>= 1;
  }
  return result;
}

} // namespace carnot
