#include "carnot/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>

namespace carnot {

bool MonomialOrder::operator()(const Exponents& a, const Exponents& b) const
{
  const int da = std::accumulate(a.begin(), a.end(), 0);
  const int db = std::accumulate(b.begin(), b.end(), 0);
  if (da != db)
    return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

Polynomial::Polynomial(VariableLayout layout, int degree_cap) : layout_(layout), degree_cap_(degree_cap)
{
  if (layout.space < 0)
    throw std::invalid_argument("negative number of variables");
}

Polynomial Polynomial::constant(VariableLayout layout, const Rational& value, int degree_cap)
{
  Polynomial p(layout, degree_cap);
  p.add_term(Exponents(static_cast<std::size_t>(layout.count()), 0), value);
  return p;
}

Polynomial Polynomial::variable(VariableLayout layout, int index, int degree_cap)
{
  if (index < 0 || index >= layout.count())
    throw std::out_of_range("variable index out of range");
  Exponents e(static_cast<std::size_t>(layout.count()), 0);
  e[static_cast<std::size_t>(index)] = 1;
  return monomial(layout, std::move(e), Rational(1), degree_cap);
}

Polynomial Polynomial::monomial(VariableLayout layout, Exponents exponents, const Rational& coefficient,
                                int degree_cap)
{
  if (static_cast<int>(exponents.size()) != layout.count())
    throw DimensionMismatch("monomial exponent vector has wrong length");
  if (std::any_of(exponents.begin(), exponents.end(), [](int e) { return e < 0; }))
    throw std::invalid_argument("negative exponent");
  Polynomial p(layout, degree_cap);
  p.check_cap(exponents);
  p.add_term(exponents, coefficient);
  return p;
}

Polynomial Polynomial::time_power(VariableLayout layout, int k, int degree_cap)
{
  if (!layout.time)
    throw DimensionMismatch("layout has no time variable");
  Exponents e(static_cast<std::size_t>(layout.count()), 0);
  e[static_cast<std::size_t>(layout.time_index())] = k;
  return monomial(layout, std::move(e), Rational(1), degree_cap);
}

bool Polynomial::is_constant() const
{
  if (terms_.empty())
    return true;
  if (terms_.size() > 1)
    return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
}

Rational Polynomial::constant_term() const
{
  auto it = terms_.find(Exponents(static_cast<std::size_t>(layout_.count()), 0));
  return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::space_degree() const
{
  int d = 0;
  for (const auto& [e, c] : terms_)
    d = std::max(d, std::accumulate(e.begin(), e.begin() + layout_.space, 0));
  return d;
}

int Polynomial::degree_in(int var) const
{
  int d = 0;
  for (const auto& [e, c] : terms_)
    d = std::max(d, e.at(static_cast<std::size_t>(var)));
  return d;
}

int Polynomial::time_valuation() const
{
  if (!layout_.time)
    throw DimensionMismatch("polynomial has no time variable");
  int v = std::numeric_limits<int>::max();
  for (const auto& [e, c] : terms_)
    v = std::min(v, e[static_cast<std::size_t>(layout_.time_index())]);
  return v;
}

void Polynomial::require_same_layout(const Polynomial& other, const char* op) const
{
  if (!(layout_ == other.layout_))
    throw DimensionMismatch(std::string(op) + ": variable-set mismatch");
}

void Polynomial::check_cap(const Exponents& e) const
{
  const int d = std::accumulate(e.begin(), e.begin() + layout_.space, 0);
  if (d > degree_cap_)
    throw DegreeOverflow("polynomial degree " + std::to_string(d) + " exceeds cap " + std::to_string(degree_cap_));
}

void Polynomial::add_term(const Exponents& e, const Rational& c)
{
  if (c.is_zero())
    return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero())
      terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other)
{
  require_same_layout(other, "addition");
  degree_cap_ = std::max(degree_cap_, other.degree_cap_);
  for (const auto& [e, c] : other.terms_)
    add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other)
{
  require_same_layout(other, "subtraction");
  degree_cap_ = std::max(degree_cap_, other.degree_cap_);
  for (const auto& [e, c] : other.terms_)
    add_term(e, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b)
{
  a.require_same_layout(b, "multiplication");
  Polynomial out(a.layout_, std::max(a.degree_cap_, b.degree_cap_));
  const std::size_t nv = static_cast<std::size_t>(a.layout_.count());
  Exponents e(nv);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < nv; ++i)
        e[i] = ea[i] + eb[i];
      out.check_cap(e);
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Polynomial& Polynomial::operator*=(const Polynomial& other)
{
  *this = *this * other;
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& scalar)
{
  if (scalar.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_)
    c *= scalar;
  return *this;
}

Polynomial Polynomial::operator-() const
{
  Polynomial out = *this;
  for (auto& [e, c] : out.terms_)
    c = -c;
  return out;
}

Polynomial Polynomial::derivative(int var) const
{
  if (var < 0 || var >= layout_.count())
    throw std::out_of_range("derivative: variable index out of range");
  Polynomial out(layout_, degree_cap_);
  for (const auto& [e, c] : terms_) {
    const int k = e[static_cast<std::size_t>(var)];
    if (k == 0)
      continue;
    Exponents d = e;
    d[static_cast<std::size_t>(var)] = k - 1;
    out.add_term(d, c * k);
  }
  return out;
}

Polynomial Polynomial::substitute(int var, const Rational& value) const
{
  if (var < 0 || var >= layout_.count())
    throw std::out_of_range("substitute: variable index out of range");
  Polynomial out(layout_, degree_cap_);
  for (const auto& [e, c] : terms_) {
    Exponents d = e;
    const int k = d[static_cast<std::size_t>(var)];
    d[static_cast<std::size_t>(var)] = 0;
    out.add_term(d, c * pow(value, k));
  }
  return out;
}

Polynomial Polynomial::at_time(const Rational& t) const
{
  if (!layout_.time)
    throw DimensionMismatch("at_time: polynomial has no time variable");
  Polynomial out(VariableLayout{layout_.space, false}, degree_cap_);
  for (const auto& [e, c] : terms_) {
    Exponents d(e.begin(), e.begin() + layout_.space);
    out.add_term(d, c * pow(t, e.back()));
  }
  return out;
}

Polynomial Polynomial::time_coefficient(int k) const
{
  if (!layout_.time)
    throw DimensionMismatch("time_coefficient: polynomial has no time variable");
  Polynomial out(VariableLayout{layout_.space, false}, degree_cap_);
  for (const auto& [e, c] : terms_)
    if (e.back() == k)
      out.add_term(Exponents(e.begin(), e.begin() + layout_.space), c);
  return out;
}

Polynomial Polynomial::divide_by_time_power(int k) const
{
  if (!layout_.time)
    throw DimensionMismatch("divide_by_time_power: polynomial has no time variable");
  Polynomial out(layout_, degree_cap_);
  for (const auto& [e, c] : terms_) {
    if (e.back() < k)
      throw MembershipError("t^" + std::to_string(k) + " does not divide polynomial");
    Exponents d = e;
    d.back() -= k;
    out.add_term(d, c);
  }
  return out;
}

Polynomial Polynomial::times_time_power(int k) const
{
  if (!layout_.time)
    throw DimensionMismatch("times_time_power: polynomial has no time variable");
  Polynomial out(layout_, degree_cap_);
  for (const auto& [e, c] : terms_) {
    Exponents d = e;
    d.back() += k;
    out.add_term(d, c);
  }
  return out;
}

Polynomial Polynomial::with_time() const
{
  if (layout_.time)
    return *this;
  Polynomial out(VariableLayout{layout_.space, true}, degree_cap_);
  for (const auto& [e, c] : terms_) {
    Exponents d = e;
    d.push_back(0);
    out.add_term(d, c);
  }
  return out;
}

Polynomial Polynomial::with_degree_cap(int cap) const
{
  Polynomial out = *this;
  out.degree_cap_ = cap;
  for (const auto& [e, c] : terms_)
    out.check_cap(e);
  return out;
}

namespace {

class PolynomialParser {
public:
  PolynomialParser(std::string_view text, VariableLayout layout, const std::vector<std::string>& names, int cap)
      : text_(text), layout_(layout), names_(names), cap_(cap)
  {
  }

  Polynomial parse()
  {
    Polynomial result(layout_, cap_);
    skip_ws();
    if (at_end())
      fail("empty polynomial");
    bool first = true;
    while (true) {
      skip_ws();
      Rational sign(1);
      if (!at_end() && (peek() == '+' || peek() == '-')) {
        sign = peek() == '-' ? Rational(-1) : Rational(1);
        ++pos_;
        skip_ws();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      result += term() * sign;
      first = false;
      skip_ws();
      if (at_end())
        break;
    }
    return result;
  }

private:
  Polynomial term()
  {
    Rational coeff(1);
    Exponents e(static_cast<std::size_t>(layout_.count()), 0);
    while (true) {
      skip_ws();
      if (at_end())
        fail("expected a factor");
      const char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        coeff *= number();
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const std::size_t start = pos_;
        std::string name = identifier();
        auto it = std::find(names_.begin(), names_.end(), name);
        if (it == names_.end())
          fail("unknown variable '" + name + "'", start);
        int power = 1;
        skip_ws();
        if (!at_end() && peek() == '^') {
          ++pos_;
          skip_ws();
          power = integer();
        }
        e[static_cast<std::size_t>(it - names_.begin())] += power;
      } else {
        fail(std::string("unexpected character '") + c + "'");
      }
      skip_ws();
      if (!at_end() && peek() == '*') {
        ++pos_;
        continue;
      }
      break;
    }
    return Polynomial::monomial(layout_, e, coeff, cap_);
  }

  Rational number()
  {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
      ++pos_;
    if (!at_end() && peek() == '/') {
      ++pos_;
      if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
        fail("expected denominator digits");
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
        ++pos_;
    }
    try {
      return parse_rational(text_.substr(start, pos_ - start));
    } catch (const ParseError& err) {
      fail(err.what(), start);
    }
  }

  int integer()
  {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
      ++pos_;
    if (start == pos_)
      fail("expected integer exponent");
    if (pos_ - start > 6)
      fail("exponent too large", start);
    return std::stoi(std::string(text_.substr(start, pos_ - start)));
  }

  std::string identifier()
  {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_ws()
  {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek())))
      ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  [[noreturn]] void fail(const std::string& message) { fail(message, pos_); }
  [[noreturn]] void fail(const std::string& message, std::size_t at)
  {
    throw ParseError(message + " in polynomial '" + std::string(text_) + "'", 0, static_cast<int>(at) + 1);
  }

  std::string_view text_;
  VariableLayout layout_;
  const std::vector<std::string>& names_;
  int cap_;
  std::size_t pos_ = 0;
};

} // namespace

Polynomial parse_polynomial(std::string_view text, VariableLayout layout, const std::vector<std::string>& names,
                            int degree_cap)
{
  if (static_cast<int>(names.size()) != layout.count())
    throw DimensionMismatch("parse_polynomial: one name per variable required");
  return PolynomialParser(text, layout, names, degree_cap).parse();
}

std::string to_string(const Polynomial& p, const std::vector<std::string>& names)
{
  if (static_cast<int>(names.size()) != p.layout().count())
    throw DimensionMismatch("to_string: one name per variable required");
  if (p.is_zero())
    return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    const bool negative = c.sign() < 0;
    const Rational mag = negative ? Rational(-c) : c;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    std::vector<std::string> factors;
    const bool is_unit = mag == 1;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0)
        continue;
      factors.push_back(e[i] == 1 ? names[i] : names[i] + "^" + std::to_string(e[i]));
    }
    if (!is_unit || factors.empty())
      factors.insert(factors.begin(), to_string(mag));
    for (std::size_t i = 0; i < factors.size(); ++i)
      out += (i ? "*" : "") + factors[i];
  }
  return out;
}

} // namespace carnot
