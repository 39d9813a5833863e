#pragma once

// Shared fixtures and independent oracles for the test suites.

#include "carnot/manifest.hpp"
#include "carnot/sampling.hpp"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace test {

using namespace carnot;

inline std::string fixture(const std::string& name) { return std::string(CARNOT_FIXTURE_DIR) + "/" + name; }

inline ValidatedChart bundled_chart(const std::string& name)
{
  return ValidatedChart::validate(bundled_manifest(name).require_chart());
}

// Same bundled chart with a larger polynomial degree cap.
inline ValidatedChart bundled_chart(const std::string& name, int degree_cap)
{
  nlohmann::json j = nlohmann::json::parse(bundled_manifest_text(name));
  j["chart"]["degree_cap"] = degree_cap;
  return ValidatedChart::validate(parse_manifest(j.dump()).require_chart());
}

inline VectorQ vq(std::initializer_list<Rational> values)
{
  VectorQ v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const auto& x : values)
    v[i++] = x;
  return v;
}

inline VectorX<double> vd(std::initializer_list<double> values)
{
  VectorX<double> v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values)
    v[i++] = x;
  return v;
}

inline Polynomial poly(const std::string& text, int n, bool time = false)
{
  static const std::vector<std::string> names{"x", "y", "z", "w"};
  std::vector<std::string> vars(names.begin(), names.begin() + n);
  if (time)
    vars.push_back("t");
  return parse_polynomial(text, VariableLayout{n, time}, vars);
}

// exp and log of nilpotent rational matrices, by their finite series.
inline MatrixQ nil_exp(const MatrixQ& n)
{
  MatrixQ out = MatrixQ::Identity(n.rows(), n.cols());
  MatrixQ term = out;
  for (int k = 1; k <= n.rows(); ++k) {
    term = MatrixQ(term * n) / Rational(k);
    out += term;
  }
  return out;
}

inline MatrixQ nil_log(const MatrixQ& u)
{
  const MatrixQ m = u - MatrixQ::Identity(u.rows(), u.cols());
  MatrixQ out = MatrixQ::Zero(u.rows(), u.cols());
  MatrixQ power = m;
  for (int k = 1; k <= u.rows(); ++k) {
    out += power * Rational(k % 2 ? 1 : -1, k);
    power = MatrixQ(power * m);
  }
  return out;
}

// Strictly upper-triangular m x m matrices with basis E_ij ordered by j - i,
// graded by j - i. Faithful by construction.
struct UpperTriangular {
  int m;
  std::vector<std::pair<int, int>> basis;
  GradedLieAlgebra<Rational> algebra;

  explicit UpperTriangular(int size) : m(size)
  {
    std::vector<int> weights;
    for (int k = 1; k < m; ++k)
      for (int i = 0; i + k < m; ++i) {
        basis.emplace_back(i, i + k);
        weights.push_back(k);
      }
    algebra = GradedLieAlgebra<Rational>(weights);
    const int d = static_cast<int>(basis.size());
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b) {
        const MatrixQ c = matrix(basis_vector(algebra, a)) * matrix(basis_vector(algebra, b)) -
                          matrix(basis_vector(algebra, b)) * matrix(basis_vector(algebra, a));
        algebra = algebra.with_bracket(a, b, vector(c));
      }
  }

  MatrixQ matrix(const VectorQ& v) const
  {
    MatrixQ out = MatrixQ::Zero(m, m);
    for (std::size_t a = 0; a < basis.size(); ++a)
      out(basis[a].first, basis[a].second) = v[static_cast<Eigen::Index>(a)];
    return out;
  }

  VectorQ vector(const MatrixQ& x) const
  {
    VectorQ out(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t a = 0; a < basis.size(); ++a)
      out[static_cast<Eigen::Index>(a)] = x(basis[a].first, basis[a].second);
    return out;
  }

  VectorQ bch(const VectorQ& u, const VectorQ& v) const
  {
    return vector(nil_log(nil_exp(matrix(u)) * nil_exp(matrix(v))));
  }
};

// Engel algebra in 4x4 matrices: e1 = E12 + E23 + E34, e2 = E34, e3 = E24,
// e4 = E14.
struct EngelMatrices {
  static MatrixQ matrix(const VectorQ& v)
  {
    MatrixQ out = MatrixQ::Zero(4, 4);
    out(0, 1) = v[0];
    out(1, 2) = v[0];
    out(2, 3) = v[0] + v[1];
    out(1, 3) = v[2];
    out(0, 3) = v[3];
    return out;
  }

  static VectorQ vector(const MatrixQ& x) { return vq({x(0, 1), x(2, 3) - x(0, 1), x(1, 3), x(0, 3)}); }

  static VectorQ bch(const VectorQ& u, const VectorQ& v)
  {
    return vector(nil_log(nil_exp(matrix(u)) * nil_exp(matrix(v))));
  }
};

// Time-1 flow of a X1 + b X2 + c X3 + d X4 on the engel4 chart, integrated
// by hand: x' = a, y' = b, z' = b x + c, w' = b x^2 / 2 + c x + d.
inline VectorQ engel_flow(const VectorQ& p, const VectorQ& coeffs)
{
  const Rational &x0 = p[0], &a = coeffs[0], &b = coeffs[1], &c = coeffs[2], &d = coeffs[3];
  return vq({x0 + a, p[1] + b, p[2] + b * x0 + b * a / 2 + c,
             p[3] + b * (x0 * x0 + a * x0 + a * a / 3) / 2 + c * (x0 + a / 2) + d});
}

} // namespace test
