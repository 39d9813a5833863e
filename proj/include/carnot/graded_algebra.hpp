#pragma once

#include "carnot/errors.hpp"
#include "carnot/rational.hpp"
#include "carnot/report.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace carnot {

/// Finite-dimensional graded nilpotent Lie algebra in a weight-ordered basis.
///
/// Structure constants are stored densely as c[a][b][k] with
/// [e_a, e_b] = sum_k c[a][b][k] e_k. The constructor only enforces shape and
/// weight ordering; the algebraic axioms are checked by verify_algebra, which
/// reports violations instead of throwing.
template <typename Scalar = Rational>
class GradedLieAlgebra {
public:
  GradedLieAlgebra() = default;

  GradedLieAlgebra(std::vector<int> weights, std::vector<Scalar> constants)
      : weights_(std::move(weights)), constants_(std::move(constants))
  {
    const std::size_t n = weights_.size();
    if (constants_.size() != n * n * n)
      throw DimensionMismatch("structure constants must have dim^3 entries");
    for (std::size_t a = 0; a < n; ++a) {
      if (weights_[a] <= 0)
        throw std::invalid_argument("weights must be positive");
      if (a > 0 && weights_[a] < weights_[a - 1])
        throw std::invalid_argument("weights must be nondecreasing");
    }
  }

  explicit GradedLieAlgebra(std::vector<int> weights)
      : GradedLieAlgebra(weights, std::vector<Scalar>(weights.size() * weights.size() * weights.size(), Scalar(0)))
  {
  }

  int dim() const { return static_cast<int>(weights_.size()); }
  int depth() const { return weights_.empty() ? 0 : weights_.back(); }
  const std::vector<int>& weights() const { return weights_; }
  int weight(int a) const { return weights_.at(a); }

  const Scalar& constant(int a, int b, int k) const { return constants_[index(a, b, k)]; }
  const std::vector<Scalar>& constants() const { return constants_; }

  /// Returns a copy with [e_a, e_b] = value and [e_b, e_a] = -value.
  GradedLieAlgebra with_bracket(int a, int b, const VectorX<Scalar>& value) const
  {
    check_index(a);
    check_index(b);
    if (value.size() != dim())
      throw DimensionMismatch("bracket value has wrong dimension");
    GradedLieAlgebra out = *this;
    for (int k = 0; k < dim(); ++k) {
      out.constants_[index(a, b, k)] = value[k];
      out.constants_[index(b, a, k)] = -value[k];
    }
    return out;
  }

  /// Returns a copy with one raw constant overwritten (no antisymmetrization).
  GradedLieAlgebra with_constant(int a, int b, int k, const Scalar& value) const
  {
    check_index(a);
    check_index(b);
    check_index(k);
    GradedLieAlgebra out = *this;
    out.constants_[index(a, b, k)] = value;
    return out;
  }

  template <typename Other>
  GradedLieAlgebra<Other> cast() const
  {
    std::vector<Other> c;
    c.reserve(constants_.size());
    for (const auto& x : constants_) {
      if constexpr (std::is_same_v<Scalar, Other>)
        c.push_back(x);
      else
        c.push_back(scalar_cast<Other>(x));
    }
    return GradedLieAlgebra<Other>(weights_, std::move(c));
  }

  bool operator==(const GradedLieAlgebra& other) const = default;

private:
  std::size_t index(int a, int b, int k) const
  {
    const std::size_t n = weights_.size();
    return (static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)) * n + static_cast<std::size_t>(k);
  }
  void check_index(int a) const
  {
    if (a < 0 || a >= dim())
      throw std::out_of_range("basis index out of range");
  }

  std::vector<int> weights_;
  std::vector<Scalar> constants_;
};

template <typename Scalar>
VectorX<Scalar> basis_vector(const GradedLieAlgebra<Scalar>& alg, int a)
{
  VectorX<Scalar> e = VectorX<Scalar>::Zero(alg.dim());
  e[a] = Scalar(1);
  return e;
}

template <typename Scalar>
VectorX<Scalar> bracket(const GradedLieAlgebra<Scalar>& alg, const VectorX<Scalar>& u, const VectorX<Scalar>& v)
{
  const int n = alg.dim();
  if (u.size() != n || v.size() != n)
    throw DimensionMismatch("bracket: vector dimension does not match algebra");
  VectorX<Scalar> out = VectorX<Scalar>::Zero(n);
  for (int a = 0; a < n; ++a) {
    if (is_zero(u[a]))
      continue;
    for (int b = 0; b < n; ++b) {
      if (is_zero(v[b]))
        continue;
      const Scalar uv = u[a] * v[b];
      for (int k = 0; k < n; ++k) {
        const Scalar& c = alg.constant(a, b, k);
        if (!is_zero(c))
          out[k] += uv * c;
      }
    }
  }
  return out;
}

/// One term of the Dynkin form of the Baker-Campbell-Hausdorff series:
/// coefficient times the right-nested bracket [w1,[w2,[...,wm]]] of the word,
/// where letter 0 stands for the left factor and 1 for the right factor.
struct DynkinTerm {
  std::vector<std::uint8_t> word;
  Rational coefficient;
};

/// All words of length <= max_length with their aggregated nonzero
/// coefficients. Computed once per length and cached; thread-safe.
const std::vector<DynkinTerm>& dynkin_series(int max_length);

/// Group law log(exp(u) exp(v)), exact in nilpotent algebras because every
/// bracket word longer than the depth vanishes.
template <typename Scalar>
VectorX<Scalar> bch_product(const GradedLieAlgebra<Scalar>& alg, const VectorX<Scalar>& u, const VectorX<Scalar>& v)
{
  const int n = alg.dim();
  if (u.size() != n || v.size() != n)
    throw DimensionMismatch("bch_product: vector dimension does not match algebra");
  VectorX<Scalar> out = VectorX<Scalar>::Zero(n);
  if (n == 0)
    return out;
  const VectorX<Scalar>* letters[2] = {&u, &v};
  for (const auto& term : dynkin_series(alg.depth())) {
    VectorX<Scalar> acc = *letters[term.word.back()];
    bool vanished = is_zero_vector(acc);
    for (std::size_t i = term.word.size() - 1; i-- > 0 && !vanished;) {
      acc = bracket(alg, *letters[term.word[i]], acc);
      vanished = is_zero_vector(acc);
    }
    if (!vanished)
      out += scalar_cast<Scalar>(term.coefficient) * acc;
  }
  return out;
}

template <typename Scalar>
VectorX<Scalar> group_inverse(const GradedLieAlgebra<Scalar>& alg, const VectorX<Scalar>& u)
{
  if (u.size() != alg.dim())
    throw DimensionMismatch("group_inverse: vector dimension does not match algebra");
  return -u;
}

/// delta_lambda: scales coordinate a by lambda^{w_a}.
template <typename Scalar>
VectorX<Scalar> dilate(const GradedLieAlgebra<Scalar>& alg, const Scalar& lambda, const VectorX<Scalar>& v)
{
  if (v.size() != alg.dim())
    throw DimensionMismatch("dilate: vector dimension does not match algebra");
  VectorX<Scalar> out = v;
  for (int a = 0; a < alg.dim(); ++a) {
    Scalar f(1);
    for (int i = 0; i < alg.weight(a); ++i)
      f *= lambda;
    out[a] *= f;
  }
  return out;
}

/// Exact axiom check: antisymmetry, gradedness, Jacobi on basis triples and
/// vanishing of brackets longer than the depth. Witness indices are 1-based.
CheckReport verify_algebra(const GradedLieAlgebra<Rational>& alg);

std::string describe(const GradedLieAlgebra<Rational>& alg);

} // namespace carnot
