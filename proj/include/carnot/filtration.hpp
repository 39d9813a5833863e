#pragma once

#include "carnot/graded_algebra.hpp"
#include "carnot/linalg.hpp"
#include "carnot/report.hpp"
#include "carnot/vector_field.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace carnot {

inline constexpr std::uint64_t kDefaultSampleSeed = 20240917;
inline constexpr int kDefaultRandomSamples = 16;

/// Origin followed by `count` seeded pseudorandom rational points.
std::vector<VectorQ> default_sample_points(int dim, std::uint64_t seed = kDefaultSampleSeed,
                                           int count = kDefaultRandomSamples);

/// A filtered manifold on one polynomial chart: an ordered frame X_1..X_n
/// with orders o_1 <= ... <= o_n in 1..depth. H^i is the span of the frame
/// fields of order <= i.
class FilteredChart {
public:
  FilteredChart(std::vector<std::string> coordinates, int depth, std::vector<PolyVectorField> frame,
                std::vector<int> orders, std::vector<VectorQ> sample_points = {});

  int dim() const { return static_cast<int>(frame_.size()); }
  int depth() const { return depth_; }
  VariableLayout layout() const { return VariableLayout{dim(), false}; }
  int degree_cap() const;

  const std::vector<std::string>& coordinates() const { return coordinates_; }
  const std::vector<PolyVectorField>& frame() const { return frame_; }
  const PolyVectorField& frame(int a) const { return frame_.at(static_cast<std::size_t>(a)); }
  const std::vector<int>& orders() const { return orders_; }
  int order(int a) const { return orders_.at(static_cast<std::size_t>(a)); }
  const std::vector<VectorQ>& sample_points() const { return sample_points_; }

  /// r_i = #{a : o_a <= i}, i = 1..depth.
  std::vector<int> ranks() const;

  /// Matrix whose column a is X_a(p).
  template <typename Scalar>
  MatrixX<Scalar> frame_matrix_at(const VectorX<Scalar>& p) const
  {
    if (p.size() != dim())
      throw DimensionMismatch("frame_matrix_at: point dimension mismatch");
    MatrixX<Scalar> f(dim(), dim());
    for (int a = 0; a < dim(); ++a)
      f.col(a) = frame_[static_cast<std::size_t>(a)].evaluate(p);
    return f;
  }

private:
  std::vector<std::string> coordinates_;
  int depth_;
  std::vector<PolyVectorField> frame_;
  std::vector<int> orders_;
  std::vector<VectorQ> sample_points_;
};

/// Unique c with sum_a c_a X_a(p) = v. Throws SingularFrame.
VectorQ frame_coordinates_at(const FilteredChart& chart, const VectorQ& p, const VectorQ& v);

/// Frame invertibility at the sample points and the bracket condition
/// [X_a, X_b] in span{X_c : o_c <= min(o_a + o_b, depth)}, decided pointwise.
CheckReport validate_filtration(const FilteredChart& chart);

/// Handle to a chart that passed validate_filtration. Copies share state;
/// equality is identity of the validated instance.
class ValidatedChart {
public:
  /// Throws FiltrationError carrying the first failed check.
  static ValidatedChart validate(FilteredChart chart);

  const FilteredChart& chart() const;
  const CheckReport& report() const;
  int dim() const { return chart().dim(); }
  int depth() const { return chart().depth(); }
  int order(int a) const { return chart().order(a); }
  const std::vector<int>& orders() const { return chart().orders(); }

  /// True when det of the frame matrix is a nonzero constant, so the frame
  /// has a polynomial inverse and frame coefficients of polynomial fields are
  /// polynomial.
  bool unimodular() const;

  /// Polynomial frame coefficients of a field over the chart (optionally
  /// depending on t). Throws SingularFrame when the frame is not unimodular.
  std::vector<Polynomial> frame_coefficients(const PolyVectorField& field) const;

  /// [X_a, X_b] in coordinates.
  const PolyVectorField& frame_bracket(int a, int b) const;

  /// C_ab^k with [X_a, X_b] = sum_k C_ab^k X_k, as polynomials in x.
  const std::vector<Polynomial>& structure_functions(int a, int b) const;

  bool operator==(const ValidatedChart& other) const { return impl_ == other.impl_; }

private:
  struct Impl;
  explicit ValidatedChart(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Graded nilpotent algebra at p: weights are the orders and c_ab^k is the
/// k-th frame coordinate of [X_a, X_b](p) when o_k = o_a + o_b, else 0.
GradedLieAlgebra<Rational> osculating_algebra_at(const ValidatedChart& chart, const VectorQ& p);

/// A splitting psi of the associated graded bundle, stored as frame
/// corrections psi(e_a) = X_a + sum_{o_b < o_a} s_ab(x) X_b.
class Splitting {
public:
  /// Keys are (a, b), 0-based, with o_b < o_a.
  using Corrections = std::map<std::pair<int, int>, Polynomial>;

  Splitting(ValidatedChart chart, Corrections corrections);

  const ValidatedChart& chart() const { return chart_; }
  const Corrections& corrections() const { return corrections_; }
  bool is_canonical() const { return corrections_.empty(); }

  /// Entry (b, a) of the unitriangular matrix S: column a holds the frame
  /// coefficients of psi(e_a).
  Polynomial entry(int b, int a) const;
  /// Entry (b, a) of S^{-1}, exact and polynomial.
  const Polynomial& inverse_entry(int b, int a) const;

  template <typename Scalar>
  MatrixX<Scalar> matrix_at(const VectorX<Scalar>& p) const
  {
    const int n = chart_.dim();
    MatrixX<Scalar> s = MatrixX<Scalar>::Identity(n, n);
    for (const auto& [ab, poly] : corrections_)
      s(ab.second, ab.first) = poly.evaluate(p);
    return s;
  }

private:
  ValidatedChart chart_;
  Corrections corrections_;
  std::vector<Polynomial> inverse_; // row-major n x n
};

/// The splitting with all corrections zero: psi(e_a) = X_a.
Splitting canonical_splitting(const ValidatedChart& chart);

} // namespace carnot
