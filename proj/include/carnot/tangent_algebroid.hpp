#pragma once

#include "carnot/filtration.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace carnot {

/// Section sum_a p_a(x,t) X_a of TM x R over a validated chart. Coefficients
/// are polynomials in x and t.
class HSection {
public:
  HSection(ValidatedChart chart, std::vector<Polynomial> coefficients);

  static HSection zero(const ValidatedChart& chart);
  /// t^power X_a.
  static HSection frame_field(const ValidatedChart& chart, int a, int power);

  const ValidatedChart& chart() const { return chart_; }
  int dim() const { return static_cast<int>(coefficients_.size()); }
  const std::vector<Polynomial>& coefficients() const { return coefficients_; }
  const Polynomial& operator[](int a) const { return coefficients_.at(static_cast<std::size_t>(a)); }

  bool is_zero() const;
  HSection operator+(const HSection& other) const;
  HSection operator-(const HSection& other) const;
  /// f may depend on x and t.
  friend HSection operator*(const Polynomial& f, const HSection& s);

  /// The family as a coordinate vector field with t as a parameter.
  PolyVectorField to_field() const;

  bool operator==(const HSection& other) const;

private:
  ValidatedChart chart_;
  std::vector<Polynomial> coefficients_;
};

/// Section sum_a q_a(x,t) sigma_{o_a}(X_a) of the osculating algebra bundle
/// times R.
class GradedSection {
public:
  GradedSection(ValidatedChart chart, std::vector<Polynomial> coefficients);

  static GradedSection zero(const ValidatedChart& chart);

  const ValidatedChart& chart() const { return chart_; }
  int dim() const { return static_cast<int>(coefficients_.size()); }
  const std::vector<Polynomial>& coefficients() const { return coefficients_; }
  const Polynomial& operator[](int a) const { return coefficients_.at(static_cast<std::size_t>(a)); }

  bool is_zero() const;
  /// Y|_{t=0}, still written over (x, t).
  GradedSection at_zero() const;
  /// Coefficient vector in the graded frame at (x, t).
  VectorQ value(const VectorQ& x, const Rational& t = Rational(0)) const;

  bool operator==(const GradedSection& other) const;

private:
  ValidatedChart chart_;
  std::vector<Polynomial> coefficients_;
};

/// Result of the membership test for the module of sections vanishing at
/// t = 0 to the order of each frame field.
struct Membership {
  bool holds = true;
  /// 0-based (a, k) with o_a > k and a nonzero t^k coefficient in p_a.
  std::optional<std::pair<int, int>> witness;

  explicit operator bool() const { return holds; }
  std::string describe() const;
};

/// True iff t^{o_a} divides p_a for every a; the witness is the first
/// offending (a, k) in index order with the lowest k.
Membership membership_XH(const HSection& s);

/// Sum_a p_a(x, t0) X_a. Throws DomainError for t0 = 0.
PolyVectorField ev_t(const HSection& s, const Rational& t0);

/// Graded limit at t = 0: coefficient a is the t^{o_a} coefficient of p_a.
/// Throws MembershipError when s is not in the module.
GradedSection ev0H(const HSection& s);

/// p_b = sum_a t^{o_a} q_a S_ba with S the splitting matrix.
HSection phi_psi(const Splitting& psi, const GradedSection& y);

/// The unique Y with phi_psi(psi, Y) = s. Throws MembershipError when s is
/// not in the module.
GradedSection phi_psi_inverse(const Splitting& psi, const HSection& s);

/// Matrix of delta_t^{-1} phi^{-1} psi delta_t at a point, entries
/// polynomials in t alone.
class TransitionMatrix {
public:
  TransitionMatrix(int dim, std::vector<Polynomial> entries) : dim_(dim), entries_(std::move(entries)) {}

  int dim() const { return dim_; }
  const Polynomial& operator()(int row, int col) const
  {
    return entries_.at(static_cast<std::size_t>(row * dim_ + col));
  }
  MatrixQ at(const Rational& t) const;
  bool is_identity() const;
  std::string to_string() const;

private:
  int dim_;
  std::vector<Polynomial> entries_;
};

/// Throws ChartMismatch for splittings over different charts and
/// SingularFrame when the frame degenerates at p.
TransitionMatrix transition_matrix(const Splitting& psi, const Splitting& phi, const VectorQ& p);

/// [s1, s2](x, t) = [s1_t, s2_t](x), computed in frame coefficients with the
/// structure functions of the chart. Throws MembershipError on inputs outside
/// the module and ChartMismatch across charts.
HSection algebroid_bracket(const HSection& s1, const HSection& s2);

/// Pointwise osculating bracket of graded sections: the degree o_a + o_b part
/// of sum q_a q'_b C_ab^k.
GradedSection osculating_bracket(const GradedSection& y1, const GradedSection& y2);

std::string to_string(const HSection& s);
std::string to_string(const GradedSection& y);

} // namespace carnot
