#pragma once

#include "carnot/filtration.hpp"
#include "carnot/graded_algebra.hpp"

#include <map>
#include <optional>
#include <tuple>
#include <variant>
#include <vector>

namespace carnot {

/// Connection on the associated graded bundle, given by Christoffel
/// polynomials nabla_{d/dx_c} e_a = sum_b Gamma_{ca}^b(x) e_b.
class GradedConnection {
public:
  /// Keys are (c, a, b), 0-based.
  using Christoffels = std::map<std::tuple<int, int, int>, Polynomial>;

  GradedConnection(ValidatedChart chart, Christoffels christoffels);
  static GradedConnection flat(const ValidatedChart& chart);

  const ValidatedChart& chart() const { return chart_; }
  const Christoffels& christoffels() const { return christoffels_; }
  bool is_flat() const { return christoffels_.empty(); }

private:
  ValidatedChart chart_;
  Christoffels christoffels_;
};

/// Passes iff Gamma_{ca}^b vanishes whenever o_a != o_b. Witnesses are
/// 1-based (c,a,b).
CheckReport validate_graded_connection(const GradedConnection& conn);

/// Where the exponential chart is used and how it is integrated.
struct ChartDomain {
  double radius = 1.0;     // bound on |delta_t v| in graded-frame coordinates
  int steps = 256;         // RK4 steps on [0, 1]
  double tol = 1e-12;      // shooting tolerance in coordinates
  int max_iterations = 50; // Newton iterations for chart_log

  void check() const;
};

template <typename Scalar>
struct PairArrow {
  VectorX<Scalar> range;
  VectorX<Scalar> source;
  Scalar t;
};

template <typename Scalar>
struct OsculatingArrow {
  VectorX<Scalar> base;
  VectorX<Scalar> v;
};

/// Pair arrows for t != 0, osculating group elements at t = 0.
template <typename Scalar>
using TangentGroupoidElement = std::variant<PairArrow<Scalar>, OsculatingArrow<Scalar>>;

template <typename Scalar>
struct ChartCoordinates {
  VectorX<Scalar> x;
  VectorX<Scalar> v;
  Scalar t;
  int iterations = 0;
  double residual = 0.0;
};

/// Exponential of psi nabla psi^{-1}, integrated with fixed-step RK4. Works
/// in double, or exactly in Rational when the flow is exactly representable.
template <typename Scalar>
class ExponentialMap {
public:
  ExponentialMap(const GradedConnection& conn, const Splitting& psi, ChartDomain domain = {});

  const ValidatedChart& chart() const { return chart_; }
  const ChartDomain& domain() const { return domain_; }
  int dim() const { return n_; }

  /// Columns psi(e_a)(x) = F(x) S(x).
  MatrixX<Scalar> splitting_frame(const VectorX<Scalar>& x) const;

  /// Geodesic from x with initial tangent vector v, evaluated at time 1.
  VectorX<Scalar> exp(const VectorX<Scalar>& x, const VectorX<Scalar>& v) const;

  /// (exp_x(psi delta_t v), x, t) for t != 0 and (x, v) at t = 0. Throws
  /// DomainError when |delta_t v| exceeds the radius.
  TangentGroupoidElement<Scalar> global_chart(const VectorX<Scalar>& x, const VectorX<Scalar>& v,
                                              const Scalar& t) const;

  /// Tangent vector V with exp_x(V) = y by damped Newton from the seed.
  std::optional<VectorX<Scalar>> shoot(const VectorX<Scalar>& x, const VectorX<Scalar>& y,
                                       const VectorX<Scalar>& seed, int* iterations = nullptr,
                                       double* residual = nullptr) const;

  /// Inverse of global_chart on a pair arrow. Throws ConvergenceError or
  /// DomainError.
  ChartCoordinates<Scalar> chart_log(const PairArrow<Scalar>& g) const;

private:
  void derivative(const VectorX<Scalar>& state, VectorX<Scalar>& out) const;

  ValidatedChart chart_;
  ChartDomain domain_;
  int n_;
  int max_exponent_ = 0;
  std::vector<int> orders_;
  std::vector<CompiledPolynomial<Scalar>> b_;      // (i, a) row-major
  std::vector<CompiledPolynomial<Scalar>> db_;     // (c, i, a)
  std::vector<std::tuple<int, int, int, CompiledPolynomial<Scalar>>> gamma_;
};

/// Geodesic exponential in coordinates.
VectorX<double> exp_geodesic(const GradedConnection& conn, const Splitting& psi, const VectorX<double>& x,
                             const VectorX<double>& v, const ChartDomain& domain = {});

/// (exp_x(v), x) at t = 1.
PairArrow<double> groupoid_exp(const GradedConnection& conn, const Splitting& psi, const VectorX<double>& x,
                               const VectorX<double>& v, const ChartDomain& domain = {});

TangentGroupoidElement<double> global_chart(const GradedConnection& conn, const Splitting& psi,
                                            const VectorX<double>& x, const VectorX<double>& v, double t,
                                            const ChartDomain& domain = {});

ChartCoordinates<double> chart_log(const GradedConnection& conn, const Splitting& psi, const PairArrow<double>& g,
                                   const ChartDomain& domain = {});

/// Pair arrows compose as (z,y,t)(y,x,t) = (z,x,t). Osculating elements at a
/// common base compose as g h = bch(h.v, g.v): h acts first. Throws
/// CompositionError.
template <typename Scalar>
TangentGroupoidElement<Scalar> multiply(const ValidatedChart& chart, const TangentGroupoidElement<Scalar>& g,
                                        const TangentGroupoidElement<Scalar>& h);

/// Statistical search for two distinct (x, v) in the domain with the same
/// arrow at t = 1.
struct InjectivityReport {
  bool collision = false;
  int samples = 0;
  int undefined = 0; // samples whose geodesic broke down before time 1
  std::string message;
  VectorX<double> x, v1, v2;
};

InjectivityReport injectivity_probe(const GradedConnection& conn, const Splitting& psi, const ChartDomain& domain,
                                    int samples, std::uint64_t seed, double tolerance = 1e-9);

template <typename Scalar>
struct DeformationRow {
  Scalar t;
  VectorX<Scalar> u;
  double error = 0.0;
};

template <typename Scalar>
struct DeformationReport {
  VectorX<Scalar> limit;
  std::vector<DeformationRow<Scalar>> rows;
  std::vector<double> ratios; // e(t_{i+1}) / e(t_i)
  CheckReport checks;
};

inline constexpr const char* kProductConvention =
    "osculating product g*h = bch(h, g): the right factor acts first, matching the pair groupoid (z,y)(y,x)";

/// h_t = chart(x, w, t), g_t = chart(range h_t, v, t), u(t) = chart_log(g_t h_t).v
/// compared with the osculating product at t = 0.
template <typename Scalar>
DeformationReport<Scalar> deformation_limit_check(const GradedConnection& conn, const Splitting& psi,
                                                  const VectorX<Scalar>& x, const VectorX<Scalar>& v,
                                                  const VectorX<Scalar>& w, const std::vector<Scalar>& t_sequence,
                                                  const ChartDomain& domain = {});

} // namespace carnot
