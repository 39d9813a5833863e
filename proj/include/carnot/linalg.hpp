#pragma once

#include "carnot/rational.hpp"

#include <Eigen/LU>

#include <optional>

namespace carnot {

/// Exact Gauss-Jordan elimination. Returns nullopt when A is singular.
std::optional<VectorQ> solve_exact(const MatrixQ& a, const VectorQ& b);
std::optional<MatrixQ> inverse_exact(const MatrixQ& a);
Rational determinant_exact(const MatrixQ& a);

/// Dispatches to the exact solver for Rational and to partial-pivot LU for
/// floating point, where a vanishing pivot is treated as singular.
template <typename Scalar>
std::optional<VectorX<Scalar>> solve(const MatrixX<Scalar>& a, const VectorX<Scalar>& b)
{
  if constexpr (is_exact_v<Scalar>) {
    return solve_exact(a, b);
  } else {
    Eigen::PartialPivLU<MatrixX<Scalar>> lu(a);
    const auto& u = lu.matrixLU();
    Scalar scale = a.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < u.rows(); ++i)
      if (!(std::abs(u(i, i)) > 1e-14 * scale))
        return std::nullopt;
    return VectorX<Scalar>(lu.solve(b));
  }
}

/// Rank of a rational matrix by exact elimination.
int rank_exact(MatrixQ a);

} // namespace carnot
