#include "carnot/linalg.hpp"

#include "carnot/errors.hpp"

namespace carnot {

namespace {

// Reduces [a | rhs] in place. Returns false if a is singular.
bool gauss_jordan(MatrixQ& a, MatrixQ& rhs)
{
  const Eigen::Index n = a.rows();
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    while (pivot < n && a(pivot, col).is_zero())
      ++pivot;
    if (pivot == n)
      return false;
    if (pivot != col) {
      a.row(pivot).swap(a.row(col));
      rhs.row(pivot).swap(rhs.row(col));
    }
    const Rational inv = Rational(1) / a(col, col);
    for (Eigen::Index j = col; j < n; ++j)
      a(col, j) *= inv;
    for (Eigen::Index j = 0; j < rhs.cols(); ++j)
      rhs(col, j) *= inv;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == col || a(r, col).is_zero())
        continue;
      const Rational f = a(r, col);
      for (Eigen::Index j = col; j < n; ++j)
        a(r, j) -= f * a(col, j);
      for (Eigen::Index j = 0; j < rhs.cols(); ++j)
        rhs(r, j) -= f * rhs(col, j);
    }
  }
  return true;
}

} // namespace

std::optional<VectorQ> solve_exact(const MatrixQ& a, const VectorQ& b)
{
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw DimensionMismatch("solve_exact: shape mismatch");
  MatrixQ work = a;
  MatrixQ rhs = b;
  if (!gauss_jordan(work, rhs))
    return std::nullopt;
  return VectorQ(rhs.col(0));
}

std::optional<MatrixQ> inverse_exact(const MatrixQ& a)
{
  if (a.rows() != a.cols())
    throw DimensionMismatch("inverse_exact: matrix is not square");
  MatrixQ work = a;
  MatrixQ rhs = MatrixQ::Identity(a.rows(), a.cols());
  if (!gauss_jordan(work, rhs))
    return std::nullopt;
  return rhs;
}

Rational determinant_exact(const MatrixQ& a)
{
  if (a.rows() != a.cols())
    throw DimensionMismatch("determinant_exact: matrix is not square");
  MatrixQ m = a;
  const Eigen::Index n = m.rows();
  Rational det(1);
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    while (pivot < n && m(pivot, col).is_zero())
      ++pivot;
    if (pivot == n)
      return Rational(0);
    if (pivot != col) {
      m.row(pivot).swap(m.row(col));
      det = -det;
    }
    det *= m(col, col);
    for (Eigen::Index r = col + 1; r < n; ++r) {
      if (m(r, col).is_zero())
        continue;
      const Rational f = m(r, col) / m(col, col);
      for (Eigen::Index j = col; j < n; ++j)
        m(r, j) -= f * m(col, j);
    }
  }
  return det;
}

int rank_exact(MatrixQ a)
{
  int rank = 0;
  const Eigen::Index rows = a.rows();
  for (Eigen::Index col = 0; col < a.cols() && rank < rows; ++col) {
    Eigen::Index pivot = rank;
    while (pivot < rows && a(pivot, col).is_zero())
      ++pivot;
    if (pivot == rows)
      continue;
    a.row(pivot).swap(a.row(rank));
    for (Eigen::Index r = rank + 1; r < rows; ++r) {
      if (a(r, col).is_zero())
        continue;
      const Rational f = a(r, col) / a(rank, col);
      for (Eigen::Index j = col; j < a.cols(); ++j)
        a(r, j) -= f * a(rank, j);
    }
    ++rank;
  }
  return rank;
}

} // namespace carnot
