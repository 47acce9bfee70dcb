#pragma once

// Column-oriented kernels over dense (column-major) and CSC matrices.
//
// Every coordinate-descent selection rule and update walks a single column
// of A, so each kernel has a dense overload taking any Eigen::MatrixBase
// expression and a sparse overload that touches only the stored entries of
// the requested column.

#include <string>
#include <vector>

#include "ggs/error.hpp"
#include "ggs/types.hpp"

namespace ggs {

namespace detail {

inline void require_dims(Index got, Index expected, const char* what) {
  if (got != expected) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": expected length " + std::to_string(expected) +
                    ", got " + std::to_string(got));
  }
}

inline void require_column(Index j, Index cols) {
  if (j < 0 || j >= cols) {
    throw Error(ErrorCode::IndexOutOfRange,
                "column index " + std::to_string(j) + " outside [0, " + std::to_string(cols) + ")");
  }
}

}  // namespace detail

/// Build a CSC matrix from (row, col, value) triplets. Duplicate coordinates
/// are summed, and entries that end up exactly zero are dropped.
template <typename Scalar>
SparseMatrix<Scalar> make_sparse(Index rows, Index cols,
                                 const std::vector<Eigen::Triplet<Scalar, int>>& triplets) {
  if (rows < 1 || cols < 1) {
    throw Error(ErrorCode::InvalidArgument, "sparse matrix needs at least one row and one column");
  }
  for (const auto& t : triplets) {
    if (t.row() < 0 || t.row() >= rows || t.col() < 0 || t.col() >= cols) {
      throw Error(ErrorCode::IndexOutOfRange, "triplet (" + std::to_string(t.row()) + ", " +
                                                  std::to_string(t.col()) + ") outside " + std::to_string(rows) +
                                                  "x" + std::to_string(cols));
    }
  }
  SparseMatrix<Scalar> A(rows, cols);
  A.setFromTriplets(triplets.begin(), triplets.end());
  A.prune([](Index, Index, const Scalar& v) { return v != Scalar(0); });
  A.makeCompressed();
  return A;
}

/// Checks the CSC structural invariants: monotone column starts, strictly
/// increasing in-range row indices per column, no stored zeros.
template <typename Scalar>
bool is_valid_csc(const SparseMatrix<Scalar>& A) {
  if (!A.isCompressed() || A.rows() < 1 || A.cols() < 1) return false;
  const int* start = A.outerIndexPtr();
  const int* row = A.innerIndexPtr();
  const Scalar* val = A.valuePtr();
  if (start[0] != 0 || start[A.cols()] != A.nonZeros()) return false;
  for (Index j = 0; j < A.cols(); ++j) {
    if (start[j] > start[j + 1]) return false;
    for (int p = start[j]; p < start[j + 1]; ++p) {
      if (row[p] < 0 || row[p] >= A.rows()) return false;
      if (p > start[j] && row[p] <= row[p - 1]) return false;
      if (val[p] == Scalar(0)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// column_norms_sq

template <typename Derived>
Vector<typename Derived::Scalar> column_norms_sq(const Eigen::MatrixBase<Derived>& A) {
  return A.colwise().squaredNorm().transpose();
}

template <typename Scalar>
Vector<Scalar> column_norms_sq(const SparseMatrix<Scalar>& A) {
  Vector<Scalar> norms = Vector<Scalar>::Zero(A.cols());
  for (Index j = 0; j < A.outerSize(); ++j) {
    Scalar acc(0);
    for (typename SparseMatrix<Scalar>::InnerIterator it(A, j); it; ++it) acc += it.value() * it.value();
    norms[j] = acc;
  }
  return norms;
}

// ---------------------------------------------------------------------------
// frobenius_norm_sq: the sum of column_norms_sq, in that vector's order.

template <EigenMatrix MatrixType>
auto frobenius_norm_sq(const MatrixType& A) {
  return column_norms_sq(A).sum();
}

// ---------------------------------------------------------------------------
// matvec / transpose_matvec

template <typename Derived, typename VecDerived>
Vector<typename Derived::Scalar> matvec(const Eigen::MatrixBase<Derived>& A,
                                        const Eigen::MatrixBase<VecDerived>& x) {
  detail::require_dims(x.size(), A.cols(), "matvec");
  return A * x;
}

template <typename Scalar, typename VecDerived>
Vector<Scalar> matvec(const SparseMatrix<Scalar>& A, const Eigen::MatrixBase<VecDerived>& x) {
  detail::require_dims(x.size(), A.cols(), "matvec");
  Vector<Scalar> y = Vector<Scalar>::Zero(A.rows());
  for (Index j = 0; j < A.outerSize(); ++j) {
    const Scalar xj = x[j];
    if (xj == Scalar(0)) continue;
    for (typename SparseMatrix<Scalar>::InnerIterator it(A, j); it; ++it) y[it.row()] += it.value() * xj;
  }
  return y;
}

/// s = A^T r, entry j is the gradient component for column j.
template <typename Derived, typename VecDerived>
Vector<typename Derived::Scalar> transpose_matvec(const Eigen::MatrixBase<Derived>& A,
                                                  const Eigen::MatrixBase<VecDerived>& r) {
  detail::require_dims(r.size(), A.rows(), "transpose_matvec");
  return A.transpose() * r;
}

template <typename Scalar, typename VecDerived>
Vector<Scalar> transpose_matvec(const SparseMatrix<Scalar>& A, const Eigen::MatrixBase<VecDerived>& r) {
  detail::require_dims(r.size(), A.rows(), "transpose_matvec");
  Vector<Scalar> s(A.cols());
  for (Index j = 0; j < A.outerSize(); ++j) {
    Scalar acc(0);
    for (typename SparseMatrix<Scalar>::InnerIterator it(A, j); it; ++it) acc += it.value() * r[it.row()];
    s[j] = acc;
  }
  return s;
}

// In-place variant used by the solver loop to avoid reallocating s_k.
template <typename Derived, typename VecDerived>
void transpose_matvec_into(const Eigen::MatrixBase<Derived>& A, const Eigen::MatrixBase<VecDerived>& r,
                           Vector<typename Derived::Scalar>& s) {
  s.noalias() = A.transpose() * r;
}

template <typename Scalar, typename VecDerived>
void transpose_matvec_into(const SparseMatrix<Scalar>& A, const Eigen::MatrixBase<VecDerived>& r,
                           Vector<Scalar>& s) {
  s.resize(A.cols());
  for (Index j = 0; j < A.outerSize(); ++j) {
    Scalar acc(0);
    for (typename SparseMatrix<Scalar>::InnerIterator it(A, j); it; ++it) acc += it.value() * r[it.row()];
    s[j] = acc;
  }
}

// ---------------------------------------------------------------------------
// column_dot / axpy_column

template <typename Derived, typename VecDerived>
typename Derived::Scalar column_dot(const Eigen::MatrixBase<Derived>& A, Index j,
                                    const Eigen::MatrixBase<VecDerived>& r) {
  detail::require_column(j, A.cols());
  detail::require_dims(r.size(), A.rows(), "column_dot");
  return A.col(j).dot(r);
}

template <typename Scalar, typename VecDerived>
Scalar column_dot(const SparseMatrix<Scalar>& A, Index j, const Eigen::MatrixBase<VecDerived>& r) {
  detail::require_column(j, A.cols());
  detail::require_dims(r.size(), A.rows(), "column_dot");
  Scalar acc(0);
  for (typename SparseMatrix<Scalar>::InnerIterator it(A, j); it; ++it) acc += it.value() * r[it.row()];
  return acc;
}

/// r += alpha * A_(j)
template <typename Derived, typename VecDerived>
void axpy_column(Eigen::MatrixBase<VecDerived>& r, const Eigen::MatrixBase<Derived>& A, Index j,
                 typename Derived::Scalar alpha) {
  detail::require_column(j, A.cols());
  detail::require_dims(r.size(), A.rows(), "axpy_column");
  r.derived() += alpha * A.col(j);
}

template <typename Scalar, typename VecDerived>
void axpy_column(Eigen::MatrixBase<VecDerived>& r, const SparseMatrix<Scalar>& A, Index j, Scalar alpha) {
  detail::require_column(j, A.cols());
  detail::require_dims(r.size(), A.rows(), "axpy_column");
  for (typename SparseMatrix<Scalar>::InnerIterator it(A, j); it; ++it) r[it.row()] += alpha * it.value();
}

// ---------------------------------------------------------------------------
// gram_matrix: dense A^T A. Only meant for desk-scale n (a few hundred).

template <typename Derived>
DenseMatrix<typename Derived::Scalar> gram_matrix(const Eigen::MatrixBase<Derived>& A) {
  DenseMatrix<typename Derived::Scalar> G(A.cols(), A.cols());
  G.template triangularView<Eigen::Lower>() = A.transpose() * A;
  G.template triangularView<Eigen::StrictlyUpper>() = G.transpose();
  return G;
}

template <typename Scalar>
DenseMatrix<Scalar> gram_matrix(const SparseMatrix<Scalar>& A) {
  const SparseMatrix<Scalar> G = (A.transpose() * A).pruned();
  DenseMatrix<Scalar> dense(G);
  dense.template triangularView<Eigen::StrictlyUpper>() = dense.transpose();
  return dense;
}

// ---------------------------------------------------------------------------
// energy_error_sq: ||x - x_ref||^2 in the A^T A norm, i.e. ||A (x - x_ref)||_2^2.

template <EigenMatrix MatrixType>
typename MatrixType::Scalar energy_error_sq(const MatrixType& A, const Vector<typename MatrixType::Scalar>& x,
                                            const Vector<typename MatrixType::Scalar>& x_ref) {
  detail::require_dims(x.size(), A.cols(), "energy_error_sq");
  detail::require_dims(x_ref.size(), A.cols(), "energy_error_sq");
  const Vector<typename MatrixType::Scalar> diff = x - x_ref;
  return matvec(A, diff).squaredNorm();
}

}  // namespace ggs
