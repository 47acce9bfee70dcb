#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <concepts>

namespace ggs {

using Index = Eigen::Index;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;

// CSC: outer index = col_start, inner index = row_index.
template <typename Scalar>
using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::ColMajor, int>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Any dense or sparse Eigen matrix.
template <typename T>
concept EigenMatrix = std::derived_from<T, Eigen::EigenBase<T>>;

using DenseMatrixd = DenseMatrix<double>;
using SparseMatrixd = SparseMatrix<double>;
using Vectord = Vector<double>;

}  // namespace ggs
