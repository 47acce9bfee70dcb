#pragma once

// Test problem construction: Gaussian matrices, consistent and inconsistent
// right-hand sides, and the least-squares reference solution.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "ggs/solver.hpp"
#include "ggs/types.hpp"

namespace ggs {

using MatrixVariant = std::variant<DenseMatrixd, SparseMatrixd>;

struct LsqProblem {
  MatrixVariant matrix;
  Vectord rhs;
  std::optional<Vectord> known_solution;
  bool consistent = true;
  std::string label;
  double density = 1.0;
  std::optional<double> condition_estimate;

  Index rows() const;
  Index cols() const;
};

Index rows(const MatrixVariant& A);
Index cols(const MatrixVariant& A);

/// nnz / (m n); 1 for dense storage.
double density(const MatrixVariant& A);

/// m x n matrix of i.i.d. standard normals, filled column by column from
/// Rng(seed).normal().
DenseMatrixd gen_gaussian(Index m, Index n, std::uint64_t seed);

/// x_star ~ N(0, I) from Rng(seed), b = A x_star.
LsqProblem make_consistent(MatrixVariant A, std::uint64_t seed, std::string label = {});

/// b = A x_star + r0 with r0 = z - A w the component of a random z orthogonal
/// to range(A). x_star and z come from Rng(seed), in that order; z is redrawn
/// while ||r0|| <= 1e-8 ||z||. Throws NullSpaceEmpty after the retries.
LsqProblem make_inconsistent(MatrixVariant A, std::uint64_t seed, std::string label = {});

/// z - A w with A^T A w = A^T z, i.e. the projection of z onto null(A^T).
/// One refinement pass is applied to the projection.
Vectord null_space_component(const MatrixVariant& A, const Vectord& z);

/// Solves A^T A x = A^T b through a Cholesky factorization of the Gram
/// matrix. Throws RankDeficient if the factorization breaks down.
Vectord reference_solution(const MatrixVariant& A, const Vectord& b);
Vectord reference_solution(const LsqProblem& problem);

/// sqrt(lambda_max / lambda_min) of A^T A, both from cyclic Jacobi. Throws
/// RankDeficient if lambda_min <= 1e-12 lambda_max.
double assert_full_column_rank(const MatrixVariant& A);

/// Runs a solver on a problem, visiting the dense or sparse kernel path.
SolveReport<double> solve(const LsqProblem& problem, const SolverConfig& config);

double lambda_min_pos(const MatrixVariant& A, double tolerance = 1e-10);
double grcd_expected_factor(const MatrixVariant& A, double lambda_min);
double energy_error_sq(const MatrixVariant& A, const Vectord& x, const Vectord& x_ref);

}  // namespace ggs
