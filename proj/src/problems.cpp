#include "ggs/problems.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <utility>

#include "ggs/analysis.hpp"
#include "ggs/jacobi.hpp"
#include "ggs/linalg.hpp"
#include "ggs/rng.hpp"

namespace ggs {

namespace {

constexpr int kNullSpaceRetries = 8;
constexpr double kNullSpaceMinRelNorm = 1e-8;
constexpr double kRankTolerance = 1e-12;

template <typename F>
decltype(auto) visit_matrix(const MatrixVariant& A, F&& f) {
  return std::visit(std::forward<F>(f), A);
}

Vectord random_normal(Index n, Rng& rng) {
  Vectord v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

Eigen::LLT<DenseMatrixd> factor_gram(const MatrixVariant& A) {
  const DenseMatrixd G = visit_matrix(A, [](const auto& M) { return gram_matrix(M); });
  Eigen::LLT<DenseMatrixd> llt(G);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::RankDeficient, "Gram matrix is not positive definite");
  }
  return llt;
}

Vectord multiply(const MatrixVariant& A, const Vectord& x) {
  return visit_matrix(A, [&](const auto& M) { return matvec(M, x); });
}

Vectord multiply_transpose(const MatrixVariant& A, const Vectord& r) {
  return visit_matrix(A, [&](const auto& M) { return transpose_matvec(M, r); });
}

}  // namespace

Index rows(const MatrixVariant& A) {
  return visit_matrix(A, [](const auto& M) { return static_cast<Index>(M.rows()); });
}

Index cols(const MatrixVariant& A) {
  return visit_matrix(A, [](const auto& M) { return static_cast<Index>(M.cols()); });
}

Index LsqProblem::rows() const { return ggs::rows(matrix); }
Index LsqProblem::cols() const { return ggs::cols(matrix); }

double density(const MatrixVariant& A) {
  if (const auto* sparse = std::get_if<SparseMatrixd>(&A)) {
    return static_cast<double>(sparse->nonZeros()) /
           (static_cast<double>(sparse->rows()) * static_cast<double>(sparse->cols()));
  }
  return 1.0;
}

DenseMatrixd gen_gaussian(Index m, Index n, std::uint64_t seed) {
  if (n < 1 || m < n) {
    throw Error(ErrorCode::InvalidArgument,
                "gen_gaussian needs m >= n >= 1, got " + std::to_string(m) + "x" + std::to_string(n));
  }
  Rng rng(seed);
  DenseMatrixd A(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) A(i, j) = rng.normal();
  return A;
}

LsqProblem make_consistent(MatrixVariant A, std::uint64_t seed, std::string label) {
  Rng rng(seed);
  LsqProblem problem;
  problem.density = density(A);
  problem.matrix = std::move(A);
  problem.known_solution = random_normal(problem.cols(), rng);
  problem.rhs = multiply(problem.matrix, *problem.known_solution);
  problem.consistent = true;
  problem.label = std::move(label);
  return problem;
}

Vectord null_space_component(const MatrixVariant& A, const Vectord& z) {
  const auto llt = factor_gram(A);
  Vectord r0 = z - multiply(A, llt.solve(multiply_transpose(A, z)));
  r0 -= multiply(A, llt.solve(multiply_transpose(A, r0)));
  return r0;
}

LsqProblem make_inconsistent(MatrixVariant A, std::uint64_t seed, std::string label) {
  Rng rng(seed);
  LsqProblem problem;
  problem.density = density(A);
  problem.matrix = std::move(A);
  problem.known_solution = random_normal(problem.cols(), rng);
  const Index m = problem.rows();

  for (int attempt = 0; attempt < kNullSpaceRetries; ++attempt) {
    const Vectord z = random_normal(m, rng);
    const Vectord r0 = null_space_component(problem.matrix, z);
    if (r0.norm() > kNullSpaceMinRelNorm * z.norm()) {
      problem.rhs = multiply(problem.matrix, *problem.known_solution) + r0;
      problem.consistent = false;
      problem.label = std::move(label);
      return problem;
    }
  }
  throw Error(ErrorCode::NullSpaceEmpty, "null(A^T) is trivial; cannot build an inconsistent right-hand side");
}

Vectord reference_solution(const MatrixVariant& A, const Vectord& b) {
  if (b.size() != rows(A)) throw Error(ErrorCode::DimensionMismatch, "reference_solution: rhs length");
  const auto llt = factor_gram(A);
  const Vectord atb = multiply_transpose(A, b);
  Vectord x = llt.solve(atb);
  // One step of refinement on the normal equations.
  x += llt.solve(atb - multiply_transpose(A, multiply(A, x)));
  return x;
}

Vectord reference_solution(const LsqProblem& problem) { return reference_solution(problem.matrix, problem.rhs); }

double assert_full_column_rank(const MatrixVariant& A) {
  const DenseMatrixd G = visit_matrix(A, [](const auto& M) { return gram_matrix(M); });
  const Vectord eig = jacobi_eigenvalues<double>(G, kDefaultEigenTolerance);
  const double lo = eig[0];
  const double hi = eig[eig.size() - 1];
  if (!(hi > 0) || !(lo > kRankTolerance * hi)) {
    throw Error(ErrorCode::RankDeficient, "matrix is not of full column rank");
  }
  return std::sqrt(hi / lo);
}

SolveReport<double> solve(const LsqProblem& problem, const SolverConfig& config) {
  return visit_matrix(problem.matrix, [&](const auto& M) {
    return ggs::solve(M, problem.rhs, problem.known_solution, config);
  });
}

double lambda_min_pos(const MatrixVariant& A, double tolerance) {
  return visit_matrix(A, [&](const auto& M) { return ggs::lambda_min_pos(M, tolerance); });
}

double grcd_expected_factor(const MatrixVariant& A, double lambda_min) {
  return visit_matrix(A, [&](const auto& M) { return ggs::grcd_expected_factor(M, lambda_min); });
}

double energy_error_sq(const MatrixVariant& A, const Vectord& x, const Vectord& x_ref) {
  return visit_matrix(A, [&](const auto& M) { return static_cast<double>(ggs::energy_error_sq(M, x, x_ref)); });
}

}  // namespace ggs
