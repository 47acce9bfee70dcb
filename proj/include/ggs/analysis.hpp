#pragma once

// Convergence theory of the greedy Gauss-Seidel method, evaluated numerically.
//
// With lambda = lambda_min(A^T A), the energy error e_k = ||x_k - x_star||^2_{A^T A}
// of the greedy iteration satisfies
//
//   e_1     <= (1 - lambda / (|R_0| * sum_{R_0} ||A_(j)||^2 * n))     e_0
//   e_{k+1} <= (1 - lambda / (|R_k| * sum_{R_k} ||A_(j)||^2 * (n-1))) e_k,   k >= 1
//   e_k     <= (1 - lambda / (alpha * beta * (n-1)))^{k-1} * (first factor) * e_0
//
// with alpha = max_k |R_k| and beta = max_k sum_{R_k} ||A_(j)||^2. GRCD only
// has the in-expectation factor 1 - 1/2 (1/(||A||_F^2 - min_j ||A_(j)||^2) + 1/||A||_F^2) lambda.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ggs/error.hpp"
#include "ggs/jacobi.hpp"
#include "ggs/linalg.hpp"
#include "ggs/solver.hpp"
#include "ggs/types.hpp"

namespace ggs {

inline constexpr double kDefaultEigenTolerance = 1e-10;
// Absolute slack on measured contraction ratios.
inline constexpr double kBoundSlack = 1e-9;

/// Smallest eigenvalue of A^T A via the Gram matrix and cyclic Jacobi.
/// Throws RankDeficient when it is <= tolerance * ||A||_F^2.
template <EigenMatrix MatrixType>
double lambda_min_pos(const MatrixType& A, double tolerance = kDefaultEigenTolerance) {
  const Vectord eig = jacobi_eigenvalues<double>(gram_matrix(A), tolerance);
  const double lambda = eig[0];
  const double frob_sq = frobenius_norm_sq(A);
  if (!(lambda > tolerance * frob_sq)) {
    throw Error(ErrorCode::RankDeficient, "A^T A is numerically singular (lambda_min = " +
                                              std::to_string(lambda) + ")");
  }
  return lambda;
}

/// Contraction factor for the first greedy step.
double ggs_first_step_factor(double lambda_min, Index n, Index r0_size, double r0_norm_sum);

/// Contraction factor for greedy steps k >= 1. NotApplicable for n = 1.
double ggs_per_step_factor(double lambda_min, Index n, Index rk_size, double rk_norm_sum);

/// per_step_worst^(k-1) * first_factor * initial_energy_error_sq, k >= 1.
double ggs_cumulative_bound(double first_factor, double per_step_worst, std::int64_t k,
                            double initial_energy_error_sq);

/// Expected per-step factor of GRCD in terms of ||A||_F^2 and the smallest
/// squared column norm. NotApplicable for n = 1.
double grcd_expected_factor(double frob_sq, double min_col_norm_sq, Index n, double lambda_min);

template <EigenMatrix MatrixType>
double grcd_expected_factor(const MatrixType& A, double lambda_min) {
  const Vectord norms = column_norms_sq(A);
  return grcd_expected_factor(norms.sum(), norms.minCoeff(), A.cols(), lambda_min);
}

/// The three k >= 1 factors bracketing the measured one: best case
/// (alpha = 1, beta = min column norm), measured (alpha, beta from a trace),
/// worst case (alpha = n, beta = ||A||_F^2).
struct FactorChain {
  double best = 0;
  double measured = 0;
  double worst = 0;
};

FactorChain factor_chain(double lambda_min, Index n, Index alpha, double beta, double min_col_norm_sq,
                         double frob_sq);

enum class ViolationKind { PerStep, Cumulative };

struct BoundViolation {
  std::int64_t iteration = 0;  // k of the pair (k, k+1), or k for cumulative
  ViolationKind kind = ViolationKind::PerStep;
  double measured_ratio = 0;
  double bound = 0;
};

struct BoundReport {
  double lambda_min = 0;
  Index n = 0;
  Index alpha = 0;
  double beta = 0;
  double first_step_factor = 0;
  std::vector<double> per_step_factors;  // one per step; entry 0 is the first-step factor
  std::vector<double> measured_ratios;   // e_{k+1} / e_k
  double per_step_worst = 0;             // 1 - lambda / (alpha beta (n-1))
  double cumulative_factor = 0;          // bound on e_K / e_0 at the last recorded iterate
  std::optional<double> grcd_expected_factor;
  std::vector<BoundViolation> violations;
};

/// Checks every consecutive pair of a trace against the per-step bounds and
/// every iterate against the cumulative envelope, each with kBoundSlack.
/// Throws MissingEnergyError if a record lacks the energy error.
BoundReport verify_trace(const std::vector<StepRecord<double>>& trace, double lambda_min, Index n);

/// GRCD contracts only in expectation, so its traces are judged in
/// aggregate: the mean of all measured ratios e_{k+1} / e_k (steps with
/// e_k > 0) over at least kMinGrcdRuns runs must not exceed the expected
/// factor by more than three standard errors.
inline constexpr std::size_t kMinGrcdRuns = 50;

struct GrcdAggregate {
  std::size_t runs = 0;
  std::size_t steps = 0;
  double mean_ratio = 0;
  double standard_error = 0;
  double expected_factor = 0;
  bool within_bound = false;
};

GrcdAggregate check_grcd_aggregate(const std::vector<std::vector<StepRecord<double>>>& traces,
                                   double expected_factor);

/// "key: value" lines.
std::string to_text(const BoundReport& report);

}  // namespace ggs
