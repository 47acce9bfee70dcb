#pragma once

// Coordinate-descent least-squares solvers sharing one iteration loop.
//
// Each iteration recomputes s_k = A^T r_k from the incrementally maintained
// residual, applies the configured selection rule and then performs the
// exact line search along e_{j_k}:
//
//   alpha = A_(j)^T r_k / ||A_(j)||^2,   x_{k+1} = x_k + alpha e_j,
//   r_{k+1} = r_k - alpha A_(j).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "ggs/error.hpp"
#include "ggs/linalg.hpp"
#include "ggs/rng.hpp"
#include "ggs/selection.hpp"
#include "ggs/types.hpp"

namespace ggs {

enum class Method { GGS, GGS_RANDOMIZED, GRCD, RGS };

std::string_view to_string(Method method);
/// Accepts "ggs", "ggs-randomized" (or "ggs_randomized", "rggs"), "grcd", "rgs"; case-insensitive.
Method parse_method(std::string_view name);

enum class StopReason { RES_REACHED, GRADIENT_REACHED, ITERATION_CAP };

std::string_view to_string(StopReason reason);

struct SolverConfig {
  Method method = Method::GGS;
  std::int64_t max_iterations = 200000;
  double res_tolerance = 1e-6;
  double tie_tolerance_rel = 1e-12;
  std::uint64_t seed = 0;
  bool record_trace = false;

  void validate() const;
};

/// One observation of the iterate x_k. For every k that performed a step the
/// selection fields are filled; the final record of a trace describes the
/// iterate where the loop stopped and has no chosen index.
template <typename Scalar>
struct StepRecord {
  std::int64_t iteration = 0;
  std::optional<Index> chosen_index;
  Index candidate_set_size = 0;  // |R_k| for GGS variants, |V_k| for GRCD, 1 for RGS
  Scalar candidate_norm_sum = 0;  // sum of ||A_(j)||^2 over the candidate set
  std::optional<Scalar> energy_error_sq;  // ||A (x_k - x_star)||^2, when x_star is known
  Scalar residual_gradient_norm_sq = 0;   // ||A^T r_k||^2
  std::optional<Scalar> res;              // ||x_k - x_star||^2 / ||x_star||^2
  std::optional<Scalar> delta;            // GRCD threshold delta_k
  // After the step: A_(j)^T r_{k+1} and ||r_{k+1}||, for the orthogonality check.
  Scalar post_step_column_dot = 0;
  Scalar post_step_residual_norm = 0;
};

template <typename Scalar>
struct SolveReport {
  Vector<Scalar> solution;
  Vector<Scalar> residual;  // incrementally maintained b - A x
  std::int64_t iterations = 0;
  StopReason stop_reason = StopReason::ITERATION_CAP;
  double elapsed_seconds = 0;
  std::vector<StepRecord<Scalar>> trace;
  // RES when x_star is known, otherwise ||A^T r||^2 / ||A^T b||^2.
  Scalar final_res = 0;
  Scalar final_gradient_norm_sq = 0;
};

/// Exact line search along column j. Returns the applied step alpha.
template <typename MatrixType, typename Scalar>
Scalar step(Vector<Scalar>& x, Vector<Scalar>& r, const MatrixType& A, Index j, Scalar col_norm_sq_j) {
  if (!(col_norm_sq_j > Scalar(0))) detail::throw_zero_column(j);
  detail::require_dims(x.size(), A.cols(), "step");
  const Scalar alpha = column_dot(A, j, r) / col_norm_sq_j;
  if (alpha == Scalar(0)) return alpha;
  x[j] += alpha;
  axpy_column(r, A, j, Scalar(-alpha));
  return alpha;
}

/// Runs the configured method from x0 (zero unless given) until RES, the
/// relative gradient, or the iteration cap stops it.
///
/// With a known solution the loop stops once
/// ||x_k - x_star||^2 <= tol * ||x_star||^2; without one it stops once
/// ||A^T r_k||^2 <= tol * ||A^T b||^2. An exactly zero gradient always stops
/// the loop as GRADIENT_REACHED.
template <typename MatrixType, typename Scalar = typename MatrixType::Scalar>
SolveReport<Scalar> solve(const MatrixType& A, const std::type_identity_t<Vector<Scalar>>& b,
                          const std::type_identity_t<std::optional<Vector<Scalar>>>& known_solution,
                          const SolverConfig& config,
                          const std::type_identity_t<std::optional<Vector<Scalar>>>& x0 = std::nullopt) {
  config.validate();
  const Index n = A.cols();
  detail::require_dims(b.size(), A.rows(), "solve: rhs");
  if (known_solution) detail::require_dims(known_solution->size(), n, "solve: known solution");
  if (x0) detail::require_dims(x0->size(), n, "solve: initial guess");

  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();

  const Vector<Scalar> col_norms = column_norms_sq(A);
  const Scalar frob_sq = col_norms.sum();

  SolveReport<Scalar> report;
  Vector<Scalar>& x = report.solution;
  Vector<Scalar>& r = report.residual;
  x = x0 ? *x0 : Vector<Scalar>::Zero(n);
  r = x0 ? Vector<Scalar>(b - matvec(A, x)) : b;

  Vector<Scalar> s(n);
  transpose_matvec_into(A, r, s);
  const Scalar atb_sq = x0 ? transpose_matvec(A, b).squaredNorm() : s.squaredNorm();
  const Scalar solution_sq = known_solution ? known_solution->squaredNorm() : Scalar(0);

  Rng rng(config.seed);
  std::vector<Index> candidates;
  candidates.reserve(static_cast<std::size_t>(n));

  for (std::int64_t k = 0;; ++k) {
    if (k > 0) transpose_matvec_into(A, r, s);
    const Scalar grad_sq = s.squaredNorm();

    std::optional<Scalar> res;
    if (known_solution) {
      const Scalar err = (x - *known_solution).squaredNorm();
      res = solution_sq > Scalar(0) ? err / solution_sq : err;
    }

    StepRecord<Scalar>* record = nullptr;
    if (config.record_trace) {
      record = &report.trace.emplace_back();
      record->iteration = k;
      record->residual_gradient_norm_sq = grad_sq;
      record->res = res;
      if (known_solution) record->energy_error_sq = energy_error_sq(A, x, *known_solution);
    }

    report.iterations = k;
    report.final_gradient_norm_sq = grad_sq;
    report.final_res = res ? *res : (atb_sq > Scalar(0) ? grad_sq / atb_sq : grad_sq);

    if (res && *res <= Scalar(config.res_tolerance)) {
      report.stop_reason = StopReason::RES_REACHED;
      break;
    }
    if (!known_solution && grad_sq <= Scalar(config.res_tolerance) * atb_sq) {
      report.stop_reason = StopReason::GRADIENT_REACHED;
      break;
    }
    if (grad_sq == Scalar(0)) {
      report.stop_reason = StopReason::GRADIENT_REACHED;
      break;
    }
    if (k >= config.max_iterations) {
      report.stop_reason = StopReason::ITERATION_CAP;
      break;
    }

    Index j = 0;
    std::optional<Scalar> delta;
    switch (config.method) {
      case Method::GGS:
        j = ggs_select(s, col_norms, config.tie_tolerance_rel, candidates);
        break;
      case Method::GGS_RANDOMIZED:
        j = ggs_randomized_select(s, col_norms, config.tie_tolerance_rel, rng, candidates);
        break;
      case Method::GRCD: {
        Scalar d(0);
        j = grcd_select(s, col_norms, frob_sq, rng, candidates, d);
        delta = d;
        break;
      }
      case Method::RGS:
        j = rgs_select(col_norms, frob_sq, rng);
        candidates.assign(1, j);
        break;
    }

    step(x, r, A, j, col_norms[j]);

    if (record) {
      record->chosen_index = j;
      record->candidate_set_size = static_cast<Index>(candidates.size());
      Scalar norm_sum(0);
      for (const Index c : candidates) norm_sum += col_norms[c];
      record->candidate_norm_sum = norm_sum;
      record->delta = delta;
      record->post_step_column_dot = column_dot(A, j, r);
      record->post_step_residual_norm = r.norm();
    }
  }

  report.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

}  // namespace ggs
