#pragma once

// Column selection rules for coordinate descent on the normal equation.
//
// All rules read s = A^T r_k and the cached squared column norms. The greedy
// rule (GGS) is deterministic; GRCD, randomized GGS and RGS draw from an Rng.
// Each rule has a workspace form that writes the candidate set into a
// caller-owned buffer (used by the solver loop) and a value-returning form.

#include <cmath>
#include <string>
#include <vector>

#include "ggs/error.hpp"
#include "ggs/rng.hpp"
#include "ggs/types.hpp"

namespace ggs {

struct GreedySelection {
  Index index = 0;
  std::vector<Index> candidates;  // R_k, ascending
};

template <typename Scalar>
struct GrcdSelection {
  Index index = 0;
  std::vector<Index> candidates;  // V_k, ascending
  Scalar delta = 0;
};

namespace detail {

[[noreturn]] inline void throw_zero_column(Index j) {
  throw Error(ErrorCode::ZeroColumn, "column " + std::to_string(j) + " has zero norm");
}

[[noreturn]] inline void throw_zero_gradient() {
  throw Error(ErrorCode::AllZeroGradient, "A^T r is identically zero; x solves the normal equation");
}

// Stage 1 of GGS: indices whose |s_j| is within the relative tie tolerance
// of max |s|.
template <typename Scalar>
void collect_max_abs_set(const Vector<Scalar>& s, double tie_tolerance_rel, std::vector<Index>& out) {
  Scalar max_abs(0);
  for (Index j = 0; j < s.size(); ++j) max_abs = std::max(max_abs, std::abs(s[j]));
  if (max_abs == Scalar(0)) throw_zero_gradient();
  const Scalar cutoff = (Scalar(1) - Scalar(tie_tolerance_rel)) * max_abs;
  out.clear();
  for (Index j = 0; j < s.size(); ++j) {
    if (std::abs(s[j]) >= cutoff) out.push_back(j);
  }
}

// Relative slack on the GRCD threshold. Columns that meet it with equality
// in exact arithmetic (all ratios equal, n = 1) must not be lost to rounding.
inline constexpr double kGrcdThresholdSlack = 1e-12;

template <typename Scalar>
void check_sizes(const Vector<Scalar>& s, const Vector<Scalar>& col_norms_sq) {
  if (s.size() != col_norms_sq.size() || s.size() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "gradient and column-norm vectors differ in length");
  }
}

}  // namespace detail

/// Greedy Gauss-Seidel rule. Stage 1 keeps the columns maximizing
/// |A_(j)^T r_k|; stage 2 picks, among those, the largest
/// |A_(j)^T r_k|^2 / ||A_(j)||^2 with ties going to the lowest index.
template <typename Scalar>
Index ggs_select(const Vector<Scalar>& s, const Vector<Scalar>& col_norms_sq, double tie_tolerance_rel,
                 std::vector<Index>& candidates) {
  detail::check_sizes(s, col_norms_sq);
  detail::collect_max_abs_set(s, tie_tolerance_rel, candidates);
  Index best = candidates.front();
  Scalar best_ratio(-1);
  for (const Index j : candidates) {
    const Scalar norm = col_norms_sq[j];
    if (!(norm > Scalar(0))) detail::throw_zero_column(j);
    const Scalar ratio = s[j] * s[j] / norm;
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = j;
    }
  }
  return best;
}

template <typename Scalar>
GreedySelection ggs_select(const Vector<Scalar>& s, const Vector<Scalar>& col_norms_sq,
                           double tie_tolerance_rel) {
  GreedySelection out;
  out.index = ggs_select(s, col_norms_sq, tie_tolerance_rel, out.candidates);
  return out;
}

/// Randomized variant of the greedy rule: same candidate set R_k, but the
/// column is drawn from R_k with probability proportional to
/// s_j^2 / ||A_(j)||^2.
template <typename Scalar>
Index ggs_randomized_select(const Vector<Scalar>& s, const Vector<Scalar>& col_norms_sq,
                            double tie_tolerance_rel, Rng& rng, std::vector<Index>& candidates) {
  detail::check_sizes(s, col_norms_sq);
  detail::collect_max_abs_set(s, tie_tolerance_rel, candidates);
  if (candidates.size() == 1) {
    if (!(col_norms_sq[candidates.front()] > Scalar(0))) detail::throw_zero_column(candidates.front());
    return candidates.front();
  }
  Scalar total(0);
  for (const Index j : candidates) {
    if (!(col_norms_sq[j] > Scalar(0))) detail::throw_zero_column(j);
    total += s[j] * s[j] / col_norms_sq[j];
  }
  const Scalar target = Scalar(rng.uniform()) * total;
  Scalar cumulative(0);
  for (const Index j : candidates) {
    cumulative += s[j] * s[j] / col_norms_sq[j];
    if (target < cumulative) return j;
  }
  return candidates.back();
}

template <typename Scalar>
GreedySelection ggs_randomized_select(const Vector<Scalar>& s, const Vector<Scalar>& col_norms_sq,
                                      double tie_tolerance_rel, Rng& rng) {
  GreedySelection out;
  out.index = ggs_randomized_select(s, col_norms_sq, tie_tolerance_rel, rng, out.candidates);
  return out;
}

/// Greedy randomized coordinate descent rule.
///
///   delta_k = 1/2 * ( max_j (s_j^2 / ||A_(j)||^2) / ||s||^2 + 1 / ||A||_F^2 )
///   V_k     = { j : s_j^2 >= delta_k * ||s||^2 * ||A_(j)||^2 }
///
/// and j_k is drawn from V_k with probability s_j^2 / sum_{i in V_k} s_i^2
/// by inverse CDF. Membership is tested with a 1e-12 relative slack so exact
/// ties survive rounding. The maximizing column always satisfies the
/// threshold in exact arithmetic and is added explicitly as well.
template <typename Scalar>
Index grcd_select(const Vector<Scalar>& s, const Vector<Scalar>& col_norms_sq, Scalar frob_sq, Rng& rng,
                  std::vector<Index>& candidates, Scalar& delta) {
  detail::check_sizes(s, col_norms_sq);
  if (!(frob_sq > Scalar(0))) throw Error(ErrorCode::ZeroColumn, "matrix has zero Frobenius norm");
  Scalar grad_sq(0);
  Scalar max_ratio(-1);
  Index argmax = 0;
  for (Index j = 0; j < s.size(); ++j) {
    const Scalar norm = col_norms_sq[j];
    if (!(norm > Scalar(0))) detail::throw_zero_column(j);
    const Scalar sj2 = s[j] * s[j];
    grad_sq += sj2;
    const Scalar ratio = sj2 / norm;
    if (ratio > max_ratio) {
      max_ratio = ratio;
      argmax = j;
    }
  }
  if (grad_sq == Scalar(0)) detail::throw_zero_gradient();

  delta = Scalar(0.5) * (max_ratio / grad_sq + Scalar(1) / frob_sq);
  const Scalar scaled = (Scalar(1) - Scalar(detail::kGrcdThresholdSlack)) * delta * grad_sq;
  candidates.clear();
  Scalar total(0);
  for (Index j = 0; j < s.size(); ++j) {
    const Scalar sj2 = s[j] * s[j];
    if (sj2 >= scaled * col_norms_sq[j] || j == argmax) {
      candidates.push_back(j);
      total += sj2;
    }
  }
  if (candidates.size() == 1) return candidates.front();

  const Scalar target = Scalar(rng.uniform()) * total;
  Scalar cumulative(0);
  for (const Index j : candidates) {
    cumulative += s[j] * s[j];
    if (target < cumulative) return j;
  }
  return candidates.back();
}

template <typename Scalar>
GrcdSelection<Scalar> grcd_select(const Vector<Scalar>& s, const Vector<Scalar>& col_norms_sq, Scalar frob_sq,
                                  Rng& rng) {
  GrcdSelection<Scalar> out;
  out.index = grcd_select(s, col_norms_sq, frob_sq, rng, out.candidates, out.delta);
  return out;
}

/// Randomized Gauss-Seidel: column j with probability ||A_(j)||^2 / ||A||_F^2,
/// independent of the residual.
template <typename Scalar>
Index rgs_select(const Vector<Scalar>& col_norms_sq, Scalar frob_sq, Rng& rng) {
  if (!(frob_sq > Scalar(0))) throw Error(ErrorCode::ZeroColumn, "matrix has zero Frobenius norm");
  const Index n = col_norms_sq.size();
  if (n == 1) return 0;
  const Scalar target = Scalar(rng.uniform()) * frob_sq;
  Scalar cumulative(0);
  Index last_nonzero = 0;
  for (Index j = 0; j < n; ++j) {
    if (col_norms_sq[j] > Scalar(0)) last_nonzero = j;
    cumulative += col_norms_sq[j];
    if (target < cumulative) return j;
  }
  return last_nonzero;
}

}  // namespace ggs
