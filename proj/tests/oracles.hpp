#pragma once

// Independent reference implementations used by the unit tests and the
// acceptance binary. None of these call into the selection or eigenvalue
// code they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ggs/rng.hpp"
#include "ggs/types.hpp"

namespace oracle {

using ggs::Index;
using ggs::Vectord;

struct GreedyChoice {
  std::vector<Index> candidates;
  Index index = -1;
};

// Greedy rule on integer-valued data, decided in exact integer arithmetic:
// R = { j : |s_j| == max |s| }, then argmax s_j^2 / w_j over R via
// cross-multiplication, lowest index on ties.
inline GreedyChoice greedy_exact(const std::vector<std::int64_t>& s, const std::vector<std::int64_t>& w) {
  GreedyChoice out;
  std::int64_t top = 0;
  for (auto v : s) top = std::max(top, v < 0 ? -v : v);
  for (Index j = 0; j < static_cast<Index>(s.size()); ++j)
    if ((s[j] < 0 ? -s[j] : s[j]) == top) out.candidates.push_back(j);
  for (Index j : out.candidates) {
    if (out.index < 0) {
      out.index = j;
      continue;
    }
    const Index b = out.index;
    // s_j^2 / w_j > s_b^2 / w_b  <=>  s_j^2 w_b > s_b^2 w_j
    if (s[j] * s[j] * w[b] > s[b] * s[b] * w[j]) out.index = j;
  }
  return out;
}

// Greedy rule on real data by direct scan in long double.
inline GreedyChoice greedy_scan(const Vectord& s, const Vectord& w, double tie_rel) {
  GreedyChoice out;
  long double top = 0;
  for (Index j = 0; j < s.size(); ++j) top = std::max(top, std::fabs(static_cast<long double>(s[j])));
  for (Index j = 0; j < s.size(); ++j)
    if (std::fabs(static_cast<long double>(s[j])) >= (1.0L - tie_rel) * top) out.candidates.push_back(j);
  long double best = -1;
  for (Index j : out.candidates) {
    const long double ratio = static_cast<long double>(s[j]) * s[j] / w[j];
    if (ratio > best) {
      best = ratio;
      out.index = j;
    }
  }
  return out;
}

struct GrcdChoice {
  std::vector<Index> candidates;
  Index maximizer = -1;
  long double delta = 0;
  std::vector<long double> probabilities;  // aligned with candidates
};

inline GrcdChoice grcd_scan(const Vectord& s, const Vectord& w) {
  GrcdChoice out;
  long double grad = 0;
  long double frob = 0;
  long double best = -1;
  for (Index j = 0; j < s.size(); ++j) {
    const long double sj = s[j];
    grad += sj * sj;
    frob += w[j];
    if (sj * sj / w[j] > best) {
      best = sj * sj / w[j];
      out.maximizer = j;
    }
  }
  out.delta = 0.5L * (best / grad + 1.0L / frob);
  long double mass = 0;
  for (Index j = 0; j < s.size(); ++j) {
    const long double sj = s[j];
    // Same 1e-12 boundary slack as the solver: exact ties belong to V.
    if (sj * sj >= (1 - 1e-12L) * out.delta * grad * w[j]) {
      out.candidates.push_back(j);
      mass += sj * sj;
    }
  }
  for (Index j : out.candidates) out.probabilities.push_back(static_cast<long double>(s[j]) * s[j] / mass);
  return out;
}

// Number of eigenvalues of the symmetric matrix G strictly below x, from the
// signs of the LDL^T pivots of G - x I (Sylvester's law of inertia).
inline int count_below(const ggs::DenseMatrixd& G, long double x) {
  const Index n = G.rows();
  std::vector<long double> M(static_cast<std::size_t>(n * n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) M[i * n + j] = G(i, j) - (i == j ? x : 0.0L);
  int negative = 0;
  for (Index k = 0; k < n; ++k) {
    long double pivot = M[k * n + k];
    if (pivot == 0) pivot = -1e-300L;
    if (pivot < 0) ++negative;
    for (Index i = k + 1; i < n; ++i) {
      const long double f = M[i * n + k] / pivot;
      for (Index j = k + 1; j < n; ++j) M[i * n + j] -= f * M[k * n + j];
    }
  }
  return negative;
}

// Smallest eigenvalue of a symmetric positive semidefinite G by bisection on
// the inertia count.
inline double smallest_eigenvalue_bisection(const ggs::DenseMatrixd& G) {
  long double lo = 0;
  long double hi = 0;
  for (Index i = 0; i < G.rows(); ++i) {
    long double row = 0;
    for (Index j = 0; j < G.cols(); ++j) row += std::fabs(static_cast<long double>(G(i, j)));
    hi = std::max(hi, row);
  }
  hi += 1;
  for (int it = 0; it < 200; ++it) {
    const long double mid = 0.5L * (lo + hi);
    if (count_below(G, mid) >= 1) hi = mid;
    else lo = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

// Binomial z-score of an observed count against probability p over n draws.
inline double binomial_z(long count, long n, long double p) {
  const long double sigma = std::sqrt(static_cast<long double>(n) * p * (1 - p));
  if (sigma == 0) return count == static_cast<long>(std::llround(n * p)) ? 0.0 : 1e9;
  return static_cast<double>((count - n * p) / sigma);
}

}  // namespace oracle
