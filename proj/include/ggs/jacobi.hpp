#pragma once

#include <algorithm>
#include <cmath>

#include "ggs/error.hpp"
#include "ggs/types.hpp"

namespace ggs {

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
///
/// Sweeps over all (p, q), p < q, annihilating G(p, q) with the rotation
///   theta = (G_qq - G_pp) / (2 G_pq),  t = sgn(theta) / (|theta| + sqrt(theta^2 + 1)),
/// until the off-diagonal Frobenius norm drops below tolerance * ||G||_F.
template <typename Scalar>
Vector<Scalar> jacobi_eigenvalues(DenseMatrix<Scalar> G, double tolerance = 1e-10, int max_sweeps = 100) {
  const Index n = G.rows();
  if (n != G.cols() || n == 0) throw Error(ErrorCode::DimensionMismatch, "jacobi_eigenvalues: matrix must be square");
  const Scalar frob = G.norm();
  const Scalar target = Scalar(tolerance) * frob;

  auto off_norm = [&] {
    Scalar acc(0);
    for (Index q = 1; q < n; ++q)
      for (Index p = 0; p < q; ++p) acc += G(p, q) * G(p, q);
    return std::sqrt(Scalar(2) * acc);
  };

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= target) break;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Scalar apq = G(p, q);
        if (apq == Scalar(0)) continue;
        const Scalar theta = (G(q, q) - G(p, p)) / (Scalar(2) * apq);
        Scalar t;
        if (std::abs(theta) > Scalar(1e150)) {
          t = Scalar(1) / (Scalar(2) * theta);
        } else {
          t = Scalar(1) / (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
          if (theta < Scalar(0)) t = -t;
        }
        const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
        const Scalar s = t * c;

        G(p, p) -= t * apq;
        G(q, q) += t * apq;
        G(p, q) = G(q, p) = Scalar(0);
        for (Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const Scalar gkp = G(k, p);
          const Scalar gkq = G(k, q);
          G(k, p) = G(p, k) = c * gkp - s * gkq;
          G(k, q) = G(q, k) = s * gkp + c * gkq;
        }
      }
    }
  }
  if (sweep == max_sweeps && off_norm() > target) {
    throw Error(ErrorCode::InvalidArgument, "jacobi_eigenvalues: no convergence");
  }
  Vector<Scalar> eig = G.diagonal();
  std::sort(eig.data(), eig.data() + n);
  return eig;
}

}  // namespace ggs
