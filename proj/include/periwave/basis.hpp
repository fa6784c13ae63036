#pragma once

#include <Eigen/Dense>

#include "periwave/fourier.hpp"

namespace periwave {

/// Matrix of multiplication by y(t) on t-modes |l| <= m: M(l,l') = yhat(l-l').
inline Eigen::MatrixXcd conv_matrix(const TimeFunction& y, Index m) {
  Eigen::MatrixXcd M(2 * m + 1, 2 * m + 1);
  for (Index l = -m; l <= m; ++l)
    for (Index lp = -m; lp <= m; ++lp) M(l + m, lp + m) = y.coeff(l - lp);
  return M;
}

/// Unitary change from the real trigonometric basis {1, sqrt2 cos kt,
/// sqrt2 sin kt} to complex exponentials.  Conjugating a Hermitian operator
/// with real symbol by this matrix yields a real symmetric matrix, which keeps
/// eigenfunctions real.
inline Eigen::MatrixXcd real_trig_to_complex(Index m) {
  using C = std::complex<double>;
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(2 * m + 1, 2 * m + 1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  T(m, 0) = C(1, 0);
  for (Index k = 1; k <= m; ++k) {
    T(k + m, 2 * k - 1) = C(inv_sqrt2, 0);
    T(-k + m, 2 * k - 1) = C(inv_sqrt2, 0);
    T(k + m, 2 * k) = C(0, -inv_sqrt2);
    T(-k + m, 2 * k) = C(0, inv_sqrt2);
  }
  return T;
}

/// Real symmetric matrix of a Hermitian operator with real kernel, expressed
/// in the real trigonometric basis.
inline Eigen::MatrixXd realify(const Eigen::MatrixXcd& Mc, const Eigen::MatrixXcd& T) {
  return (T.adjoint() * Mc * T).real();
}

}  // namespace periwave
