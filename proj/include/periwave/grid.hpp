#pragma once

#include <Eigen/Dense>

#include "periwave/fourier.hpp"

namespace periwave {

// Dense DFT matrices keep the transforms deterministic and Eigen-only; at the
// truncations this library targets they are never the bottleneck.
namespace detail {

template <class Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> synthesis_matrix(Index n,
                                                                                     Index kmax) {
  using Complex = std::complex<Scalar>;
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic> E(n, 2 * kmax + 1);
  const Scalar h = Scalar(2.0 * M_PI) / Scalar(n);
  for (Index p = 0; p < n; ++p)
    for (Index k = -kmax; k <= kmax; ++k)
      E(p, k + kmax) = Complex(std::cos(k * p * h), std::sin(k * p * h));
  return E;
}

}  // namespace detail

/// Real values of u on the tensor grid (t_p, x_q), p < nt, q < nx.
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> grid_values(const FourierFieldT<Scalar>& u,
                                                                  Index nt, Index nx) {
  const auto Et = detail::synthesis_matrix<Scalar>(nt, u.lmax());
  const auto Ex = detail::synthesis_matrix<Scalar>(nx, u.jmax());
  return (Et * u.raw() * Ex.transpose()).real();
}

template <class Scalar>
Scalar grid_imag_max(const FourierFieldT<Scalar>& u, Index nt, Index nx) {
  const auto Et = detail::synthesis_matrix<Scalar>(nt, u.lmax());
  const auto Ex = detail::synthesis_matrix<Scalar>(nx, u.jmax());
  return (Et * u.raw() * Ex.transpose()).imag().cwiseAbs().maxCoeff();
}

/// Fit coefficients with |j| <= jmax, |l| <= lmax from real grid samples.
/// Exact when nt > lmax + L_true and nx > jmax + J_true of the sampled
/// trigonometric polynomial (alias-free window).
template <class Scalar>
FourierFieldT<Scalar> fit_from_grid(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& v,
                                    Index jmax, Index lmax) {
  const Index nt = v.rows(), nx = v.cols();
  if (nt < 2 * lmax + 1 || nx < 2 * jmax + 1)
    throw ValidationError("fit_from_grid: grid below Nyquist for requested truncation");
  const auto Et = detail::synthesis_matrix<Scalar>(nt, lmax);
  const auto Ex = detail::synthesis_matrix<Scalar>(nx, jmax);
  FourierFieldT<Scalar> u(jmax, lmax);
  u.raw() = (Et.adjoint() * v.template cast<std::complex<Scalar>>() * Ex.conjugate()) /
            Scalar(nt * nx);
  u.symmetrize();
  return u;
}

/// Collocation-path product, dealiased by construction; agrees with the
/// convolution path to round-off.
template <class Scalar>
FourierFieldT<Scalar> multiply_collocation(const FourierFieldT<Scalar>& u,
                                           const FourierFieldT<Scalar>& v) {
  const Index jout = u.jmax() + v.jmax(), lout = u.lmax() + v.lmax();
  const Index nx = 2 * jout + 2, nt = 2 * lout + 2;
  const auto gu = grid_values(u, nt, nx);
  const auto gv = grid_values(v, nt, nx);
  return fit_from_grid<Scalar>(gu.cwiseProduct(gv), jout, lout);
}

}  // namespace periwave
