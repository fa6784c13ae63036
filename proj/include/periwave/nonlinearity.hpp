#pragma once

#include <vector>

#include "periwave/fourier.hpp"
#include "periwave/grid.hpp"

namespace periwave {

/// Polynomial nonlinearity f(t,x,u) = sum_{m=0}^{M} c_m(t,x) u^m with
/// trigonometric-polynomial coefficients.  Exactly differentiable, so the
/// composition machinery stays alias-free at every degree.
template <class Scalar>
struct NonlinearitySpecT {
  std::vector<FourierFieldT<Scalar>> c;  // c[m] multiplies u^m

  NonlinearitySpecT() = default;
  explicit NonlinearitySpecT(Index degree) : c(degree + 1) {}

  Index degree() const { return Index(c.size()) - 1; }

  void validate() const {
    if (c.empty()) throw ValidationError("nonlinearity: empty coefficient list");
    for (const auto& cm : c)
      if (cm.reality_defect() > 0)
        throw ValidationError("nonlinearity: coefficient field violates reality");
  }

  Index coeff_jmax() const {
    Index j = 0;
    for (const auto& cm : c) j = std::max(j, cm.jmax());
    return j;
  }
  Index coeff_lmax() const {
    Index l = 0;
    for (const auto& cm : c) l = std::max(l, cm.lmax());
    return l;
  }

  /// d/du: sum m c_m u^{m-1}.
  NonlinearitySpecT derivative_spec() const {
    if (degree() == 0) {
      NonlinearitySpecT d(0);
      d.c[0] = FourierFieldT<Scalar>(0, 0);
      return d;
    }
    NonlinearitySpecT d(degree() - 1);
    for (Index m = 1; m <= degree(); ++m) d.c[m - 1] = Scalar(m) * c[m];
    return d;
  }

  /// The x-average part: sum (Pi_V c_m)(t) u^m.
  NonlinearitySpecT x_average_part() const {
    NonlinearitySpecT f0(degree());
    for (Index m = 0; m <= degree(); ++m) f0.c[m] = lift(x_average(c[m]));
    return f0;
  }

  /// The oscillating complement f - f0.
  NonlinearitySpecT x_oscillating_part() const {
    NonlinearitySpecT ft(degree());
    for (Index m = 0; m <= degree(); ++m) ft.c[m] = c[m] - lift(x_average(c[m]));
    return ft;
  }
};

using NonlinearitySpec = NonlinearitySpecT<double>;

namespace detail {

// Alias-free grid sizes for fitting modes up to (jout, lout) from a product
// supported up to (jprod, lprod): n > out + prod kills every alias image.
inline Index dealias_size(Index out, Index prod, Index degree, Index base) {
  const Index strict = out + prod + 1;
  const Index rule = (degree + 1) * (2 * base + 1);  // generalized 3/2-rule
  return std::max(strict, rule);
}

}  // namespace detail

/// Fourier coefficients of f(t,x,u(t,x)) on the requested truncation,
/// computed by dealiased collocation.  grid_factor > 1 oversamples further.
template <class Scalar>
FourierFieldT<Scalar> evaluate_nonlinearity(const NonlinearitySpecT<Scalar>& f,
                                            const FourierFieldT<Scalar>& u, Index jout, Index lout,
                                            Index grid_factor = 1) {
  f.validate();
  const Index M = f.degree();
  const Index jprod = f.coeff_jmax() + M * u.jmax();
  const Index lprod = f.coeff_lmax() + M * u.lmax();
  if (grid_factor < 1) throw ValidationError("evaluate_nonlinearity: grid_factor must be >= 1");
  const Index nx = grid_factor * detail::dealias_size(jout, jprod, M, u.jmax());
  const Index nt = grid_factor * detail::dealias_size(lout, lprod, M, u.lmax());
  if (nx < 2 * jout + 1 || nt < 2 * lout + 1)
    throw ValidationError("evaluate_nonlinearity: requested truncation exceeds grid Nyquist");

  using RealMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const RealMatrix ug = grid_values(u, nt, nx);
  RealMatrix acc = grid_values(f.c[0], nt, nx);
  RealMatrix upow = RealMatrix::Ones(nt, nx);
  for (Index m = 1; m <= M; ++m) {
    upow = upow.cwiseProduct(ug);
    acc += grid_values(f.c[m], nt, nx).cwiseProduct(upow);
  }
  return fit_from_grid<Scalar>(acc, jout, lout);
}

template <class Scalar>
FourierFieldT<Scalar> evaluate_nonlinearity(const NonlinearitySpecT<Scalar>& f,
                                            const TimeFunctionT<Scalar>& u, Index jout, Index lout,
                                            Index grid_factor = 1) {
  return evaluate_nonlinearity(f, lift(u), jout, lout, grid_factor);
}

/// Coefficients of (d_u f)(t,x,u(t,x)).
template <class Scalar>
FourierFieldT<Scalar> nonlinearity_derivative(const NonlinearitySpecT<Scalar>& f,
                                              const FourierFieldT<Scalar>& u, Index jout,
                                              Index lout, Index grid_factor = 1) {
  return evaluate_nonlinearity(f.derivative_spec(), u, jout, lout, grid_factor);
}

/// Natural support of f(u): where the exact composition lives.
template <class Scalar>
std::pair<Index, Index> composition_support(const NonlinearitySpecT<Scalar>& f,
                                            const FourierFieldT<Scalar>& u) {
  return {f.coeff_jmax() + f.degree() * u.jmax(), f.coeff_lmax() + f.degree() * u.lmax()};
}

}  // namespace periwave
