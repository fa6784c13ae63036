#pragma once

#include "periwave/fourier.hpp"

namespace periwave {

/// L_omega w = omega^2 w_tt - a(t) w_xx, exact in coefficients; the t-support
/// of the result grows by a's band.
template <class Scalar>
FourierFieldT<Scalar> apply_wave_operator(const FourierFieldT<Scalar>& w, Scalar omega,
                                          const TimeFunctionT<Scalar>& a) {
  require_positive(a);
  FourierFieldT<Scalar> r = omega * omega * time_derivative(w, 2);
  r = r - multiply_time(a, space_derivative(w, 2));
  return r;
}

}  // namespace periwave
