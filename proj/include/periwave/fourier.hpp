#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>

#include "periwave/errors.hpp"

namespace periwave {

using Index = Eigen::Index;

// Weight (1 + |j|^{2s}) of the anisotropic Sobolev norm; the j = 0 mode
// always carries weight 1.
inline double sobolev_weight(Index j, double s) {
  return j == 0 ? 1.0 : 1.0 + std::pow(double(std::abs(j)), 2.0 * s);
}

/// One 2pi-periodic function of time, stored as complex Fourier amplitudes
/// over |l| <= lmax.  Real-valued functions satisfy coeff(-l) = conj(coeff(l)).
template <class Scalar>
class TimeFunctionT {
 public:
  using Complex = std::complex<Scalar>;
  using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  TimeFunctionT() : lmax_(0), coef_(Vector::Zero(1)) {}
  explicit TimeFunctionT(Index lmax) : lmax_(lmax), coef_(Vector::Zero(2 * lmax + 1)) {}

  static TimeFunctionT constant(Scalar value, Index lmax = 0) {
    TimeFunctionT y(lmax);
    y.at(0) = value;
    return y;
  }
  static TimeFunctionT cosine(Index k, Scalar amp, Index lmax = -1) {
    TimeFunctionT y(lmax < k ? k : lmax);
    y.at(k) += Complex(amp / 2, 0);
    y.at(-k) += Complex(amp / 2, 0);
    return y;
  }
  static TimeFunctionT sine(Index k, Scalar amp, Index lmax = -1) {
    TimeFunctionT y(lmax < k ? k : lmax);
    y.at(k) += Complex(0, -amp / 2);
    y.at(-k) += Complex(0, amp / 2);
    return y;
  }

  Index lmax() const { return lmax_; }
  Index size() const { return coef_.size(); }

  Complex coeff(Index l) const {
    return std::abs(l) <= lmax_ ? coef_[l + lmax_] : Complex(0);
  }
  Complex& at(Index l) { return coef_[l + lmax_]; }
  const Vector& raw() const { return coef_; }
  Vector& raw() { return coef_; }

  bool zero_mean() const { return zero_mean_; }
  void mark_zero_mean() {
    coef_[lmax_] = Complex(0);
    zero_mean_ = true;
  }

  /// Embed or truncate to a new band limit.
  TimeFunctionT resized(Index lmax) const {
    TimeFunctionT y(lmax);
    const Index m = std::min(lmax, lmax_);
    for (Index l = -m; l <= m; ++l) y.at(l) = coeff(l);
    y.zero_mean_ = zero_mean_;
    return y;
  }

  /// Enforce coeff(-l) = conj(coeff(l)) by averaging.
  void symmetrize() {
    for (Index l = 1; l <= lmax_; ++l) {
      const Complex avg = Scalar(0.5) * (coef_[l + lmax_] + std::conj(coef_[-l + lmax_]));
      coef_[l + lmax_] = avg;
      coef_[-l + lmax_] = std::conj(avg);
    }
    coef_[lmax_] = Complex(coef_[lmax_].real(), 0);
  }

  Scalar reality_defect() const {
    Scalar d = 0;
    for (Index l = 0; l <= lmax_; ++l)
      d = std::max(d, std::abs(coeff(l) - std::conj(coeff(-l))));
    return d;
  }

  TimeFunctionT& operator+=(const TimeFunctionT& o) {
    *this = *this + o;
    return *this;
  }
  TimeFunctionT& operator-=(const TimeFunctionT& o) {
    *this = *this - o;
    return *this;
  }
  TimeFunctionT& operator*=(Scalar c) {
    coef_ *= c;
    return *this;
  }

  friend TimeFunctionT operator+(const TimeFunctionT& x, const TimeFunctionT& y) {
    TimeFunctionT r(std::max(x.lmax_, y.lmax_));
    for (Index l = -r.lmax_; l <= r.lmax_; ++l) r.at(l) = x.coeff(l) + y.coeff(l);
    return r;
  }
  friend TimeFunctionT operator-(const TimeFunctionT& x, const TimeFunctionT& y) {
    TimeFunctionT r(std::max(x.lmax_, y.lmax_));
    for (Index l = -r.lmax_; l <= r.lmax_; ++l) r.at(l) = x.coeff(l) - y.coeff(l);
    return r;
  }
  friend TimeFunctionT operator*(Scalar c, const TimeFunctionT& y) {
    TimeFunctionT r = y;
    r.coef_ *= c;
    return r;
  }

 private:
  Index lmax_;
  Vector coef_;
  bool zero_mean_ = false;
};

using TimeFunction = TimeFunctionT<double>;

template <class Scalar>
Scalar h1_norm(const TimeFunctionT<Scalar>& y) {
  Scalar s = 0;
  for (Index l = -y.lmax(); l <= y.lmax(); ++l)
    s += (1.0 + double(l) * double(l)) * std::norm(y.coeff(l));
  return std::sqrt(s);
}

template <class Scalar>
Scalar mean_value(const TimeFunctionT<Scalar>& y) {
  return y.coeff(0).real();
}

/// k-th time derivative: multiply mode l by (i l)^k.
template <class Scalar>
TimeFunctionT<Scalar> derivative(const TimeFunctionT<Scalar>& y, int order = 1) {
  TimeFunctionT<Scalar> r(y.lmax());
  using Complex = std::complex<Scalar>;
  for (Index l = -y.lmax(); l <= y.lmax(); ++l) {
    Complex f(1, 0);
    for (int k = 0; k < order; ++k) f *= Complex(0, Scalar(l));
    r.at(l) = f * y.coeff(l);
  }
  return r;
}

/// Exact product by coefficient convolution; support grows to the sum.
template <class Scalar>
TimeFunctionT<Scalar> multiply(const TimeFunctionT<Scalar>& x, const TimeFunctionT<Scalar>& y) {
  TimeFunctionT<Scalar> r(x.lmax() + y.lmax());
  for (Index l1 = -x.lmax(); l1 <= x.lmax(); ++l1) {
    if (x.coeff(l1) == std::complex<Scalar>(0)) continue;
    for (Index l2 = -y.lmax(); l2 <= y.lmax(); ++l2) r.at(l1 + l2) += x.coeff(l1) * y.coeff(l2);
  }
  return r;
}

/// Values on the uniform grid t_p = 2 pi p / n (real part; imaginary part is
/// round-off for reality-symmetric input).
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> grid_values(const TimeFunctionT<Scalar>& y, Index n) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(n);
  const Scalar h = Scalar(2.0 * M_PI) / Scalar(n);
  for (Index p = 0; p < n; ++p) {
    std::complex<Scalar> acc = y.coeff(0);
    for (Index l = 1; l <= y.lmax(); ++l) {
      const std::complex<Scalar> e(std::cos(l * p * h), std::sin(l * p * h));
      acc += y.coeff(l) * e + y.coeff(-l) * std::conj(e);
    }
    v[p] = acc.real();
  }
  return v;
}

inline double evaluate_at(const TimeFunction& y, double t) {
  std::complex<double> acc = y.coeff(0);
  for (Index l = 1; l <= y.lmax(); ++l) {
    const std::complex<double> e(std::cos(l * t), std::sin(l * t));
    acc += y.coeff(l) * e + y.coeff(-l) * std::conj(e);
  }
  return acc.real();
}

/// Fit band-limited coefficients from samples on the uniform n-point grid.
/// Exact whenever the sampled function is band-limited with n > lmax + L_true.
template <class Scalar>
TimeFunctionT<Scalar> fit_from_grid(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v, Index lmax) {
  const Index n = v.size();
  if (n < 2 * lmax + 1) throw ValidationError("fit_from_grid: grid below Nyquist for requested band");
  TimeFunctionT<Scalar> y(lmax);
  const Scalar h = Scalar(2.0 * M_PI) / Scalar(n);
  for (Index l = 0; l <= lmax; ++l) {
    std::complex<Scalar> acc(0);
    for (Index p = 0; p < n; ++p) {
      acc += v[p] * std::complex<Scalar>(std::cos(l * p * h), -std::sin(l * p * h));
    }
    acc /= Scalar(n);
    y.at(l) = acc;
    y.at(-l) = std::conj(acc);
  }
  return y;
}

template <class Scalar>
Scalar grid_min(const TimeFunctionT<Scalar>& y, Index oversample = 4) {
  const Index n = std::max<Index>(64, oversample * (2 * y.lmax() + 1));
  return grid_values(y, n).minCoeff();
}

template <class Scalar>
Scalar grid_max_abs(const TimeFunctionT<Scalar>& y, Index oversample = 4) {
  const Index n = std::max<Index>(64, oversample * (2 * y.lmax() + 1));
  return grid_values(y, n).cwiseAbs().maxCoeff();
}

/// Throws unless min a > tol on a 4x oversampled grid.
inline void require_positive(const TimeFunction& a, double tol = 1e-8,
                             const char* what = "a(t)") {
  if (grid_min(a) < tol)
    throw PositivityError(std::string(what) + " is not strictly positive on the verification grid");
}

/// Truncated double Fourier series u(t,x) = sum_{j,l} u_{j,l} e^{i(jx+lt)}.
/// Columns are x-modes; column j is the time function u_j(t).
template <class Scalar>
class FourierFieldT {
 public:
  using Complex = std::complex<Scalar>;
  using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

  FourierFieldT() : jmax_(0), lmax_(0), coef_(Matrix::Zero(1, 1)) {}
  FourierFieldT(Index jmax, Index lmax)
      : jmax_(jmax), lmax_(lmax), coef_(Matrix::Zero(2 * lmax + 1, 2 * jmax + 1)) {}

  /// e^{i(jx+lt)} + conj, scaled: amp * 2 cos(jx + lt) for amp real.
  static FourierFieldT mode_pair(Index j, Index l, Complex amp, Index jmax = -1, Index lmax = -1) {
    FourierFieldT u(std::max(jmax, std::abs(j)), std::max(lmax, std::abs(l)));
    u.at(j, l) += amp;
    u.at(-j, -l) += std::conj(amp);
    return u;
  }

  Index jmax() const { return jmax_; }
  Index lmax() const { return lmax_; }

  Complex coeff(Index j, Index l) const {
    return (std::abs(j) <= jmax_ && std::abs(l) <= lmax_) ? coef_(l + lmax_, j + jmax_)
                                                          : Complex(0);
  }
  Complex& at(Index j, Index l) { return coef_(l + lmax_, j + jmax_); }
  const Matrix& raw() const { return coef_; }
  Matrix& raw() { return coef_; }

  TimeFunctionT<Scalar> column(Index j) const {
    TimeFunctionT<Scalar> y(lmax_);
    if (std::abs(j) <= jmax_) y.raw() = coef_.col(j + jmax_);
    return y;
  }
  void set_column(Index j, const TimeFunctionT<Scalar>& y) {
    for (Index l = -lmax_; l <= lmax_; ++l) at(j, l) = y.coeff(l);
  }

  FourierFieldT resized(Index jmax, Index lmax) const {
    FourierFieldT u(jmax, lmax);
    const Index mj = std::min(jmax, jmax_), ml = std::min(lmax, lmax_);
    for (Index j = -mj; j <= mj; ++j)
      for (Index l = -ml; l <= ml; ++l) u.at(j, l) = coeff(j, l);
    return u;
  }

  void symmetrize() {
    for (Index j = -jmax_; j <= jmax_; ++j) {
      for (Index l = -lmax_; l <= lmax_; ++l) {
        if (j < 0 || (j == 0 && l < 0)) continue;
        const Complex avg = Scalar(0.5) * (coeff(j, l) + std::conj(coeff(-j, -l)));
        at(j, l) = avg;
        at(-j, -l) = std::conj(avg);
      }
    }
    at(0, 0) = Complex(coeff(0, 0).real(), 0);
  }

  Scalar reality_defect() const {
    Scalar d = 0;
    for (Index j = 0; j <= jmax_; ++j)
      for (Index l = -lmax_; l <= lmax_; ++l)
        d = std::max(d, std::abs(coeff(j, l) - std::conj(coeff(-j, -l))));
    return d;
  }

  bool x_mean_free(Scalar tol = Scalar(0)) const {
    for (Index l = -lmax_; l <= lmax_; ++l)
      if (std::abs(coeff(0, l)) > tol) return false;
    return true;
  }

  FourierFieldT& operator+=(const FourierFieldT& o) {
    *this = *this + o;
    return *this;
  }
  FourierFieldT& operator-=(const FourierFieldT& o) {
    *this = *this - o;
    return *this;
  }
  FourierFieldT& operator*=(Scalar c) {
    coef_ *= c;
    return *this;
  }

  friend FourierFieldT operator+(const FourierFieldT& x, const FourierFieldT& y) {
    FourierFieldT r(std::max(x.jmax_, y.jmax_), std::max(x.lmax_, y.lmax_));
    for (Index j = -r.jmax_; j <= r.jmax_; ++j)
      for (Index l = -r.lmax_; l <= r.lmax_; ++l) r.at(j, l) = x.coeff(j, l) + y.coeff(j, l);
    return r;
  }
  friend FourierFieldT operator-(const FourierFieldT& x, const FourierFieldT& y) {
    FourierFieldT r(std::max(x.jmax_, y.jmax_), std::max(x.lmax_, y.lmax_));
    for (Index j = -r.jmax_; j <= r.jmax_; ++j)
      for (Index l = -r.lmax_; l <= r.lmax_; ++l) r.at(j, l) = x.coeff(j, l) - y.coeff(j, l);
    return r;
  }
  friend FourierFieldT operator*(Scalar c, const FourierFieldT& u) {
    FourierFieldT r = u;
    r.coef_ *= c;
    return r;
  }

 private:
  Index jmax_, lmax_;
  Matrix coef_;  // (2 lmax + 1) x (2 jmax + 1), rows = t-modes, cols = x-modes
};

using FourierField = FourierFieldT<double>;

/// || u ||_s = ( sum_j ||u_j||_{H^1}^2 (1 + |j|^{2s}) )^{1/2}
template <class Scalar>
Scalar snorm(const FourierFieldT<Scalar>& u, double s) {
  Scalar acc = 0;
  for (Index j = -u.jmax(); j <= u.jmax(); ++j) {
    Scalar col = 0;
    for (Index l = -u.lmax(); l <= u.lmax(); ++l)
      col += (1.0 + double(l) * double(l)) * std::norm(u.coeff(j, l));
    acc += sobolev_weight(j, s) * col;
  }
  return std::sqrt(acc);
}

/// Projector onto V: the x-average u_0(t).
template <class Scalar>
TimeFunctionT<Scalar> x_average(const FourierFieldT<Scalar>& u) {
  return u.column(0);
}

/// Projector onto W: zero out the x-average column.
template <class Scalar>
FourierFieldT<Scalar> zero_x_average(const FourierFieldT<Scalar>& u) {
  FourierFieldT<Scalar> r = u;
  for (Index l = -u.lmax(); l <= u.lmax(); ++l) r.at(0, l) = std::complex<Scalar>(0);
  return r;
}

/// Embed a time function as the x-independent part of a field.
template <class Scalar>
FourierFieldT<Scalar> lift(const TimeFunctionT<Scalar>& y, Index jmax = 0) {
  FourierFieldT<Scalar> u(jmax, y.lmax());
  u.set_column(0, y);
  return u;
}

namespace detail {
template <class Scalar>
void require_in_w(const FourierFieldT<Scalar>& u, const char* who) {
  if (!u.x_mean_free())
    throw ValidationError(std::string(who) + ": input has a nonzero x-average column");
}
}  // namespace detail

/// Galerkin projector P_N: keep x-modes 1 <= |j| <= N of a field in W.
template <class Scalar>
FourierFieldT<Scalar> galerkin_project(const FourierFieldT<Scalar>& u, Index N) {
  if (N < 1) throw ValidationError("galerkin_project: N must be >= 1");
  detail::require_in_w(u, "galerkin_project");
  FourierFieldT<Scalar> r(std::min(N, u.jmax()), u.lmax());
  for (Index j = -r.jmax(); j <= r.jmax(); ++j)
    if (j != 0)
      for (Index l = -u.lmax(); l <= u.lmax(); ++l) r.at(j, l) = u.coeff(j, l);
  return r;
}

/// Complement projector: drop x-modes with |j| <= N.
template <class Scalar>
FourierFieldT<Scalar> galerkin_complement(const FourierFieldT<Scalar>& u, Index N) {
  if (N < 1) throw ValidationError("galerkin_complement: N must be >= 1");
  detail::require_in_w(u, "galerkin_complement");
  FourierFieldT<Scalar> r(u.jmax(), u.lmax());
  for (Index j = -u.jmax(); j <= u.jmax(); ++j)
    if (std::abs(j) > N)
      for (Index l = -u.lmax(); l <= u.lmax(); ++l) r.at(j, l) = u.coeff(j, l);
  return r;
}

template <class Scalar>
FourierFieldT<Scalar> time_derivative(const FourierFieldT<Scalar>& u, int order) {
  FourierFieldT<Scalar> r(u.jmax(), u.lmax());
  using Complex = std::complex<Scalar>;
  for (Index l = -u.lmax(); l <= u.lmax(); ++l) {
    Complex f(1, 0);
    for (int k = 0; k < order; ++k) f *= Complex(0, Scalar(l));
    for (Index j = -u.jmax(); j <= u.jmax(); ++j) r.at(j, l) = f * u.coeff(j, l);
  }
  return r;
}

template <class Scalar>
FourierFieldT<Scalar> space_derivative(const FourierFieldT<Scalar>& u, int order) {
  FourierFieldT<Scalar> r(u.jmax(), u.lmax());
  using Complex = std::complex<Scalar>;
  for (Index j = -u.jmax(); j <= u.jmax(); ++j) {
    Complex f(1, 0);
    for (int k = 0; k < order; ++k) f *= Complex(0, Scalar(j));
    for (Index l = -u.lmax(); l <= u.lmax(); ++l) r.at(j, l) = f * u.coeff(j, l);
  }
  return r;
}

/// Exact product of two fields by 2-D coefficient convolution.
template <class Scalar>
FourierFieldT<Scalar> multiply(const FourierFieldT<Scalar>& u, const FourierFieldT<Scalar>& v) {
  FourierFieldT<Scalar> r(u.jmax() + v.jmax(), u.lmax() + v.lmax());
  for (Index j1 = -u.jmax(); j1 <= u.jmax(); ++j1) {
    for (Index l1 = -u.lmax(); l1 <= u.lmax(); ++l1) {
      const std::complex<Scalar> c1 = u.coeff(j1, l1);
      if (c1 == std::complex<Scalar>(0)) continue;
      for (Index j2 = -v.jmax(); j2 <= v.jmax(); ++j2)
        for (Index l2 = -v.lmax(); l2 <= v.lmax(); ++l2)
          r.at(j1 + j2, l1 + l2) += c1 * v.coeff(j2, l2);
    }
  }
  return r;
}

/// Product a(t) * u, convolving in l only; support grows by a's band.
template <class Scalar>
FourierFieldT<Scalar> multiply_time(const TimeFunctionT<Scalar>& a, const FourierFieldT<Scalar>& u) {
  FourierFieldT<Scalar> r(u.jmax(), u.lmax() + a.lmax());
  for (Index j = -u.jmax(); j <= u.jmax(); ++j)
    r.set_column(j, multiply(a, u.column(j)));
  return r;
}

}  // namespace periwave
