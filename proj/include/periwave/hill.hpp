#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <optional>
#include <vector>

#include "periwave/basis.hpp"
#include "periwave/fourier.hpp"

namespace periwave {

// ---------------------------------------------------------------------------
// The periodic Hill problem  -y'' + d(t) y = lambda a(t) y  on [0, 2pi], and
// its Liouville normal form  -z'' + rho(xi) z = mu z  with mu = c^2 lambda.
// Everything below discretizes in Fourier space and diagonalizes Hermitian
// pencils; shooting never appears.
// ---------------------------------------------------------------------------

/// Average speed c = (1/2pi) int_0^{2pi} sqrt(a).  Spectrally convergent in
/// the quadrature size.
inline double average_speed(const TimeFunction& a, Index quad_points = 4096) {
  require_positive(a);
  const auto v = grid_values(a, quad_points);
  double acc = 0;
  for (Index p = 0; p < quad_points; ++p) acc += std::sqrt(v[p]);
  return acc / double(quad_points);
}

namespace detail {

// Pointwise Liouville potential from a's exact derivative series:
//   Q(t) = a_tt/(4 a^2) - 5 a_t^2/(16 a^3).
// The second constant is forced by the normal-form identity mu = c^2 lambda;
// see tests for the eigenvalue round-trip that pins it.
inline double liouville_potential_at(const TimeFunction& a, const TimeFunction& at,
                                     const TimeFunction& att, double t) {
  const double av = evaluate_at(a, t);
  const double atv = evaluate_at(at, t);
  const double attv = evaluate_at(att, t);
  return attv / (4 * av * av) - 5.0 * atv * atv / (16 * av * av * av);
}

}  // namespace detail

/// Q(t) fitted on a grid; band defaults to a comfortable multiple of a's.
inline TimeFunction liouville_potential(const TimeFunction& a, Index lmax = -1,
                                        Index grid_factor = 16) {
  require_positive(a);
  if (lmax < 0) lmax = std::max<Index>(32, 8 * a.lmax());
  const Index n = std::max<Index>(grid_factor * (2 * lmax + 1), 256);
  const TimeFunction at = derivative(a, 1), att = derivative(a, 2);
  Eigen::VectorXd vals(n);
  for (Index p = 0; p < n; ++p)
    vals[p] = detail::liouville_potential_at(a, at, att, 2 * M_PI * p / n);
  TimeFunction q = fit_from_grid(vals, lmax);
  q.symmetrize();
  return q;
}

/// Data of the Liouville substitution xi = g(t), y = z / a^{1/4}.
struct LiouvilleData {
  double c = 1.0;               // average speed
  Eigen::VectorXd psi;          // t = psi(xi) on the uniform xi grid
  Eigen::VectorXd rho_samples;  // rho on the same grid
  TimeFunction rho;             // fitted transformed potential (in xi)
  double rho_min = 0;           // inf rho
  double rho_line_avg = 0;      // (1/pi) int_0^{2pi} rho
  TimeFunction Q;               // potential part from a alone (in t)
  TimeFunction quarter_root;    // a^{1/4} (in t)

  Index grid_size() const { return psi.size(); }
  bool potential_positive(double tol = 1e-10) const { return rho_min > tol; }
};

/// Positivity margin of the transformed potential; pass iff rho_min > tol.
inline std::pair<bool, double> potential_positivity(const LiouvilleData& L, double tol = 1e-10) {
  return {L.rho_min > tol, L.rho_min};
}

/// Build the Liouville data for the pair (a, d).  psi is obtained from an
/// 8x-oversampled monotone cubic Hermite inverse of g, polished by Newton on
/// the spectral antiderivative; the interpolation error ends up dominated by
/// the eigensolver tolerance.
inline LiouvilleData liouville_transform(const TimeFunction& a, const TimeFunction& d,
                                         Index rho_lmax = 256, Index grid_points = -1) {
  require_positive(a);
  if (d.reality_defect() > 1e-13) throw ValidationError("liouville_transform: d must be real");
  LiouvilleData L;
  L.c = average_speed(a);
  L.Q = liouville_potential(a);
  if (grid_points < 0) grid_points = std::max<Index>(8 * (2 * rho_lmax + 1), 1024);
  const Index n = grid_points;

  // sqrt(a) as a spectral series (band big enough that tail is round-off)
  const Index sq_n = 4096;
  Eigen::VectorXd av = grid_values(a, sq_n);
  Eigen::VectorXd sq(sq_n);
  for (Index p = 0; p < sq_n; ++p) sq[p] = std::sqrt(av[p]);
  const TimeFunction sqa = fit_from_grid(sq, std::min<Index>(768, sq_n / 2 - 1));

  // g(t) = (1/c) int_0^t sqrt(a); termwise antiderivative
  const double s0 = sqa.coeff(0).real();
  auto g_of = [&](double t) {
    std::complex<double> acc(s0 * t, 0);
    for (Index k = 1; k <= sqa.lmax(); ++k) {
      const std::complex<double> ik(0, double(k));
      const std::complex<double> e(std::cos(k * t), std::sin(k * t));
      acc += sqa.coeff(k) * (e - 1.0) / ik + sqa.coeff(-k) * (std::conj(e) - 1.0) / (-ik);
    }
    return acc.real() / L.c;
  };
  auto gprime_of = [&](double t) { return std::max(evaluate_at(sqa, t), 1e-12) / L.c; };

  if (g_of(2 * M_PI) <= g_of(0))
    throw PositivityError("liouville_transform: g is not increasing");  // unreachable for a > 0

  // invert on the oversampled grid, then Newton-polish
  const Index ng = 8 * n;
  Eigen::VectorXd tg(ng + 1), gg(ng + 1);
  for (Index p = 0; p <= ng; ++p) {
    tg[p] = 2 * M_PI * p / ng;
    gg[p] = g_of(tg[p]);
  }
  L.psi.resize(n);
  Index hint = 0;
  for (Index i = 0; i < n; ++i) {
    const double xi = 2 * M_PI * i / n;
    while (hint + 1 < ng && gg[hint + 1] < xi) ++hint;
    // cubic Hermite on [t_hint, t_hint+1] with exact slopes dt/dxi = 1/g'
    const double x0 = gg[hint], x1 = gg[hint + 1];
    const double u = std::clamp((xi - x0) / (x1 - x0), 0.0, 1.0);
    const double m0 = (x1 - x0) / gprime_of(tg[hint]), m1 = (x1 - x0) / gprime_of(tg[hint + 1]);
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
    double t = h00 * tg[hint] + h10 * m0 + h01 * tg[hint + 1] + h11 * m1;
    for (int it = 0; it < 3; ++it) t -= (g_of(t) - xi) / gprime_of(t);
    L.psi[i] = t;
  }
  for (Index i = 1; i < n; ++i)
    if (L.psi[i] <= L.psi[i - 1])
      throw PositivityError("liouville_transform: inverse lost monotonicity");

  // rho(xi) = c^2 Q(psi) + c^2 d(psi)/a(psi)
  const TimeFunction at = derivative(a, 1), att = derivative(a, 2);
  L.rho_samples.resize(n);
  const double c2 = L.c * L.c;
  for (Index i = 0; i < n; ++i) {
    const double t = L.psi[i];
    L.rho_samples[i] = c2 * detail::liouville_potential_at(a, at, att, t) +
                       c2 * evaluate_at(d, t) / evaluate_at(a, t);
  }
  L.rho = fit_from_grid(L.rho_samples, std::min<Index>(rho_lmax, n / 2 - 1));
  L.rho.symmetrize();
  L.rho_min = L.rho_samples.minCoeff();
  L.rho_line_avg = 2.0 * L.rho_samples.mean();  // (1/pi) * 2pi * mean

  const Index nq = 1024;
  Eigen::VectorXd r4(nq);
  const auto agrid = grid_values(a, nq);
  for (Index p = 0; p < nq; ++p) r4[p] = std::pow(agrid[p], 0.25);
  L.quarter_root = fit_from_grid(r4, std::min<Index>(256, nq / 2 - 1));
  return L;
}

/// Labeled periodic spectrum: values[0] is the single bottom eigenvalue,
/// values[2l-1], values[2l] are the l-th band pair.  Eigenfunctions are real
/// (columns over the real trigonometric basis), normalized so that
/// c^{-1} int a y^2 dt = 1.
struct HillSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // (2 modes + 1) x count, real trig basis
  Index modes = 0;
  double c = 1.0;

  Index count() const { return values.size(); }
  Index bands() const { return (values.size() - 1) / 2; }
  static Index band_of(Index idx) { return (idx + 1) / 2; }
  /// 0 for the bottom eigenvalue, -1 for the lower band edge, +1 for upper.
  static int parity_of(Index idx) { return idx == 0 ? 0 : (idx % 2 == 1 ? -1 : +1); }

  double value(Index l, int parity) const { return values[index_of(l, parity)]; }
  static Index index_of(Index l, int parity) {
    return l == 0 ? 0 : 2 * l - (parity < 0 ? 1 : 0);
  }

  TimeFunction eigenfunction(Index idx) const {
    const auto T = real_trig_to_complex(modes);
    Eigen::VectorXcd z = T * vectors.col(idx).cast<std::complex<double>>();
    TimeFunction y(modes);
    y.raw() = z;
    return y;
  }

  /// Worst interlacing defect: positive when the strict/weak chain
  /// lam_0 < lam_1^- <= lam_1^+ < lam_2^- <= ... is violated.
  double interlacing_defect() const {
    double worst = 0;
    for (Index i = 0; i + 1 < count(); ++i)
      worst = std::max(worst, values[i] - values[i + 1]);
    return worst;
  }
};

namespace detail {

inline HillSpectrum pencil_spectrum(const Eigen::MatrixXcd& Ac,
                                    const std::optional<Eigen::MatrixXcd>& Bc, Index bands,
                                    Index modes, double c, double norm_scale) {
  const auto T = real_trig_to_complex(modes);
  const Eigen::MatrixXd Ar = realify(Ac, T);
  HillSpectrum spec;
  spec.modes = modes;
  spec.c = c;
  Eigen::VectorXd vals;
  Eigen::MatrixXd vecs;
  if (Bc) {
    const Eigen::MatrixXd Br = realify(*Bc, T);
    Eigen::LLT<Eigen::MatrixXd> llt(Br);
    if (llt.info() != Eigen::Success)
      throw SingularOperatorError("hill: weight matrix not positive definite (a <= 0 or underresolved)");
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Ar, Br);
    if (es.info() != Eigen::Success) throw SingularOperatorError("hill: eigensolver failed");
    vals = es.eigenvalues();
    vecs = es.eigenvectors();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ar);
    if (es.info() != Eigen::Success) throw SingularOperatorError("hill: eigensolver failed");
    vals = es.eigenvalues();
    vecs = es.eigenvectors();
  }
  const Index keep = 2 * bands + 1;
  spec.values = vals.head(keep);
  spec.vectors = vecs.leftCols(keep) * norm_scale;
  return spec;
}

}  // namespace detail

/// Spectrum of the normal form -z'' + rho z = mu z over t-modes |l| <= modes.
inline HillSpectrum eig_transformed(const TimeFunction& rho, Index bands, Index modes) {
  if (modes < 4 * bands) throw SizingError("eig_transformed: modes must be >= 4 * bands");
  if (rho.lmax() > 2 * modes)
    throw SizingError("eig_transformed: potential band exceeds twice the mode count");
  Eigen::MatrixXcd Ac = conv_matrix(rho, modes);
  for (Index l = -modes; l <= modes; ++l) Ac(l + modes, l + modes) += double(l) * double(l);
  return detail::pencil_spectrum(Ac, std::nullopt, bands, modes, 1.0, 1.0 / std::sqrt(2 * M_PI));
}

/// Spectrum of -y'' + d y = lambda a y via the generalized Hermitian pencil.
inline HillSpectrum eig_direct(const TimeFunction& a, const TimeFunction& d, Index bands,
                               Index modes) {
  require_positive(a);
  if (modes < 4 * bands) throw SizingError("eig_direct: modes must be >= 4 * bands");
  Eigen::MatrixXcd Ac = conv_matrix(d, modes);
  for (Index l = -modes; l <= modes; ++l) Ac(l + modes, l + modes) += double(l) * double(l);
  const Eigen::MatrixXcd Bc = conv_matrix(a, modes);
  const double c = average_speed(a);
  return detail::pencil_spectrum(Ac, Bc, bands, modes, c, std::sqrt(c / (2 * M_PI)));
}

/// Per-band asymptotics against the normal-form sandwich
///   (sqrt(1+rho0)-1)/l <= sqrt(mu) - l <= rho1/l,  l^2+rho0 <= mu <= l^2+rho1.
struct BandAsymptotics {
  Index l = 0;
  int parity = 0;
  double mu = 0, eta = 0, sandwich_lo = 0, sandwich_hi = 0;
  double lambda = 0, eta_tilde = 0;
  bool pass = false;
};

struct AsymptoticsReport {
  bool applicable = false;  // positivity hypothesis holds
  double rho0 = 0, rho1 = 0, c = 1;
  std::vector<BandAsymptotics> bands;
  bool all_pass() const {
    if (!applicable) return false;
    for (const auto& b : bands)
      if (!b.pass) return false;
    return true;
  }
};

/// `spec` may come from either route; values are converted with mu = c^2 lam
/// when it carries a weighted problem (c != 1).
inline AsymptoticsReport asymptotics_report(const HillSpectrum& spec, const LiouvilleData& L,
                                            double tol = 1e-6) {
  AsymptoticsReport rep;
  rep.rho0 = L.rho_min;
  rep.rho1 = L.rho_line_avg;
  rep.c = spec.c;
  rep.applicable = L.potential_positive();
  if (!rep.applicable) return rep;
  for (Index idx = 0; idx < spec.count(); ++idx) {
    BandAsymptotics b;
    b.l = HillSpectrum::band_of(idx);
    b.parity = HillSpectrum::parity_of(idx);
    const double mu = spec.c == 1.0 ? spec.values[idx] : spec.c * spec.c * spec.values[idx];
    b.mu = mu;
    b.lambda = mu / (spec.c * spec.c);
    const bool floor_ok = mu >= rep.rho0 - tol;
    if (b.l == 0) {
      b.pass = floor_ok;
    } else {
      b.eta = std::sqrt(std::max(mu, 0.0)) - double(b.l);
      b.eta_tilde = b.eta / spec.c;
      b.sandwich_lo = (std::sqrt(1.0 + rep.rho0) - 1.0) / double(b.l);
      b.sandwich_hi = rep.rho1 / double(b.l);
      const double ll = double(b.l) * double(b.l);
      const bool mu_ok = (ll + rep.rho0 - tol <= mu) && (mu <= ll + rep.rho1 + tol);
      const bool eta_ok = (b.sandwich_lo - tol <= b.eta) && (b.eta <= b.sandwich_hi + tol);
      b.pass = floor_ok && mu_ok && eta_ok;
    }
    rep.bands.push_back(b);
  }
  return rep;
}

/// Max |G - Id| of the eigenfunction Gram matrix under
/// (y,z) = c^{-1} int a y z dt, integrated by trapezoid quadrature on a fine
/// grid (independent of the eigensolver's internal normalization).
inline double weighted_gram_deviation(const HillSpectrum& spec, const TimeFunction& a, double c,
                                      Index quad_points = 4096) {
  const Index n = quad_points, k = spec.count();
  Eigen::MatrixXd Y(n, k);
  for (Index i = 0; i < k; ++i) Y.col(i) = grid_values(spec.eigenfunction(i), n);
  const Eigen::VectorXd av = grid_values(a, n);
  const Eigen::MatrixXd G =
      (2 * M_PI / (c * double(n))) * (Y.transpose() * av.asDiagonal() * Y);
  return (G - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
}

/// Cyclic sign changes of an eigenfunction on a fine grid; the l-th band
/// carries exactly 2l of them.
inline Index sign_changes(const TimeFunction& y, Index grid_points = 4096) {
  const auto v = grid_values(y, grid_points);
  const double thresh = 1e-8 * v.cwiseAbs().maxCoeff();
  std::vector<int> signs;
  for (Index p = 0; p < grid_points; ++p)
    if (std::abs(v[p]) > thresh) signs.push_back(v[p] > 0 ? 1 : -1);
  if (signs.empty()) return 0;
  Index changes = 0;
  for (size_t i = 0; i < signs.size(); ++i)
    if (signs[i] != signs[(i + 1) % signs.size()]) ++changes;
  return changes;
}

}  // namespace periwave
