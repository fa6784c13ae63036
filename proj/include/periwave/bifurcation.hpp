#pragma once

#include <Eigen/Dense>
#include <vector>

#include "periwave/fourier.hpp"
#include "periwave/nonlinearity.hpp"

namespace periwave {

// ---------------------------------------------------------------------------
// The bifurcation equation on the x-average component:
//     omega^2 v'' = eps Pi_V F(v + w),   v zero-mean in t.
// Solved by Newton on the zero-mean modes; the l = 0 residual component is
// surfaced as mean_defect instead of being forced to zero.  A bordered mode
// carries a scalar multiplier for an exactly square full-space solve.
// ---------------------------------------------------------------------------

struct QOptions {
  double tol = 1e-11;
  int max_iters = 50;
  enum class Mode { zero_mean, bordered } mode = Mode::zero_mean;
};

struct QState {
  TimeFunction v;                     // zero-mean solution
  double residual = 0;                // H^1 norm of the projected residual
  double mean_defect = 0;             // |l = 0 residual component|
  int newton_iters = 0;
  double nondegeneracy_margin = 0;    // smallest singular value of the final linearization
  std::vector<double> residual_history;
};

/// Factored linearization h -> omega^2 h'' - eps * (b0 * h), restricted to
/// zero-mean modes |l| <= lmax.  Shared by the Newton step, the implicit
/// derivative of v in w, and the chain term of the linearized operator.
class QLinearization {
 public:
  QLinearization(const TimeFunction& b0, double eps, double omega, Index lmax)
      : lmax_(lmax), J_(2 * lmax, 2 * lmax) {
    for (Index l = -lmax; l <= lmax; ++l) {
      if (l == 0) continue;
      for (Index lp = -lmax; lp <= lmax; ++lp) {
        if (lp == 0) continue;
        std::complex<double> entry = -eps * b0.coeff(l - lp);
        if (l == lp) entry += -omega * omega * double(l) * double(l);
        J_(row(l), row(lp)) = entry;
      }
    }
    lu_.compute(J_);
  }

  Index lmax() const { return lmax_; }

  TimeFunction solve(const TimeFunction& rhs) const {
    Eigen::VectorXcd b(2 * lmax_);
    for (Index l = -lmax_; l <= lmax_; ++l)
      if (l != 0) b[row(l)] = rhs.coeff(l);
    const Eigen::VectorXcd x = lu_.solve(b);
    const double rel = (J_ * x - b).norm() / std::max(b.norm(), 1e-300);
    if (!x.allFinite() || rel > 1e-8)
      throw SingularOperatorError("q-linearization: singular system (nondegeneracy failure)");
    TimeFunction h(lmax_);
    for (Index l = -lmax_; l <= lmax_; ++l)
      if (l != 0) h.at(l) = x[row(l)];
    h.symmetrize();
    h.mark_zero_mean();
    return h;
  }

  double smallest_singular_value() const {
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(J_).singularValues().minCoeff();
  }

 private:
  Index row(Index l) const { return l < 0 ? l + lmax_ : l + lmax_ - 1; }
  Index lmax_;
  Eigen::MatrixXcd J_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

namespace detail {

// Projected residual G(v) = omega^2 v'' - eps Pi_V F(v + w) on |l| <= lmax.
// *mean_defect receives the signed l = 0 component (real by symmetry).
inline TimeFunction q_residual(const NonlinearitySpec& f, double eps, double omega,
                               const FourierField& w, const TimeFunction& v, Index lmax,
                               double* mean_defect) {
  const FourierField u = lift(v, w.jmax()) + w;
  const auto [js, ls] = composition_support(f, u);
  (void)js;
  const TimeFunction fv = x_average(evaluate_nonlinearity(f, u, 0, std::min(ls, 2 * lmax)));
  TimeFunction g = omega * omega * derivative(v, 2) - eps * fv;
  g = g.resized(lmax);
  if (mean_defect) *mean_defect = g.coeff(0).real();
  g.at(0) = 0;
  return g;
}

inline TimeFunction q_b0(const NonlinearitySpec& f, const FourierField& w, const TimeFunction& v,
                         Index lmax) {
  const FourierField u = lift(v, w.jmax()) + w;
  const auto [js, ls] = composition_support(f, u);
  (void)js;
  return x_average(nonlinearity_derivative(f, u, 0, std::min(ls, 4 * lmax)));
}

}  // namespace detail

/// Smallest singular value of h -> omega^2 h'' - eps f0'(v) h on zero-mean
/// modes; positive values certify discrete nondegeneracy.
inline double nondegeneracy_margin(const TimeFunction& v, const NonlinearitySpec& f, double eps,
                                   double omega, Index lmax) {
  const NonlinearitySpec f0 = f.x_average_part();
  const TimeFunction b0 = detail::q_b0(f0, FourierField(0, v.lmax()), v, lmax);
  return QLinearization(b0, eps, omega, lmax).smallest_singular_value();
}

/// Newton solve of the bifurcation equation at fixed (eps, omega, w).
inline QState solve_q(const NonlinearitySpec& f, double eps, double omega, const FourierField& w,
                      const TimeFunction& v_init, Index lmax, const QOptions& opts = {}) {
  QState st;
  st.v = v_init.resized(lmax);
  st.v.mark_zero_mean();

  if (opts.mode == QOptions::Mode::zero_mean) {
    for (int it = 0; it < opts.max_iters; ++it) {
      double signed_defect = 0;
      const TimeFunction g = detail::q_residual(f, eps, omega, w, st.v, lmax, &signed_defect);
      st.mean_defect = std::abs(signed_defect);
      st.residual = h1_norm(g);
      st.residual_history.push_back(st.residual);
      st.newton_iters = it + 1;
      if (st.residual < opts.tol) {
        const TimeFunction b0 = detail::q_b0(f, w, st.v, lmax);
        st.nondegeneracy_margin = QLinearization(b0, eps, omega, lmax).smallest_singular_value();
        return st;
      }
      const TimeFunction b0 = detail::q_b0(f, w, st.v, lmax);
      const QLinearization lin(b0, eps, omega, lmax);
      st.v = st.v - lin.solve(g);  // v <- v - J^{-1} G
      st.v.symmetrize();
      st.v.mark_zero_mean();
    }
    throw ConvergenceError("solve_q: Newton did not reach tolerance (iteration cap)");
  }

  // bordered mode: unknowns (v including l = 0, nu); rows: all modes with the
  // multiplier feeding the l = 0 equation, plus the constraint v_0 = 0.
  const Index dim = 2 * lmax + 2;
  Eigen::VectorXcd unknowns = Eigen::VectorXcd::Zero(dim);
  for (Index l = -lmax; l <= lmax; ++l) unknowns[l + lmax] = st.v.coeff(l);
  for (int it = 0; it < opts.max_iters; ++it) {
    TimeFunction v(lmax);
    for (Index l = -lmax; l <= lmax; ++l) v.at(l) = unknowns[l + lmax];
    const std::complex<double> nu = unknowns[dim - 1];
    double signed_defect = 0;
    TimeFunction g = detail::q_residual(f, eps, omega, w, v, lmax, &signed_defect);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dim);
    for (Index l = -lmax; l <= lmax; ++l)
      if (l != 0) rhs[l + lmax] = g.coeff(l);
    rhs[lmax] = std::complex<double>(signed_defect, 0) - nu;
    rhs[dim - 1] = v.coeff(0);
    st.residual = h1_norm(g);
    st.mean_defect = std::abs(nu);
    st.residual_history.push_back(st.residual);
    st.newton_iters = it + 1;
    if (st.residual < opts.tol && std::abs(rhs[lmax]) < opts.tol) {
      st.v = v;
      st.v.symmetrize();
      st.v.mark_zero_mean();
      const TimeFunction b0 = detail::q_b0(f, w, st.v, lmax);
      st.nondegeneracy_margin = QLinearization(b0, eps, omega, lmax).smallest_singular_value();
      return st;
    }
    const TimeFunction b0 = detail::q_b0(f, w, v, lmax);
    Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(dim, dim);
    for (Index l = -lmax; l <= lmax; ++l)
      for (Index lp = -lmax; lp <= lmax; ++lp) {
        std::complex<double> entry = -eps * b0.coeff(l - lp);
        if (l == lp) entry += -omega * omega * double(l) * double(l);
        J(l + lmax, lp + lmax) = entry;
      }
    J(lmax, dim - 1) = -1.0;  // d(l=0 row)/d nu
    J(dim - 1, lmax) = 1.0;   // constraint d(v_0)/d v_0
    unknowns -= J.partialPivLu().solve(rhs);
  }
  throw ConvergenceError("solve_q: bordered Newton did not reach tolerance (iteration cap)");
}

/// Implicit derivative of the bifurcation branch: solves
///   (omega^2 d_tt - eps Pi_V f'(v+w) .) Dv[h] = eps Pi_V (f'(v+w) h)
/// on zero-mean functions, for h in W.
inline TimeFunction dv_dw(const NonlinearitySpec& f, double eps, double omega,
                          const FourierField& w, const TimeFunction& v, const FourierField& h,
                          Index lmax) {
  const FourierField u = lift(v, w.jmax()) + w;
  const auto [js, ls] = composition_support(f, u);
  const FourierField b = nonlinearity_derivative(f, u, std::min<Index>(js, h.jmax() + 1),
                                                 std::min<Index>(ls, 4 * lmax));
  TimeFunction rhs = eps * x_average(multiply(b, h)).resized(lmax);
  rhs.at(0) = 0;
  const TimeFunction b0 = detail::q_b0(f, w, v, lmax);
  return QLinearization(b0, eps, omega, lmax).solve(rhs);
}

}  // namespace periwave
