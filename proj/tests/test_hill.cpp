#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <periwave/hill.hpp>
#include <random>

using namespace periwave;

namespace {

std::mt19937_64 rng(0x5eed0002);

TimeFunction two_plus_cos() {
  return TimeFunction::constant(2.0) + TimeFunction::cosine(1, 1.0);
}

// Second-order finite differences on an n-point periodic grid; completely
// independent of the Fourier pencil route.
Eigen::VectorXd fd_hill_eigenvalues(const TimeFunction& a, const TimeFunction& d, Index n,
                                    Index count) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  const double h = 2 * M_PI / n;
  const auto av = grid_values(a, n);
  const auto dv = grid_values(d, n);
  for (Index p = 0; p < n; ++p) {
    A(p, p) = 2.0 / (h * h) + dv[p];
    A(p, (p + 1) % n) = -1.0 / (h * h);
    A(p, (p + n - 1) % n) = -1.0 / (h * h);
    B(p, p) = av[p];
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B);
  return es.eigenvalues().head(count);
}

}  // namespace

TEST_CASE("average speed") {
  CHECK(average_speed(TimeFunction::constant(1.0)) == doctest::Approx(1.0).epsilon(1e-14));

  // a = (2 + cos t)^2: sqrt a = 2 + cos t has mean 2
  TimeFunction a2 = multiply(two_plus_cos(), two_plus_cos());
  CHECK(average_speed(a2) == doctest::Approx(2.0).epsilon(1e-13));

  // Richardson self-convergence of the quadrature
  const double c1 = average_speed(two_plus_cos(), 4096);
  const double c2 = average_speed(two_plus_cos(), 8192);
  CHECK(std::abs(c1 - c2) < 1e-12);
}

TEST_CASE("Liouville potential") {
  CHECK(grid_max_abs(liouville_potential(TimeFunction::constant(3.0))) < 1e-13);

  // a = e^{eps cos t}: leading term -(eps/4) cos t
  const double eps = 1e-3;
  const Index n = 512;
  Eigen::VectorXd vals(n);
  for (Index p = 0; p < n; ++p) vals[p] = std::exp(eps * std::cos(2 * M_PI * p / n));
  TimeFunction a = fit_from_grid(vals, 24);
  TimeFunction q = liouville_potential(a);
  TimeFunction lead = TimeFunction::cosine(1, -eps / 4);
  CHECK(grid_max_abs(q - lead.resized(q.lmax())) < eps * eps);

  // grid refinement: pointwise match within 1e-10
  TimeFunction qc = liouville_potential(two_plus_cos(), 64, 16);
  TimeFunction qf = liouville_potential(two_plus_cos(), 64, 160);
  CHECK(grid_max_abs(qc - qf) < 1e-10);
}

TEST_CASE("Liouville transform on constant speed") {
  // a = 1, d = m: identity substitution, rho = m
  const double m = 0.7;
  LiouvilleData L = liouville_transform(TimeFunction::constant(1.0), TimeFunction::constant(m));
  CHECK(L.c == doctest::Approx(1.0).epsilon(1e-13));
  for (Index i = 0; i < L.grid_size(); ++i)
    CHECK(L.psi[i] == doctest::Approx(2 * M_PI * i / L.grid_size()).epsilon(1e-10));
  CHECK(L.rho_min == doctest::Approx(m).epsilon(1e-11));
  CHECK(L.rho_line_avg == doctest::Approx(2 * m).epsilon(1e-11));
  CHECK(potential_positivity(L).first);

  // a = 1, d = cos t: rho(xi) = cos xi, positivity hypothesis fails
  LiouvilleData Lc = liouville_transform(TimeFunction::constant(1.0), TimeFunction::cosine(1, 1.0));
  CHECK(grid_max_abs(Lc.rho - TimeFunction::cosine(1, 1.0).resized(Lc.rho.lmax())) < 1e-9);
  auto [pass, margin] = potential_positivity(Lc);
  CHECK(!pass);
  CHECK(margin == doctest::Approx(-1.0).epsilon(1e-6));

  // a = 2 + cos t, d = 1: positive margin expected
  LiouvilleData Lp = liouville_transform(two_plus_cos(), TimeFunction::constant(1.0));
  CHECK(potential_positivity(Lp).first);
  CHECK(Lp.rho_min > 0.3);
}

TEST_CASE("normal-form spectrum") {
  // rho = m: mu_0 = m, mu_l+- = l^2 + m
  const double m = 1.3;
  HillSpectrum s = eig_transformed(TimeFunction::constant(m), 8, 32);
  CHECK(std::abs(s.values[0] - m) < 1e-10);
  for (Index l = 1; l <= 8; ++l) {
    CHECK(std::abs(s.value(l, -1) - (l * l + m)) < 1e-10);
    CHECK(std::abs(s.value(l, +1) - (l * l + m)) < 1e-10);
  }

  HillSpectrum z = eig_transformed(TimeFunction(0), 6, 24);
  CHECK(std::abs(z.values[0]) < 1e-12);
  for (Index l = 1; l <= 6; ++l) CHECK(std::abs(z.value(l, -1) - l * l) < 1e-11);

  // Mathieu-type rho = 1 + cos 2 xi against a 4x larger matrix
  TimeFunction mathieu = TimeFunction::constant(1.0) + TimeFunction::cosine(2, 1.0);
  HillSpectrum coarse = eig_transformed(mathieu, 6, 24);
  HillSpectrum fine = eig_transformed(mathieu, 6, 96);
  for (Index i = 0; i < coarse.count(); ++i)
    CHECK(std::abs(coarse.values[i] - fine.values[i]) < 1e-8);

  CHECK_THROWS_AS(eig_transformed(mathieu, 8, 16), SizingError);
}

TEST_CASE("direct spectrum, constant coefficients") {
  HillSpectrum s = eig_direct(TimeFunction::constant(1.0), TimeFunction::constant(2.5), 10, 64);
  CHECK(std::abs(s.values[0] - 2.5) < 1e-10);
  for (Index l = 1; l <= 10; ++l) {
    CHECK(std::abs(s.value(l, -1) - (l * l + 2.5)) < 1e-9);
    CHECK(std::abs(s.value(l, +1) - (l * l + 2.5)) < 1e-9);
  }

  HillSpectrum z = eig_direct(TimeFunction::constant(1.0), TimeFunction(0), 10, 64);
  CHECK(std::abs(z.values[0]) < 1e-11);
  for (Index l = 1; l <= 10; ++l) CHECK(std::abs(z.value(l, +1) - l * l) < 1e-9);
}

TEST_CASE("direct spectrum against finite differences") {
  TimeFunction a = two_plus_cos();
  TimeFunction d = TimeFunction::constant(1.0);
  HillSpectrum s = eig_direct(a, d, 3, 32);
  Eigen::VectorXd fd = fd_hill_eigenvalues(a, d, 800, s.count());
  for (Index i = 0; i < s.count(); ++i)
    CHECK(std::abs(s.values[i] - fd[i]) / (1 + std::abs(s.values[i])) < 2e-3);
}

TEST_CASE("Liouville round-trip mu = c^2 lambda") {
  std::vector<std::pair<TimeFunction, TimeFunction>> battery;
  battery.emplace_back(two_plus_cos(), TimeFunction::constant(1.0));
  battery.emplace_back(multiply(two_plus_cos(), two_plus_cos()),
                       TimeFunction::constant(0.5) + TimeFunction::sine(1, 0.3));
  battery.emplace_back(TimeFunction::constant(1.0) + TimeFunction::cosine(1, 0.3) +
                           TimeFunction::sine(2, 0.1),
                       TimeFunction::constant(0.7) + TimeFunction::cosine(3, 0.2));

  for (const auto& [a, d] : battery) {
    const Index bands = 20;
    HillSpectrum direct = eig_direct(a, d, bands, 4 * bands + 16);
    LiouvilleData L = liouville_transform(a, d, /*rho_lmax=*/128);
    HillSpectrum norm = eig_transformed(L.rho, bands, 4 * bands + 16);
    const double c2 = direct.c * direct.c;
    for (Index i = 0; i < direct.count(); ++i) {
      const double lam = direct.values[i];
      CHECK(std::abs(lam - norm.values[i] / c2) / (1 + std::abs(lam)) <= 1e-7);
    }
  }
}

TEST_CASE("asymptotic sandwich") {
  // rho = m: eta_l = sqrt(l^2+m) - l sits inside the sandwich
  const double m = 0.9;
  LiouvilleData L = liouville_transform(TimeFunction::constant(1.0), TimeFunction::constant(m));
  HillSpectrum s = eig_transformed(TimeFunction::constant(m), 12, 48);
  AsymptoticsReport rep = asymptotics_report(s, L, 1e-9);
  CHECK(rep.applicable);
  CHECK(rep.all_pass());
  for (const auto& b : rep.bands)
    if (b.l > 0)
      CHECK(b.eta == doctest::Approx(std::sqrt(b.l * b.l + m) - b.l).epsilon(1e-8));

  // degenerate rho = 0: hypothesis fails, report flags inapplicability
  LiouvilleData L0 = liouville_transform(TimeFunction::constant(1.0), TimeFunction(0));
  HillSpectrum s0 = eig_transformed(TimeFunction(0), 4, 16);
  AsymptoticsReport rep0 = asymptotics_report(s0, L0);
  CHECK(!rep0.applicable);
  CHECK(!rep0.all_pass());

  // a = 2 + cos t, d = 1: all bands l <= 30 pass within 1e-6
  TimeFunction a = two_plus_cos(), d = TimeFunction::constant(1.0);
  LiouvilleData Lp = liouville_transform(a, d);
  HillSpectrum sp = eig_transformed(Lp.rho, 30, 128);
  AsymptoticsReport repp = asymptotics_report(sp, Lp, 1e-6);
  CHECK(repp.all_pass());
  // doubled-resolution oracle: values stable
  HillSpectrum sp2 = eig_transformed(Lp.rho, 30, 256);
  for (Index i = 0; i < sp.count(); ++i) CHECK(std::abs(sp.values[i] - sp2.values[i]) < 1e-8);
}

TEST_CASE("weighted Gram orthonormality") {
  HillSpectrum t1 = eig_direct(TimeFunction::constant(1.0), TimeFunction(0), 8, 32);
  CHECK(weighted_gram_deviation(t1, TimeFunction::constant(1.0), t1.c) < 1e-12);

  HillSpectrum t2 = eig_direct(TimeFunction::constant(1.0), TimeFunction::constant(1.7), 8, 32);
  CHECK(weighted_gram_deviation(t2, TimeFunction::constant(1.0), t2.c) < 1e-12);

  TimeFunction a = two_plus_cos(), d = TimeFunction::constant(1.0);
  HillSpectrum t3 = eig_direct(a, d, 20, 256);
  CHECK(weighted_gram_deviation(t3, a, t3.c) < 1e-8);
}

TEST_CASE("interlacing") {
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int rep = 0; rep < 5; ++rep) {
    TimeFunction a = TimeFunction::constant(1.5) + TimeFunction::cosine(1, u(rng)) +
                     TimeFunction::sine(2, u(rng));
    TimeFunction d = TimeFunction::constant(0.8) + TimeFunction::cosine(1, u(rng)) +
                     TimeFunction::sine(3, u(rng));
    HillSpectrum s = eig_direct(a, d, 15, 64);
    CHECK(s.interlacing_defect() < 1e-9);
  }
}

TEST_CASE("first-order response to a constant potential shift") {
  TimeFunction a = two_plus_cos();
  TimeFunction d = TimeFunction::constant(1.0) + TimeFunction::cosine(1, 0.3);
  const Index bands = 2, modes = 32;
  HillSpectrum base = eig_direct(a, d, bands, modes);

  const double delta = 1e-5;
  HillSpectrum shifted = eig_direct(a, d + TimeFunction::constant(delta), bands, modes);

  // perturbation theory: d lambda / d delta = (y^T y) / (y^T B y)
  const auto T = real_trig_to_complex(modes);
  const Eigen::MatrixXd Br = realify(conv_matrix(a, modes), T);
  for (Index i = 0; i < base.count(); ++i) {
    const Eigen::VectorXd y = base.vectors.col(i);
    const double pred = y.dot(y) / y.dot(Br * y);
    const double slope = (shifted.values[i] - base.values[i]) / delta;
    CHECK(std::abs(slope - pred) / std::abs(pred) < 0.05);
  }
}

TEST_CASE("eigenvalue continuity in the potential") {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int rep = 0; rep < 5; ++rep) {
    TimeFunction p1 = TimeFunction::constant(1.0 + u(rng)) + TimeFunction::cosine(1, u(rng)) +
                      TimeFunction::sine(2, u(rng));
    TimeFunction p2 = TimeFunction::constant(1.0 + u(rng)) + TimeFunction::cosine(2, u(rng)) +
                      TimeFunction::sine(1, u(rng));
    HillSpectrum s1 = eig_transformed(p1, 8, 32);
    HillSpectrum s2 = eig_transformed(p2, 8, 32);
    const double bound = grid_max_abs(p2 - p1) + 1e-10;
    for (Index i = 0; i < s1.count(); ++i) CHECK(std::abs(s2.values[i] - s1.values[i]) <= bound);
  }
}

TEST_CASE("band eigenfunctions have 2l sign changes") {
  TimeFunction a = two_plus_cos(), d = TimeFunction::constant(1.0);
  HillSpectrum s = eig_direct(a, d, 6, 48);
  for (Index idx = 0; idx < s.count(); ++idx)
    CHECK(sign_changes(s.eigenfunction(idx)) == 2 * HillSpectrum::band_of(idx));
}

TEST_CASE("norm equivalence constants plateau") {
  // sum_l (lambda_l + 1) |hhat_l|^2 is equivalent to the H^1 norm squared; the
  // empirical constants must not drift when the mode count doubles.
  TimeFunction a = two_plus_cos(), d = TimeFunction::constant(1.0);
  auto ratio_range = [&](Index modes) {
    const auto T = real_trig_to_complex(modes);
    Eigen::MatrixXcd Ac = conv_matrix(d, modes);
    for (Index l = -modes; l <= modes; ++l) Ac(l + modes, l + modes) += double(l) * double(l);
    const Eigen::MatrixXd Ar = realify(Ac, T);
    const Eigen::MatrixXd Br = realify(conv_matrix(a, modes), T);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Ar, Br);
    std::normal_distribution<double> g(0.0, 1.0);
    double lo = 1e300, hi = 0;
    for (int rep = 0; rep < 24; ++rep) {
      TimeFunction h(modes / 2);
      for (Index l = -h.lmax(); l <= h.lmax(); ++l) h.at(l) = {g(rng), g(rng)};
      h.symmetrize();
      const Eigen::VectorXcd w = T.adjoint() * h.resized(modes).raw();
      const Eigen::VectorXcd hhat =
          es.eigenvectors().transpose().cast<std::complex<double>>() * (Br * w);
      double acc = 0;
      for (Index i = 0; i < hhat.size(); ++i) acc += (es.eigenvalues()[i] + 1.0) * std::norm(hhat[i]);
      const double hn = h1_norm(h);
      const double r = acc / (hn * hn);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    return std::make_pair(lo, hi);
  };
  auto [lo1, hi1] = ratio_range(32);
  auto [lo2, hi2] = ratio_range(64);
  CHECK(hi1 / lo1 < 50.0);
  CHECK(hi2 <= hi1 * 1.5);
  CHECK(lo2 >= lo1 / 1.5);
}
