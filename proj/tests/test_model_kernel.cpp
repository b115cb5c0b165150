#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ttorsion/clifford.hpp"
#include "ttorsion/model_kernel.hpp"
#include "ttorsion/special.hpp"

using namespace ttorsion;

TEST_CASE("local_density equals trace_form across random spectra") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> pick_n(1, 4);
  std::uniform_real_distribution<double> pick_a(0.1, 20.0);
  std::uniform_real_distribution<double> pick_u(0.05, 8.0);
  double worst = 0.0;
  for (int s = 0; s < 500; ++s) {
    int n = pick_n(rng);
    std::vector<double> a(n);
    for (double& v : a) v = pick_a(rng);
    CurvatureSpectrum spec(a, 1.0, 1);
    double u = pick_u(rng);
    worst = std::max(worst, std::abs(local_density(u, spec) - trace_form(u, spec)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("Laurent coefficients match the closed forms and the u->0 limit") {
  CurvatureSpectrum spec({1.7, 5.2}, 2.3, 1);
  auto lc = laurent_coeffs(spec);
  const double det = spec.det_over_2pi();
  CHECK(lc.alpha_minus1 ==
        doctest::Approx(-det * (1.0 / 1.7 + 1.0 / 5.2) * spec.vol).epsilon(1e-14));
  CHECK(lc.alpha_0 == doctest::Approx(det * spec.vol).epsilon(1e-14));  // n/2 = 1

  // Numeric limit: u * vol * density -> alpha_minus1 and the subtracted
  // remainder -> alpha_0 linearly in u.
  for (double u : {1e-3, 1e-4}) {
    double f = spec.vol * local_density(u, spec);
    CHECK(std::abs(u * f - lc.alpha_minus1) < (std::abs(lc.alpha_0) + 1.0) * u);
    CHECK(std::abs(f - lc.alpha_minus1 / u - lc.alpha_0) < 10.0 * u);
  }
}

TEST_CASE("kappa coefficients reproduce the model density expansion") {
  // sum_j u^{j-n} kappa_j / 2^j must converge to e^{u omega} det(a) / prod(1-e^{-ua})
  // with an O(u^{jmax+1-n}) remainder.
  CurvatureSpectrum spec({0.9, 3.1}, 1.0, 1);
  SpinorSpace space(2);
  const int jmax = 4;
  auto kappa = kappa_coefficients(spec, jmax);
  REQUIRE(static_cast<int>(kappa.size()) == jmax + 1);
  double det_a = spec.a[0] * spec.a[1];
  for (double u : {0.04, 0.02, 0.01}) {
    Eigen::MatrixXcd lhs = exp_omega_d(space, spec.a, u) * det_a /
                           ((1.0 - std::exp(-u * spec.a[0])) * (1.0 - std::exp(-u * spec.a[1])));
    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(space.dim, space.dim);
    double scale = 1.0;
    for (int j = 0; j <= jmax; ++j)
      rhs += std::pow(u, j - 2) / std::pow(2.0, j) * kappa[static_cast<size_t>(j)].mat;
    double err = (lhs - rhs).cwiseAbs().maxCoeff();
    CHECK(err < 20.0 * std::pow(u, jmax - 1));  // remainder order u^{jmax+1-n}
    (void)scale;
  }
  // Exact path agrees with the double path.
  std::vector<Rational> ar{rational_from_double(0.9), rational_from_double(3.1)};
  auto kr = kappa_coefficients_rat(2, ar, jmax);
  for (int j = 0; j <= jmax; ++j) {
    double err = (kr[static_cast<size_t>(j)].to_complex() - kappa[static_cast<size_t>(j)].mat)
                     .cwiseAbs()
                     .maxCoeff();
    CHECK(err < 1e-12);
  }
}

TEST_CASE("Mellin transform reproduces zeta values") {
  CHECK(std::abs(riemann_zeta_mellin({2.0, 0.0}).real() - std::numbers::pi * std::numbers::pi / 6.0) <
        1e-10);
  for (double z : {1.5, 2.5, 3.0, 4.0}) {
    CHECK(std::abs(riemann_zeta_mellin({z, 0.0}).real() - riemann_zeta({z, 0.0}).real()) < 1e-9);
  }
}

TEST_CASE("zeta_hat derivative closed form, product rule, and numeric slope agree") {
  std::mt19937_64 rng(32);
  std::uniform_int_distribution<int> pick_n(1, 4);
  std::uniform_real_distribution<double> pick_a(0.1, 20.0);
  std::uniform_real_distribution<double> pick_vol(0.2, 5.0);
  std::uniform_int_distribution<int> pick_rank(1, 3);
  for (int s = 0; s < 50; ++s) {
    int n = pick_n(rng);
    std::vector<double> a(n);
    for (double& v : a) v = pick_a(rng);
    CurvatureSpectrum spec(a, pick_vol(rng), pick_rank(rng));
    const double closed = zeta_hat_prime_zero(spec);
    const double scale = std::max(std::abs(closed), 1e-2 * spec.det_over_2pi() * spec.vol);

    const double h = 4e-3;
    auto central = [&](double step) {
      return (zeta_hat(step, spec) - zeta_hat(-step, spec)) / (2.0 * step);
    };
    const double numeric = (4.0 * central(h / 2) - central(h)) / 3.0;
    CHECK(std::abs(numeric - closed) / scale < 1e-6);
    CHECK(std::abs(zeta_hat_prime_zero_product_rule(spec) - closed) / scale < 1e-10);
  }
}

TEST_CASE("theorem1_rhs closed form") {
  CurvatureSpectrum ref({2.0 * std::numbers::pi}, 1.0, 1);
  for (int p : {8, 16, 32, 64}) {
    CHECK(theorem1_rhs(ref, p) == doctest::Approx(0.5 * p * std::log(p)).epsilon(1e-14));
  }
  CurvatureSpectrum spec({1.2, 4.0}, 3.0, 2);
  const double det = spec.det_over_2pi();
  const int p = 5;
  const double expect = 0.5 * 2 * p * p * det * 3.0 * (2.0 * std::log(p) + std::log(det));
  CHECK(theorem1_rhs(spec, p) == doctest::Approx(expect).epsilon(1e-14));
}
