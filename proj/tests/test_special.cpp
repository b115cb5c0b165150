#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "ttorsion/special.hpp"

using namespace ttorsion;

TEST_CASE("euler_gamma matches the harmonic-series limit") {
  // The asymptotic estimate at m = 1e6 carries an error well below 1e-13.
  CHECK(std::abs(euler_gamma_series(1000000) - euler_gamma) < 1e-13);
}

TEST_CASE("gamma function reference values") {
  const double pi = std::numbers::pi;
  CHECK(std::abs(gamma_fn({0.5, 0.0}).real() - std::sqrt(pi)) < 1e-13);
  CHECK(std::abs(gamma_fn({1.0, 0.0}).real() - 1.0) < 1e-14);
  CHECK(std::abs(gamma_fn({5.0, 0.0}).real() - 24.0) < 1e-12);
  CHECK(std::abs(gamma_fn({-0.5, 0.0}).real() + 2.0 * std::sqrt(pi)) < 1e-12);
  // Functional equation Gamma(z+1) = z Gamma(z) off the real axis.
  std::complex<double> z{0.3, 0.7};
  CHECK(std::abs(gamma_fn(z + 1.0) - z * gamma_fn(z)) < 1e-13);
}

TEST_CASE("exponential integral against the convergent series") {
  // E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!) for small x.
  for (double x : {0.05, 0.3, 0.9}) {
    double series = -euler_gamma - std::log(x);
    double term = 1.0;
    for (int k = 1; k <= 40; ++k) {
      term *= -x / k;
      series -= term / k;
    }
    CHECK(std::abs(exp_integral_e1(x) - series) < 1e-14);
  }
  // Large argument: bracket with e^{-x}/(x+1) < E1(x) < e^{-x}/x.
  for (double x : {5.0, 20.0, 120.0}) {
    double v = exp_integral_e1(x);
    CHECK(v > std::exp(-x) / (x + 1.0));
    CHECK(v < std::exp(-x) / x);
  }
}

TEST_CASE("riemann zeta reference values") {
  const double pi = std::numbers::pi;
  CHECK(std::abs(riemann_zeta({2.0, 0.0}).real() - pi * pi / 6.0) < 1e-13);
  CHECK(std::abs(riemann_zeta({4.0, 0.0}).real() - pi * pi * pi * pi / 90.0) < 1e-13);
  CHECK(std::abs(riemann_zeta({3.0, 0.0}).real() - 1.2020569031595942854) < 1e-13);
  CHECK(std::abs(riemann_zeta({0.5, 0.0}).real() + 1.4603545088095868129) < 1e-12);
  CHECK(std::abs(riemann_zeta({-1.0, 0.0}).real() + 1.0 / 12.0) < 1e-12);
}

TEST_CASE("zeta continuation constants") {
  CHECK(zeta_at_zero == -0.5);
  CHECK(std::abs(zeta_prime_at_zero() + 0.5 * std::log(2.0 * std::numbers::pi)) < 1e-15);
  // Slope consistency: (zeta(h) - zeta(0)) / h approaches zeta'(0).
  const double h = 1e-4;
  const double slope = (riemann_zeta({h, 0.0}).real() - zeta_at_zero) / h;
  CHECK(std::abs(slope - zeta_prime_at_zero()) < 1e-3);
}
