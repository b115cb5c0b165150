#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "ttorsion/errors.hpp"
#include "ttorsion/quadrature.hpp"

using namespace ttorsion;

TEST_CASE("NeumaierSum survives cancellation that breaks naive sums") {
  NeumaierSum s;
  s.add(1.0);
  s.add(1e100);
  s.add(1.0);
  s.add(-1e100);
  CHECK(s.value() == 2.0);

  // Harmonic-style alternating mix summed forwards and backwards.
  std::vector<double> terms;
  for (int k = 1; k <= 20000; ++k) terms.push_back((k % 2 ? 1.0 : -1.0) / k);
  NeumaierSum fwd, bwd;
  for (size_t i = 0; i < terms.size(); ++i) fwd.add(terms[i]);
  for (size_t i = terms.size(); i-- > 0;) bwd.add(terms[i]);
  CHECK(std::abs(fwd.value() - bwd.value()) < 1e-15);
}

TEST_CASE("Gauss rules integrate polynomials to machine precision") {
  auto& r15 = detail::gauss_rule_15();
  auto& r30 = detail::gauss_rule_30();
  // A 15-point rule is exact through degree 29; 30-point through degree 59.
  auto moment = [](const detail::GaussRule& rule, int k) {
    double acc = 0;
    for (size_t i = 0; i < rule.nodes.size(); ++i)
      acc += rule.weights[i] * std::pow(rule.nodes[i], k);
    return acc;
  };
  for (int k = 0; k <= 29; ++k) {
    double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
    CHECK(std::abs(moment(r15, k) - exact) < 1e-13);
  }
  for (int k = 0; k <= 59; ++k) {
    double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
    CHECK(std::abs(moment(r30, k) - exact) < 1e-13);
  }
}

TEST_CASE("adaptive integration on closed-form references") {
  const double pi = std::numbers::pi;
  CHECK(std::abs(adaptive_integrate([](double x) { return std::exp(x); }, 0.0, 3.0, 1e-12) -
                 (std::exp(3.0) - 1.0)) < 1e-11);
  CHECK(std::abs(adaptive_integrate([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0,
                                    1e-13) -
                 pi / 4.0) < 1e-12);
  CHECK(std::abs(adaptive_integrate([](double x) { return std::sin(40.0 * x); }, 0.0, pi, 1e-12) -
                 (1.0 - std::cos(40.0 * pi)) / 40.0) < 1e-11);
  // Sharp peak forces subdivision.
  const double peaked =
      adaptive_integrate([](double x) { return 1.0 / (1e-6 + (x - 0.37) * (x - 0.37)); }, 0.0,
                         1.0, 1e-9);
  const double exact = (std::atan((1.0 - 0.37) / 1e-3) + std::atan(0.37 / 1e-3)) / 1e-3;
  CHECK(std::abs(peaked - exact) < 1e-6 * exact);
}

TEST_CASE("complex-valued integrands accumulate componentwise") {
  auto val = adaptive_integrate(
      [](double x) { return std::complex<double>(std::cos(x), std::sin(x)); }, 0.0, 1.0, 1e-13);
  CHECK(std::abs(val.real() - std::sin(1.0)) < 1e-12);
  CHECK(std::abs(val.imag() - (1.0 - std::cos(1.0))) < 1e-12);
}

TEST_CASE("unreachable tolerance raises certification_error") {
  // A discontinuity denies convergence of the embedded error estimate at
  // tolerances near machine epsilon, so the panel recursion must give up
  // loudly instead of looping.
  CHECK_THROWS_AS(adaptive_integrate([](double x) { return x < 0.5 ? 0.0 : 1.0; }, 0.0, 1.0,
                                     1e-300, 8),
                  certification_error);
}
