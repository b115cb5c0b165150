#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "ttorsion/errors.hpp"
#include "ttorsion/fd_oracle.hpp"
#include "ttorsion/landau.hpp"

using namespace ttorsion;

namespace {

const double kTwoPi = 2.0 * std::numbers::pi;
const double kInf = std::numeric_limits<double>::infinity();

TorusModel model_n1() {
  return TorusModel(CurvatureSpectrum({kTwoPi}, 1.0, 1), ThreeForm(1));
}

TorusModel model_n2(double b) {
  ThreeForm B(2);
  if (b != 0.0) B.set(0, 1, 2, b);
  return TorusModel(CurvatureSpectrum({kTwoPi, kTwoPi}, 1.0, 1), B);
}

// Flat ascending eigenvalue list (with multiplicity) from the ladder path.
std::vector<double> ladder_levels(const TorusModel& model, int p, int count) {
  SpectralData data = landau_spectrum(model, p, 10, kInf);
  std::vector<double> flat;
  for (const auto& e : data.entries) {
    double total = 0;
    for (double w : e.mult) total += w;
    const int copies = static_cast<int>(std::lround(total));
    for (int c = 0; c < copies && static_cast<int>(flat.size()) < count; ++c)
      flat.push_back(e.lambda);
  }
  REQUIRE(static_cast<int>(flat.size()) == count);
  return flat;
}

double mean_abs_err(const std::vector<double>& got, const std::vector<double>& want) {
  REQUIRE(got.size() >= want.size());
  double s = 0;
  for (size_t i = 0; i < want.size(); ++i) s += std::abs(got[i] - want[i]);
  return s / static_cast<double>(want.size());
}

}  // namespace

TEST_CASE("distinct_levels clusters close values") {
  std::vector<double> vals{0.0, 1e-12, 5.0, 5.0 + 1e-9, 5.0 + 2e-9, 11.0};
  auto levels = distinct_levels(vals, 1e-6);
  REQUIRE(levels.size() == 3);
  CHECK(levels[0] == doctest::Approx(0.0));
  CHECK(levels[1] == doctest::Approx(5.0));
  CHECK(levels[2] == doctest::Approx(11.0));
}

TEST_CASE("flux integrality is enforced") {
  // a = pi on volume 1 gives flux p/2, fractional at p = 1.
  TorusModel bad(CurvatureSpectrum({std::numbers::pi, kTwoPi}, 1.0, 2), ThreeForm(2));
  CHECK_THROWS_AS(static_cast<void>(fd_low_spectrum(bad, 1, 8, 4)), domain_error);
}

TEST_CASE("discretized line spectrum converges at second order for n=1") {
  TorusModel model = model_n1();
  const int p = 2;
  const int count = 10;  // full clusters: 2 + 4 + 4
  auto exact = ladder_levels(model, p, count);
  auto fd16 = fd_low_spectrum(model, p, 16, count);
  auto fd32 = fd_low_spectrum(model, p, 32, count);
  // Pairing guard: discretization error is two orders below the cluster gap,
  // a misaligned pairing would be off by at least one full gap.
  const double gap = 2.0 * p * model.spec.a[0];
  for (int i = 0; i < count; ++i) {
    CHECK(std::abs(fd16[static_cast<size_t>(i)] - exact[static_cast<size_t>(i)]) <
          0.1 * std::max(gap, exact[static_cast<size_t>(i)]));
  }
  const double e16 = mean_abs_err(fd16, exact);
  const double e32 = mean_abs_err(fd32, exact);
  REQUIRE(e16 > 1e-9);
  const double ratio = e16 / e32;
  CHECK(ratio > 3.2);
  CHECK(ratio < 4.8);
}

TEST_CASE("product-grid spectrum converges at second order for untwisted n=2") {
  TorusModel model = model_n2(0.0);
  const int p = 2;
  const int count = 20;  // full clusters: 4 + 16
  auto exact = ladder_levels(model, p, count);
  auto fd12 = fd_low_spectrum(model, p, 12, count);
  auto fd24 = fd_low_spectrum(model, p, 24, count);
  const double gap = 2.0 * p * model.spec.a[0];
  for (int i = 0; i < count; ++i) {
    CHECK(std::abs(fd12[static_cast<size_t>(i)] - exact[static_cast<size_t>(i)]) <
          0.1 * std::max(gap, exact[static_cast<size_t>(i)]));
  }
  const double e12 = mean_abs_err(fd12, exact);
  const double e24 = mean_abs_err(fd24, exact);
  REQUIRE(e12 > 1e-9);
  const double ratio = e12 / e24;
  CHECK(ratio > 3.2);
  CHECK(ratio < 4.8);
}

TEST_CASE("full-grid twisted spectrum tracks the ladder values") {
  TorusModel model = model_n2(0.5);
  const int p = 1;
  const int count = 13;  // full clusters: 1 + 4 + 8
  auto exact = ladder_levels(model, p, count);
  auto fd = fd_low_spectrum(model, p, 10, count);
  REQUIRE(static_cast<int>(fd.size()) >= count);
  for (int i = 0; i < count; ++i) {
    // Only discretization error separates the two spectra at this grid.
    CHECK(std::abs(fd[static_cast<size_t>(i)] - exact[static_cast<size_t>(i)]) <
          0.08 * std::max(4.0, exact[static_cast<size_t>(i)]));
  }
}
