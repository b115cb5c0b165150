#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "ttorsion/errors.hpp"
#include "ttorsion/landau.hpp"
#include "ttorsion/theta.hpp"

using namespace ttorsion;

namespace {

const double kTwoPi = 2.0 * std::numbers::pi;

TorusModel model_n1() {
  return TorusModel(CurvatureSpectrum({kTwoPi}, 1.0, 1), ThreeForm(1));
}

TorusModel model_n2(double b) {
  ThreeForm B(2);
  if (b != 0.0) B.set(0, 1, 2, b);
  return TorusModel(CurvatureSpectrum({kTwoPi, kTwoPi}, 1.0, 1), B);
}

// p^{-n}-scaled N-weighted heat supertrace from kept spectral data.
double scaled_str(const TorusModel& model, const SpectralData& data, double u) {
  const double pn = std::pow(static_cast<double>(data.p), model.n());
  return heat_supertrace(data, u, 1e-6) / pn;
}

}  // namespace

TEST_CASE("reference line model hits the closed-form value of theta at zero") {
  TorusModel model = model_n1();
  for (int p : {8, 16, 32, 64}) {
    HeatTraceExpansion exp = beta_coefficients(model, p, 3);
    CHECK(exp.p == p);
    CHECK(exp.n == 1);
    const double t0 = theta_zero(model, p, exp);
    CHECK(std::abs(t0 - (-0.5 * p)) < 1e-12 * p);
  }
}

TEST_CASE("quadrature continuation path agrees with the coefficient path") {
  TorusModel model = model_n1();
  for (int p : {4, 8, 16}) {
    const double tq = theta_zero_quadrature(model, p);
    CHECK(std::abs(tq - (-0.5 * p)) < 1e-8 * p);
  }
}

TEST_CASE("derivative at zero matches the spectral continuation oracle") {
  TorusModel model = model_n1();
  for (int p : {8, 16, 32, 64}) {
    SpectralData data = landau_spectrum(model, p, 20);
    HeatTraceExpansion exp = beta_coefficients(model, p, 3);
    ThetaResult res = theta_prime_zero(model, p, data, exp);
    const double oracle = direct_spectral_theta_prime(data, p);
    CHECK(std::abs(res.theta_prime0 - oracle) < 1e-6 * std::abs(oracle));
    CHECK(res.torsion == doctest::Approx(std::exp(-0.5 * res.theta_prime0)).epsilon(1e-12));
    CHECK(res.u_switch == doctest::Approx(0.2));
    CHECK(res.tail_bound_at_switch <= 1e-9);
    CHECK(res.quad_error_estimate < 1e-8);
    CHECK(res.series_remainder_estimate < 1e-6);
  }
}

TEST_CASE("coefficients reduce to the model values without a twist") {
  for (int p : {2, 8}) {
    HeatTraceExpansion e1 = beta_coefficients(model_n1(), p, 4);
    for (const auto& [j, v] : e1.beta) {
      REQUIRE(e1.beta_model.count(j) == 1);
      CHECK(v == doctest::Approx(e1.beta_model.at(j)).epsilon(1e-13));
    }
    HeatTraceExpansion e2 = beta_coefficients(model_n2(0.0), p, 4);
    for (const auto& [j, v] : e2.beta) {
      REQUIRE(e2.beta_model.count(j) == 1);
      CHECK(v == doctest::Approx(e2.beta_model.at(j)).epsilon(1e-13));
    }
  }
}

TEST_CASE("subtracted coefficients match the small-time limit of the spectral sum") {
  // Radius-140 truncation keeps the discarded mass far below the Richardson
  // targets at the smallest evolution time used here.
  SUBCASE("line model") {
    TorusModel model = model_n1();
    const int p = 4;
    SpectralData data = landau_spectrum(model, p, 140);
    auto beta = beta_coefficients(model, p, 3).beta;
    REQUIRE(beta.count(-1) == 1);
    REQUIRE(beta.count(0) == 1);
    auto T = [&](double u) { return scaled_str(model, data, u) - beta.at(-1) / u; };
    const double t0 = T(0.1), t1 = T(0.05), t2 = T(0.025);
    const double e1a = 2.0 * t1 - t0;
    const double e1b = 2.0 * t2 - t1;
    const double e2 = (4.0 * e1b - e1a) / 3.0;
    const double scale = std::max(1.0, std::abs(beta.at(0)));
    CHECK(std::abs(e2 - beta.at(0)) < 1e-4 * scale);
    // First-order convergence of the raw subtracted values.
    const double r = std::abs(t0 - beta.at(0)) / std::abs(t1 - beta.at(0));
    CHECK(r > 1.7);
    CHECK(r < 2.4);
  }
  SUBCASE("untwisted surface model") {
    TorusModel model = model_n2(0.0);
    const int p = 2;
    SpectralData data = landau_spectrum(model, p, 180);
    auto beta = beta_coefficients(model, p, 4).beta;
    REQUIRE(beta.count(-2) == 1);
    auto T = [&](double u) {
      return scaled_str(model, data, u) - beta.at(-2) / (u * u) - beta.at(-1) / u;
    };
    const double t0 = T(0.1), t1 = T(0.05), t2 = T(0.025);
    const double e1a = 2.0 * t1 - t0;
    const double e1b = 2.0 * t2 - t1;
    const double e2 = (4.0 * e1b - e1a) / 3.0;
    const double scale = std::max(1.0, std::abs(beta.at(0)));
    CHECK(std::abs(e2 - beta.at(0)) < 1e-4 * scale);
  }
  SUBCASE("twist correction, validated through the twisted-minus-untwisted difference") {
    const int p = 4;
    TorusModel twisted = model_n2(0.5);
    TorusModel untwisted = model_n2(0.0);
    // Truncation at 40 shells certifies the 1e-6 supertrace tail down to
    // u = 0.1; deeper times would need a Fock basis too large to diagonalize.
    SpectralData dt = landau_spectrum(twisted, p, 40);
    SpectralData du = landau_spectrum(untwisted, p, 40);
    auto bt = beta_coefficients(twisted, p, 4).beta;
    auto bu = beta_coefficients(untwisted, p, 4).beta;
    auto D = [&](double u) {
      double d = scaled_str(twisted, dt, u) - scaled_str(untwisted, du, u);
      d -= (bt.at(-2) - bu.at(-2)) / (u * u);
      d -= (bt.at(-1) - bu.at(-1)) / u;
      return d;
    };
    const double delta = bt.at(0) - bu.at(0);
    // Neville extrapolation to u = 0. The subtracted difference is analytic
    // with radius ~1 (poles of the model trace sit at u*a = 2*pi*i), so the
    // cubic truncation error c4*prod(u_i) ~ 4e-4 stays inside the tolerance,
    // while one-step extrapolants are nowhere near delta at these times.
    const std::vector<double> us{0.2, 0.15, 0.12, 0.1};
    std::vector<double> r;
    for (double u : us) r.push_back(D(u));
    for (size_t m = 1; m < us.size(); ++m)
      for (size_t i = us.size() - 1; i >= m; --i)
        r[i] = (us[i - m] * r[i] - us[i] * r[i - 1]) / (us[i - m] - us[i]);
    CHECK(std::abs(delta) > 1e-3);  // the twist must move the constant term
    CHECK(std::abs(r.back() - delta) < std::max(0.15 * std::abs(delta), 2e-3));
  }
}

TEST_CASE("plain heat supertrace is the u-independent bulk degeneracy") {
  SUBCASE("line model") {
    TorusModel model = model_n1();
    for (int p : {2, 8}) {
      SpectralData data = landau_spectrum(model, p, 20);
      const double dp = static_cast<double>(data.d_p);
      for (double u : {0.3, 1.0, 3.0, 10.0}) {
        CHECK(std::abs(plain_heat_supertrace(data, u) - dp) < 1e-10 * dp);
      }
    }
  }
  SUBCASE("twisted surface model") {
    TorusModel model = model_n2(0.5);
    SpectralData data = landau_spectrum(model, 2, 24);
    const double dp = static_cast<double>(data.d_p);
    for (double u : {0.5, 2.0}) {
      CHECK(std::abs(plain_heat_supertrace(data, u) - dp) < 1e-10 * dp);
    }
  }
}

TEST_CASE("supertrace evaluation refuses an uncertifiable truncation") {
  TorusModel model = model_n1();
  SpectralData data = landau_spectrum(model, 2, 8, 1e-3, 1.0);
  CHECK_THROWS_AS(static_cast<void>(heat_supertrace(data, 0.01, 1e-9)), certification_error);
}

TEST_CASE("untwisted surface model reproduces the exact growth law") {
  TorusModel model = model_n2(0.0);
  for (int p : {4, 8}) {
    SpectralData data = landau_spectrum(model, p, 24);
    HeatTraceExpansion exp = beta_coefficients(model, p, 4);
    const double t0 = theta_zero(model, p, exp);
    CHECK(std::abs(t0 - (-1.0 * p * p)) < 1e-12 * p * p);
    ThetaResult res = theta_prime_zero(model, p, data, exp);
    const double want = p * p * std::log(static_cast<double>(p));
    CHECK(std::abs(res.theta_prime0 - want) < 1e-10 * want);
  }
}

TEST_CASE("twist shifts theta at zero by a subleading amount") {
  const int p = 4;
  TorusModel twisted = model_n2(0.5);
  TorusModel untwisted = model_n2(0.0);
  const double t0b = theta_zero(twisted, p, beta_coefficients(twisted, p, 4));
  const double t00 = theta_zero(untwisted, p, beta_coefficients(untwisted, p, 4));
  const double shift = std::abs(t0b - t00);
  CHECK(shift > 1e-3);
  CHECK(shift < 0.1 * p * p);
}

TEST_CASE("report assembles rows, verdicts, and serializations") {
  TorusModel model = model_n1();
  std::vector<int> grid{8, 16};
  AsymptoticsReport rep = asymptotics_report(model, grid, 20);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.n == 1);
  CHECK(rep.cutoff == 20);
  for (size_t i = 0; i < grid.size(); ++i) {
    const ReportRow& row = rep.rows[i];
    CHECK(row.p == grid[i]);
    const double want = 0.5 * row.p * std::log(static_cast<double>(row.p));
    CHECK(row.rhs_theorem1 == doctest::Approx(want).epsilon(1e-12));
    CHECK(std::abs(row.residual) < 1e-6 * std::abs(want));
    CHECK(row.residual_scaled ==
          doctest::Approx(row.residual / std::sqrt(static_cast<double>(row.p))).epsilon(1e-12));
    CHECK(row.ker_plus == row.p);
    CHECK(row.ker_minus == 0);
    CHECK(row.gap_over_p > 0);
  }
  CHECK(rep.reference_residual_small);
  CHECK(rep.trend_scaled_residual_decreasing);

  const std::string csv = report_csv(rep);
  CHECK(csv.rfind("p,theta0,theta_prime0,rhs_theorem1,residual,residual_scaled,"
                  "gap_over_p,ker_plus,ker_minus\n", 0) == 0);

  nlohmann::json side = report_sidecar(rep);
  CHECK(side.at("schema") == 1);
  CHECK(side.at("rows") == 2);
  CHECK(side.at("verdicts").at("reference_residual_small") == true);
  CHECK(side.at("tolerances").at("u_switch") == doctest::Approx(0.2));

  int calls = 0;
  AsymptoticsReport rep2 = asymptotics_report(model, grid, 20, ThetaOptions{}, [&](int p) {
    ++calls;
    return landau_spectrum(model, p, 20);
  });
  CHECK(calls == 2);
  REQUIRE(rep2.rows.size() == 2);
  for (size_t i = 0; i < grid.size(); ++i) {
    CHECK(rep2.rows[i].theta_prime0 == rep.rows[i].theta_prime0);
    CHECK(rep2.rows[i].theta0 == rep.rows[i].theta0);
  }
}
