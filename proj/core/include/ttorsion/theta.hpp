#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ttorsion/landau.hpp"
#include "ttorsion/model.hpp"

namespace ttorsion {

// Small-time expansion coefficients of the scaled heat supertrace:
// p^{-n} Str(N e^{-u D^2 / 2p}) ~ sum_j beta[j] u^j.
// `beta` holds the exact finite-p values from the parametrix recurrence
// (evaluated at the origin); `beta_model` keeps only the top p-order of each
// coefficient, which is the constant-curvature model value. The two maps
// agree identically when the three-form vanishes.
struct HeatTraceExpansion {
  int p = 1;
  int n = 1;
  int jmax = 0;  // highest parametrix index used; beta indices run -n..jmax-n
  std::map<int, double> beta;
  std::map<int, double> beta_model;
};

// Coefficients from the parametrix recurrence, j = 0..jmax, beta index j-n.
// Requires n <= jmax <= 4.
HeatTraceExpansion beta_coefficients(const TorusModel& model, int p, int jmax);

// sum_{lambda>0} e^{-u lambda/2p} sum_q (-1)^q q m_q(lambda), kernel excluded.
// Certifies that the scaled discarded-mass bound at u is below tail_tol.
double heat_supertrace(const SpectralData& data, double u, double tail_tol = 1e-9);

// Weight-1 variant including the kernel; index invariance makes it equal d_p
// for every u.
double plain_heat_supertrace(const SpectralData& data, double u, double tail_tol = 1e-9);

// theta_p(0) = -p^n beta_0 from the z -> 0 limit of the split Mellin
// transform (the [1,inf) piece contributes nothing at z = 0).
double theta_zero(const TorusModel& model, int p, const HeatTraceExpansion& expansion);

// Independent quadrature/extrapolation path: Richardson limit of
// S(u) - beta_{-1}/u along a halving u-grid built from spectral data alone.
// Untwisted n = 1 only.
double theta_zero_quadrature(const TorusModel& model, int p);

struct ThetaOptions {
  double u_switch = 0.2;      // split point for the [0,1] integral
  double quad_abs_tol = 1e-12;
  double tail_tol = 1e-9;     // scaled discarded-mass certification level
};

struct ThetaResult {
  double theta0 = 0;
  double theta_prime0 = 0;
  double torsion = 0;  // e^{-theta_prime0 / 2}
  double integral_01 = 0;    // I0, the subtracted [0,1] piece with its constants
  double integral_1inf = 0;  // I1
  double u_switch = 0;
  double quad_error_estimate = 0;
  double series_remainder_estimate = 0;  // last difference-series term kept
  double tail_bound_at_switch = 0;
};

// theta_p'(0) = -theta_p(0) ln p - p^n (I0 + I1) with
//   I0 = int_0^1 (S(u) - sum_{j<=0} beta_j u^j) du/u
//        + sum_{j=-n}^{-1} beta_j / j + beta_0 * gamma,
//   I1 = int_1^inf S(u) du/u,
// S(u) = p^{-n} heat_supertrace(u). The [0, u_switch] part integrates the
// closed-form model density with the model coefficients subtracted plus the
// exact finite-p difference series; the [u_switch, inf) parts evaluate
// per-eigenvalue exponential integrals.
ThetaResult theta_prime_zero(const TorusModel& model, int p, const SpectralData& data,
                             const HeatTraceExpansion& expansion, const ThetaOptions& opts = {});

// Closed-form continuation of the unsplit definition for the untwisted n = 1
// Landau series: theta_p'(0) = (d_p/2) ln(p a / 2pi). Oracle only.
double direct_spectral_theta_prime(const SpectralData& data, int p);

struct ReportRow {
  int p = 0;
  double theta0 = 0;
  double theta_prime0 = 0;
  double rhs_theorem1 = 0;
  double residual = 0;
  double residual_scaled = 0;  // residual / p^{n-1/2}
  double gap_over_p = 0;
  long ker_plus = 0;
  long ker_minus = 0;
};

struct AsymptoticsReport {
  std::vector<ReportRow> rows;
  int n = 1;
  int cutoff = 0;
  ThetaOptions options;
  bool trend_scaled_residual_decreasing = false;  // |residual_scaled| falling from row 2 (noise floor aware)
  bool reference_residual_small = false;          // |residual| <= 1e-6 |theta_prime0| on every row
  double noise_floor = 1e-7;
};

// Full per-p pipeline over an ascending grid; every row certified. The
// provider overload lets callers interpose a spectrum cache; it must return
// data equivalent to landau_spectrum(model, p, K, opts.tail_tol, opts.u_switch).
AsymptoticsReport asymptotics_report(const TorusModel& model, const std::vector<int>& p_grid,
                                     int K, const ThetaOptions& opts,
                                     const std::function<SpectralData(int)>& spectrum_for_p);
AsymptoticsReport asymptotics_report(const TorusModel& model, const std::vector<int>& p_grid,
                                     int K, const ThetaOptions& opts = {});

// CSV with the exact column set
// p, theta0, theta_prime0, rhs_theorem1, residual, residual_scaled, gap_over_p, ker_plus, ker_minus
std::string report_csv(const AsymptoticsReport& report);

// Tolerances and certification flags for the report.
nlohmann::json report_sidecar(const AsymptoticsReport& report);

}  // namespace ttorsion
