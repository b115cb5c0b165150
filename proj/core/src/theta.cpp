#include "ttorsion/theta.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ttorsion/errors.hpp"
#include "ttorsion/model_kernel.hpp"
#include "ttorsion/pgrading.hpp"
#include "ttorsion/quadrature.hpp"
#include "ttorsion/special.hpp"

namespace ttorsion {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

// 1/x - 1/(e^x - 1) - 1/2, stable at small arguments.
double phi_minus_half(double x) {
  if (x < 0.1) {
    const double x2 = x * x;
    return x * (-1.0 / 12.0 + x2 * (1.0 / 720.0 + x2 * (-1.0 / 30240.0 + x2 * (1.0 / 1209600.0))));
  }
  return 1.0 / x - 1.0 / std::expm1(x) - 0.5;
}

// Exact N-weighted supertrace of a fiber matrix in the subset basis.
Rational strn_rat(const RatMatrix& m, const char* where) {
  GaussRat acc{Rational(0), Rational(0)};
  for (int s = 0; s < m.rows(); ++s) {
    const int q = __builtin_popcount(static_cast<unsigned>(s));
    const int sign = (q % 2 == 0) ? 1 : -1;
    GaussRat term = m(s, s);
    term.re *= sign * q;
    term.im *= sign * q;
    acc = acc + term;
  }
  if (!(acc.im == Rational(0))) throw error(std::string(where) + ": supertrace not real");
  return acc.re;
}

double entry_weight(const SpectralEntry& e) {
  double w = 0.0;
  for (int q = 0; q < static_cast<int>(e.mult.size()); ++q)
    w += ((q % 2 == 0) ? 1.0 : -1.0) * q * e.mult[q];
  return w;
}

double pow_int(double base, int e) {
  double out = 1.0;
  for (int i = 0; i < std::abs(e); ++i) out *= base;
  return e >= 0 ? out : 1.0 / out;
}

}  // namespace

HeatTraceExpansion beta_coefficients(const TorusModel& model, int p, int jmax) {
  const int n = model.n();
  if (p < 1) throw domain_error("beta_coefficients: p must be positive");
  if (jmax < n) throw domain_error("beta_coefficients: jmax must be at least n");
  if (jmax > 4) throw domain_error("beta_coefficients: jmax above the recurrence guard");

  const SymbolicOperator squared = assemble_dirac_squared(model);
  const std::vector<PolySection> thetas = parametrix_coefficients(squared, jmax);

  HeatTraceExpansion out;
  out.p = p;
  out.n = n;
  out.jmax = jmax;

  const double front = model.spec.rank_e * model.spec.vol / std::pow(kTwoPi, n);
  for (int j = 0; j <= jmax; ++j) {
    const auto origin = thetas[j].at_origin();
    Rational exact(0);
    Rational top(0);
    for (const auto& [l, mat] : origin) {
      if (l > j) throw error("beta_coefficients: p-power exceeds parametrix index");
      const Rational s = strn_rat(mat, "beta_coefficients");
      Rational scaled = s;
      for (int e = 0; e < j - l; ++e) scaled /= p;  // p^{l-j}
      exact += scaled;
      if (l == j) top += s;
    }
    Rational half_pow(1);
    for (int e = 0; e < j; ++e) half_pow /= 2;
    out.beta[j - n] = front * to_double(exact * half_pow);
    out.beta_model[j - n] = front * to_double(top * half_pow);
  }
  return out;
}

double heat_supertrace(const SpectralData& data, double u, double tail_tol) {
  if (!(u > 0)) throw domain_error("heat_supertrace: u must be positive");
  const double tail = spectral_tail_bound(data, u);
  if (!(tail <= tail_tol))
    throw certification_error("heat_supertrace: scaled tail bound " + std::to_string(tail) +
                              " above tolerance at u=" + std::to_string(u));
  NeumaierSum sum;
  for (const auto& e : data.entries) {
    if (e.lambda <= 0.0) continue;
    sum.add(entry_weight(e) * std::exp(-u * e.lambda / (2.0 * data.p)));
  }
  return sum.value();
}

double plain_heat_supertrace(const SpectralData& data, double u, double tail_tol) {
  if (!(u > 0)) throw domain_error("plain_heat_supertrace: u must be positive");
  const double tail = spectral_tail_bound(data, u, true);
  if (!(tail <= tail_tol))
    throw certification_error("plain_heat_supertrace: scaled tail bound above tolerance");
  NeumaierSum sum;
  for (const auto& e : data.entries) {
    double w = 0.0;
    for (int q = 0; q < static_cast<int>(e.mult.size()); ++q)
      w += ((q % 2 == 0) ? 1.0 : -1.0) * e.mult[q];
    sum.add(w * std::exp(-u * e.lambda / (2.0 * data.p)));
  }
  return sum.value();
}

double theta_zero(const TorusModel& model, int p, const HeatTraceExpansion& expansion) {
  if (expansion.p != p || expansion.n != model.n())
    throw domain_error("theta_zero: expansion does not match the request");
  return -pow_int(static_cast<double>(p), model.n()) * expansion.beta.at(0);
}

double theta_zero_quadrature(const TorusModel& model, int p) {
  if (model.n() != 1 || !model.B.is_zero())
    throw domain_error("theta_zero_quadrature: closed-form domain is untwisted n = 1");

  const double u_top = 0.08;
  const int steps = 6;
  const double u_min = u_top / (1 << (steps - 1));
  const int K = static_cast<int>(std::ceil(40.0 / (model.spec.min_a() * u_min))) + 8;
  const SpectralData data = landau_spectrum(model, p, K, 1e-9, u_min);

  const LaurentCoeffs lc = laurent_coeffs(model.spec);
  const double beta_m1 = model.spec.rank_e * lc.alpha_minus1;

  // Neville extrapolation to u = 0 of S(u) - beta_{-1}/u.
  std::vector<double> us(steps), f(steps);
  for (int k = 0; k < steps; ++k) {
    us[k] = u_top / (1 << k);
    f[k] = heat_supertrace(data, us[k]) / p - beta_m1 / us[k];
  }
  for (int round = 1; round < steps; ++round)
    for (int k = steps - 1; k >= round; --k)
      f[k] = f[k] + us[k] * (f[k] - f[k - 1]) / (us[k - round] - us[k]);
  return -static_cast<double>(p) * f[steps - 1];
}

ThetaResult theta_prime_zero(const TorusModel& model, int p, const SpectralData& data,
                             const HeatTraceExpansion& expansion, const ThetaOptions& opts) {
  const int n = model.n();
  if (data.p != p || data.n != n || expansion.p != p || expansion.n != n)
    throw domain_error("theta_prime_zero: inputs do not match the request");
  const double usw = opts.u_switch;
  if (!(usw > 0.0 && usw < 1.0)) throw domain_error("theta_prime_zero: u_switch must lie in (0,1)");
  for (int j = -n; j <= 0; ++j)
    if (!expansion.beta.count(j))
      throw domain_error("theta_prime_zero: expansion missing coefficient");

  ThetaResult res;
  res.u_switch = usw;
  res.tail_bound_at_switch = spectral_tail_bound(data, usw);
  if (!(res.tail_bound_at_switch <= opts.tail_tol))
    throw certification_error("theta_prime_zero: scaled tail bound " +
                              std::to_string(res.tail_bound_at_switch) +
                              " above tolerance at the switch point");

  const double pn = pow_int(static_cast<double>(p), n);
  const auto& beta = expansion.beta;
  const auto& beta_model = expansion.beta_model;

  // [0, u_switch]: closed-form model density minus its own Laurent terms.
  const double front = model.spec.rank_e * model.spec.vol * model.spec.det_over_2pi();
  const auto& a = model.spec.a;
  auto integrand = [&](double u) {
    NeumaierSum s;
    for (double aj : a) s.add(phi_minus_half(u * aj));
    return front * s.value() / u;
  };
  const double A = adaptive_integrate(integrand, 0.0, usw, opts.quad_abs_tol);
  res.quad_error_estimate = opts.quad_abs_tol;

  // Exact finite-p correction series for the twisted coefficients.
  double bpiece = 0.0;
  for (int j = 1; j <= expansion.jmax - n; ++j) {
    const double diff = beta.at(j) - beta_model.at(j);
    const double term = diff * pow_int(usw, j) / j;
    bpiece += term;
    res.series_remainder_estimate = std::abs(term);
  }

  // [u_switch, 1] and [1, inf): per-eigenvalue exponential integrals.
  NeumaierSum c_sum, i1_sum;
  for (const auto& e : data.entries) {
    const double w = entry_weight(e);
    if (e.lambda <= 0.0) {
      if (std::abs(w) > 1e-6 * std::max(1.0, static_cast<double>(data.d_p)))
        throw certification_error("theta_prime_zero: kernel carries N-weight");
      continue;
    }
    const double x1 = e.lambda * usw / (2.0 * p);
    const double x2 = e.lambda / (2.0 * p);
    c_sum.add(w * (exp_integral_e1(x1) - exp_integral_e1(x2)));
    i1_sum.add(w * exp_integral_e1(x2));
  }
  double C = c_sum.value() / pn;
  for (int j = -n; j <= -1; ++j) C -= beta.at(j) * (1.0 - pow_int(usw, j)) / j;
  C += beta.at(0) * std::log(usw);

  double constants = beta.at(0) * euler_gamma;
  for (int j = -n; j <= -1; ++j) constants += beta.at(j) / j;

  res.integral_01 = A + bpiece + C + constants;
  res.integral_1inf = i1_sum.value() / pn;
  res.theta0 = -pn * beta.at(0);
  res.theta_prime0 =
      -res.theta0 * std::log(static_cast<double>(p)) - pn * (res.integral_01 + res.integral_1inf);
  res.torsion = std::exp(-0.5 * res.theta_prime0);
  return res;
}

double direct_spectral_theta_prime(const SpectralData& data, int p) {
  if (data.n != 1 || data.cb_norm != 0.0)
    throw domain_error("direct_spectral_theta_prime: closed-form domain is untwisted n = 1");
  if (data.p != p) throw domain_error("direct_spectral_theta_prime: p mismatch");
  const double a = data.a_min;
  const double dp = static_cast<double>(data.d_p);
  return dp * (zeta_prime_at_zero() - std::log(p * a) * zeta_at_zero);
}

AsymptoticsReport asymptotics_report(const TorusModel& model, const std::vector<int>& p_grid,
                                     int K, const ThetaOptions& opts,
                                     const std::function<SpectralData(int)>& spectrum_for_p) {
  if (p_grid.empty()) throw domain_error("asymptotics_report: empty p grid");
  for (std::size_t i = 0; i + 1 < p_grid.size(); ++i)
    if (p_grid[i] >= p_grid[i + 1]) throw domain_error("asymptotics_report: p grid must ascend");

  const int n = model.n();
  AsymptoticsReport rep;
  rep.n = n;
  rep.cutoff = K;
  rep.options = opts;

  for (int p : p_grid) {
    const SpectralData data = spectrum_for_p(p);
    const HeatTraceExpansion expansion = beta_coefficients(model, p, 4);
    const ThetaResult tr = theta_prime_zero(model, p, data, expansion, opts);
    const KernelData kd = kernel_data(model, p);

    ReportRow row;
    row.p = p;
    row.theta0 = tr.theta0;
    row.theta_prime0 = tr.theta_prime0;
    row.rhs_theorem1 = theorem1_rhs(model.spec, p);
    row.residual = row.theta_prime0 - row.rhs_theorem1;
    row.residual_scaled = row.residual / std::pow(static_cast<double>(p), n - 0.5);
    row.gap_over_p = spectral_gap(data) / p;
    row.ker_plus = kd.dim_plus;
    row.ker_minus = kd.dim_minus;
    rep.rows.push_back(row);
  }

  rep.trend_scaled_residual_decreasing = true;
  for (std::size_t i = 2; i < rep.rows.size(); ++i) {
    const double prev = std::abs(rep.rows[i - 1].residual_scaled);
    const double cur = std::abs(rep.rows[i].residual_scaled);
    if (!(cur < prev || cur < rep.noise_floor)) rep.trend_scaled_residual_decreasing = false;
  }
  rep.reference_residual_small = true;
  for (const auto& row : rep.rows) {
    const double allow = 1e-6 * std::abs(row.theta_prime0) + 1e-9;
    if (!(std::abs(row.residual) <= allow)) rep.reference_residual_small = false;
  }
  return rep;
}

AsymptoticsReport asymptotics_report(const TorusModel& model, const std::vector<int>& p_grid,
                                     int K, const ThetaOptions& opts) {
  return asymptotics_report(model, p_grid, K, opts, [&](int p) {
    return landau_spectrum(model, p, K, opts.tail_tol, opts.u_switch);
  });
}

std::string report_csv(const AsymptoticsReport& report) {
  std::string out =
      "p,theta0,theta_prime0,rhs_theorem1,residual,residual_scaled,gap_over_p,ker_plus,ker_minus\n";
  char buf[512];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%ld,%ld\n", r.p,
                  r.theta0, r.theta_prime0, r.rhs_theorem1, r.residual, r.residual_scaled,
                  r.gap_over_p, r.ker_plus, r.ker_minus);
    out += buf;
  }
  return out;
}

nlohmann::json report_sidecar(const AsymptoticsReport& report) {
  nlohmann::json j;
  j["schema"] = 1;
  j["n"] = report.n;
  j["cutoff"] = report.cutoff;
  j["normalization"] = "heat time rescaled by 2p; coefficients in p^{-n}-scaled units";
  j["tolerances"] = {{"u_switch", report.options.u_switch},
                     {"quad_abs_tol", report.options.quad_abs_tol},
                     {"tail_tol", report.options.tail_tol},
                     {"noise_floor", report.noise_floor}};
  j["verdicts"] = {{"trend_scaled_residual_decreasing", report.trend_scaled_residual_decreasing},
                   {"reference_residual_small", report.reference_residual_small}};
  j["rows"] = report.rows.size();
  return j;
}

}  // namespace ttorsion
