#include "ttorsion/model_kernel.hpp"

#include <cmath>
#include <numbers>

#include "ttorsion/quadrature.hpp"
#include "ttorsion/special.hpp"

namespace ttorsion {

double local_density(double u, const CurvatureSpectrum& spec) {
  if (!(u > 0.0)) throw domain_error("local_density: requires u > 0");
  SpinorSpace space(spec.n());
  double str_n = number_weighted_supertrace(space, exp_omega_d(space, spec.a, u)).real();
  double denom = 1.0;
  for (double aj : spec.a) denom *= 1.0 - std::exp(-u * aj);
  return str_n * spec.det_over_2pi() / denom;
}

double trace_form(double u, const CurvatureSpectrum& spec) {
  if (!(u > 0.0)) throw domain_error("trace_form: requires u > 0");
  NeumaierSum s;
  for (double aj : spec.a) {
    double e = std::exp(-u * aj);
    s.add(-e / (1.0 - e));
  }
  return spec.det_over_2pi() * s.value();
}

LaurentCoeffs laurent_coeffs(const CurvatureSpectrum& spec) {
  LaurentCoeffs out;
  double inv_sum = 0.0;
  for (double aj : spec.a) inv_sum += 1.0 / aj;
  out.alpha_minus1 = -spec.det_over_2pi() * inv_sum * spec.vol;
  out.alpha_0 = 0.5 * spec.n() * spec.det_over_2pi() * spec.vol;
  return out;
}

namespace {

Rational rational_factorial(int k) {
  Rational f(1);
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Taylor coefficients of h(x) = x / (1 - e^{-x}) via series reciprocal of
// (1 - e^{-x})/x = sum_k (-1)^k x^k/(k+1)!.
std::vector<Rational> h_series(int jmax) {
  std::vector<Rational> g(jmax + 1), h(jmax + 1);
  for (int k = 0; k <= jmax; ++k) {
    g[k] = Rational(1) / rational_factorial(k + 1);
    if (k % 2 == 1) g[k] = -g[k];
  }
  h[0] = 1;
  for (int m = 1; m <= jmax; ++m) {
    Rational acc(0);
    for (int k = 1; k <= m; ++k) acc += g[k] * h[m - k];
    h[m] = -acc;
  }
  return h;
}

}  // namespace

std::vector<RatMatrix> kappa_coefficients_rat(int n, const std::vector<Rational>& a,
                                              int jmax) {
  if (jmax < 0 || jmax > 8) throw domain_error("kappa_coefficients: jmax out of range [0,8]");
  if (static_cast<int>(a.size()) != n)
    throw domain_error("kappa_coefficients: need n eigenvalues");
  const std::vector<Rational> h = h_series(jmax);

  // scalar(u) = prod_l h(u a_l), truncated at degree jmax
  std::vector<Rational> scalar(jmax + 1);
  scalar[0] = 1;
  for (int l = 0; l < n; ++l) {
    std::vector<Rational> factor(jmax + 1);
    Rational pw(1);
    for (int m = 0; m <= jmax; ++m) {
      factor[m] = h[m] * pw;
      pw *= a[l];
    }
    std::vector<Rational> next(jmax + 1);
    for (int i = 0; i <= jmax; ++i)
      for (int j = 0; i + j <= jmax; ++j) next[i + j] += scalar[i] * factor[j];
    scalar = std::move(next);
  }

  // exp(u omega_d) is diagonal; take powers of the diagonal entries.
  int dim = 1 << n;
  std::vector<Rational> diag(dim);
  for (int mask = 0; mask < dim; ++mask) {
    Rational s(0);
    for (int l = 0; l < n; ++l)
      if (mask & (1 << l)) s += a[l];
    diag[mask] = -s;
  }

  std::vector<RatMatrix> kappa(jmax + 1, RatMatrix(dim, dim));
  Rational two_pow(1);
  for (int j = 0; j <= jmax; ++j) {
    for (int mask = 0; mask < dim; ++mask) {
      // coefficient of u^j in scalar(u) * e^{u diag}: sum_m scalar[j-m] diag^m/m!
      Rational c(0);
      Rational dp(1);
      for (int m = 0; m <= j; ++m) {
        c += scalar[j - m] * dp / rational_factorial(m);
        dp *= diag[mask];
      }
      kappa[j](mask, mask) = GaussRat(two_pow * c);
    }
    two_pow *= 2;
  }
  return kappa;
}

std::vector<CliffordElement> kappa_coefficients(const CurvatureSpectrum& spec, int jmax) {
  std::vector<Rational> a;
  a.reserve(spec.a.size());
  for (double v : spec.a) a.push_back(rational_from_double(v));
  auto exact = kappa_coefficients_rat(spec.n(), a, jmax);
  std::vector<CliffordElement> out;
  out.reserve(exact.size());
  for (const auto& m : exact) out.push_back({m.to_complex(), Parity::Even});
  return out;
}

std::complex<double> riemann_zeta_mellin(std::complex<double> z) {
  if (!(z.real() > 1.0))
    throw domain_error("riemann_zeta_mellin: direct integral requires Re z > 1");
  // Subtract the full singular prefix 1/u - 1/2 + u/12 on [0,1]; the
  // remainder is O(u^3) and keeps the quadrature smooth down to Re z -> 1.
  auto bounded_part = [z](double u) -> std::complex<double> {
    double f = u < 1e-3 ? -u * u * u / 720.0 + u * u * u * u * u / 30240.0
                        : std::exp(-u) / (1.0 - std::exp(-u)) - 1.0 / u + 0.5 - u / 12.0;
    return std::pow(std::complex<double>(u, 0.0), z - 1.0) * f;
  };
  auto plain_part = [z](double u) -> std::complex<double> {
    double f = std::exp(-u) / (1.0 - std::exp(-u));
    return std::pow(std::complex<double>(u, 0.0), z - 1.0) * f;
  };
  constexpr double U = 50.0;  // e^{-50} < 1e-16 truncation contract
  std::complex<double> integral = adaptive_integrate(bounded_part, 0.0, 1.0, 1e-12) +
                                  1.0 / (z - 1.0) - 0.5 / z + 1.0 / (12.0 * (z + 1.0)) +
                                  adaptive_integrate(plain_part, 1.0, U, 1e-12);
  return integral / gamma_fn(z);
}

double zeta_hat(double z, const CurvatureSpectrum& spec) {
  double powers = 0.0;
  for (double aj : spec.a) powers += std::pow(aj, -z);
  double zeta = riemann_zeta(std::complex<double>(z, 0.0)).real();
  return spec.det_over_2pi() * powers * zeta * spec.vol;
}

double zeta_hat_prime_zero(const CurvatureSpectrum& spec) {
  double d = spec.det_over_2pi();
  return 0.5 * d * std::log(d) * spec.vol;
}

double zeta_hat_prime_zero_product_rule(const CurvatureSpectrum& spec) {
  // d/dz [ det (sum_j a_j^{-z}) zeta(z) vol ] at z = 0
  double d = spec.det_over_2pi();
  double log_sum = 0.0;
  for (double aj : spec.a) log_sum += std::log(aj);
  int n = spec.n();
  return d * spec.vol * (-log_sum * zeta_at_zero + n * zeta_prime_at_zero());
}

double theorem1_rhs(const CurvatureSpectrum& spec, int p) {
  if (p < 1) throw domain_error("theorem1_rhs: requires p >= 1");
  double d = spec.det_over_2pi();
  double pn = std::pow(static_cast<double>(p), spec.n());
  return 0.5 * spec.rank_e * pn * d * spec.vol * (spec.n() * std::log(p) + std::log(d));
}

}  // namespace ttorsion
