#pragma once

#include <complex>
#include <vector>

#include "ttorsion/clifford.hpp"
#include "ttorsion/curvature.hpp"
#include "ttorsion/exact.hpp"

namespace ttorsion {

struct LaurentCoeffs {
  double alpha_minus1 = 0.0;
  double alpha_0 = 0.0;
};

// Fiberwise model density: str_N(e^{u omega_d}) det(a/2pi) / prod(1 - e^{-u a_j}),
// assembled from the spinor-space operations.
double local_density(double u, const CurvatureSpectrum& spec);

// The same density through the resolvent-trace identity
// det(a/2pi) * sum_j -e^{-u a_j} / (1 - e^{-u a_j}).
double trace_form(double u, const CurvatureSpectrum& spec);

// Laurent data of vol * local_density at u -> 0:
// alpha_minus1 = -det(a/2pi) (sum_j 1/a_j) vol, alpha_0 = (n/2) det(a/2pi) vol.
LaurentCoeffs laurent_coeffs(const CurvatureSpectrum& spec);

// kappa_j defined by e^{u omega_d} det(a) / prod(1-e^{-u a}) = sum_j u^{j-n} kappa_j / 2^j.
// Exact rational path; the double overload converts the inputs exactly.
std::vector<RatMatrix> kappa_coefficients_rat(int n, const std::vector<Rational>& a,
                                              int jmax);
std::vector<CliffordElement> kappa_coefficients(const CurvatureSpectrum& spec, int jmax);

// (1/Gamma(z)) int_0^inf u^{z-1} e^{-u}/(1-e^{-u}) du for Re z > 1, by adaptive
// quadrature with the 1/u endpoint singularity subtracted analytically.
// Analytic continuation values at z = 0 live in special.hpp.
std::complex<double> riemann_zeta_mellin(std::complex<double> z);

// zeta_hat(z) = det(a/2pi) (sum_j a_j^{-z}) zeta(z) vol  (constant model).
double zeta_hat(double z, const CurvatureSpectrum& spec);

// Closed form (1/2) det(a/2pi) ln det(a/2pi) vol.
double zeta_hat_prime_zero(const CurvatureSpectrum& spec);

// Product-rule evaluation with the stored zeta(0), zeta'(0) constants; must
// agree with the closed form, asserted by the tests rather than trusted.
double zeta_hat_prime_zero_product_rule(const CurvatureSpectrum& spec);

// (1/2) rank_e p^n det(a/2pi) vol (n ln p + ln det(a/2pi)).
double theorem1_rhs(const CurvatureSpectrum& spec, int p);

}  // namespace ttorsion
