#pragma once

#include <complex>

namespace ttorsion {

// Euler-Mascheroni constant, frozen to 20 digits; euler_gamma_series below is
// the convergent oracle used by the tests to validate this value.
inline constexpr double euler_gamma = 0.57721566490153286060;

// Asymptotic estimate H_m - ln m - 1/(2m) + 1/(12 m^2) - 1/(120 m^4).
double euler_gamma_series(long m);

// Gamma function on the complex plane (Lanczos approximation, reflection for
// Re z < 1/2). Accurate to ~1e-13 relative on the needed domain.
std::complex<double> gamma_fn(std::complex<double> z);

// Exponential integral E1(x) = int_x^inf e^{-t}/t dt for x > 0.
double exp_integral_e1(double x);

// Riemann zeta away from z = 1 by accelerated alternating series.
// Reliable for |Im z| small and Re z > -2, which covers every use here.
std::complex<double> riemann_zeta(std::complex<double> z);

// Stored analytic continuation values.
inline constexpr double zeta_at_zero = -0.5;
double zeta_prime_at_zero();

}  // namespace ttorsion
