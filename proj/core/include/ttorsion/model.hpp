#pragma once

#include <cmath>

#include "ttorsion/clifford.hpp"
#include "ttorsion/curvature.hpp"
#include "ttorsion/errors.hpp"

namespace ttorsion {

// Flat torus with constant positive line-bundle curvature, an optional
// constant three-form twist, and a trivial rank_e bundle.
struct TorusModel {
  CurvatureSpectrum spec;
  ThreeForm B;

  TorusModel(CurvatureSpectrum spec_in, ThreeForm B_in)
      : spec(std::move(spec_in)), B(std::move(B_in)) {
    if (B.n() != spec.n()) throw domain_error("TorusModel: dimension mismatch");
    if (spec.n() == 1 && !B.is_zero())
      throw domain_error("TorusModel: three-form must vanish when n = 1");
    double flux = spec.rank_e * spec.omega_integral();
    double rounded = std::round(flux);
    if (!(rounded >= 1.0) || std::abs(flux - rounded) > 1e-8 * std::max(1.0, rounded))
      throw domain_error("TorusModel: rank_e * integral of omega^n/n! must be a positive integer");
  }

  int n() const { return spec.n(); }

  // Transverse degeneracy of each reduced state; an exact positive integer.
  long d_p(int p) const {
    if (p < 1) throw domain_error("TorusModel::d_p: requires p >= 1");
    double pn = std::pow(static_cast<double>(p), n());
    return std::lround(spec.rank_e * pn * spec.omega_integral());
  }
};

}  // namespace ttorsion
