#pragma once

#include <numbers>
#include <vector>

#include "ttorsion/errors.hpp"

namespace ttorsion {

// Constant positive curvature data of the line bundle on the model torus:
// eigenvalues a_j of the curvature endomorphism, total volume, and the rank
// of the auxiliary flat bundle.
struct CurvatureSpectrum {
  std::vector<double> a;
  double vol = 1.0;
  int rank_e = 1;

  CurvatureSpectrum(std::vector<double> a_in, double vol_in, int rank_e_in)
      : a(std::move(a_in)), vol(vol_in), rank_e(rank_e_in) {
    if (a.empty()) throw domain_error("CurvatureSpectrum: empty eigenvalue list");
    for (double v : a)
      if (!(v > 0.0)) throw domain_error("CurvatureSpectrum: eigenvalues must be positive");
    if (!(vol > 0.0)) throw domain_error("CurvatureSpectrum: volume must be positive");
    if (rank_e < 1) throw domain_error("CurvatureSpectrum: rank must be at least 1");
  }

  int n() const { return static_cast<int>(a.size()); }

  double det_over_2pi() const {
    double d = 1.0;
    for (double v : a) d *= v / (2.0 * std::numbers::pi);
    return d;
  }

  // The symplectic volume: integral of the top power of the curvature form
  // divided by n factorial.
  double omega_integral() const { return det_over_2pi() * vol; }

  double min_a() const {
    double m = a[0];
    for (double v : a) m = std::min(m, v);
    return m;
  }
};

}  // namespace ttorsion
