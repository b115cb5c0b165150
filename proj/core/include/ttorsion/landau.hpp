#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ttorsion/model.hpp"

namespace ttorsion {

// One eigenvalue cluster of the squared twisted operator, with the spectral
// weight carried in each exterior degree q = 0..n. Weights are d_p-scaled
// occupation numbers; they are integral when the three-form vanishes and may
// be fractional otherwise (eigenvectors then mix degrees).
struct SpectralEntry {
  double lambda = 0.0;
  std::vector<double> mult;  // size n + 1
};

// Eigenvalue data below the kept threshold, plus everything needed to bound
// the discarded heat-trace mass at any evolution time u.
struct SpectralData {
  int schema = 1;
  int p = 1;
  int n = 1;
  int cutoff = 0;          // oscillator-shell truncation K
  long d_p = 0;            // per-level bulk degeneracy
  double lambda_keep = 0;  // entries listed iff lambda <= lambda_keep
  double a_min = 0;
  double a_max = 0;
  double cb_norm = 0;      // operator norm of the three-form Clifford action
  double tail_reference_u = 0.2;
  double tail_bound = 0;   // discarded N-weighted mass bound at tail_reference_u
  std::vector<SpectralEntry> entries;  // ascending lambda

  nlohmann::json to_json() const;
  static SpectralData from_json(const nlohmann::json& j);
};

// Bound on p^{-n} * sum over discarded states of |weight| e^{-u lambda / 2p}.
// N-weighted counting by default; plain = true bounds the unweighted
// supertrace variant instead.
double spectral_tail_bound(const SpectralData& data, double u, bool plain = false);

// Spectrum of the squared twisted operator on the 2n-torus model at tensor
// power p, truncated at oscillator shell K. The untwisted path enumerates the
// closed-form levels; the twisted path eliminates guiding centers exactly and
// diagonalizes the ladder representation on a buffered Fock basis.
// Throws certification_error when K is too small to push the tail bound at
// the reference time below tail_tol.
SpectralData landau_spectrum(const TorusModel& model, int p, int K,
                             double tail_tol = 1e-9, double tail_reference_u = 0.2);

// Forced code paths, exposed so tests can cross-validate one against the other.
SpectralData landau_spectrum_closed_form(const TorusModel& model, int p, int K,
                                         double tail_tol = 1e-9, double tail_reference_u = 0.2);
SpectralData landau_spectrum_ladder(const TorusModel& model, int p, int K,
                                    double tail_tol = 1e-9, double tail_reference_u = 0.2);

// Smallest positive eigenvalue. Throws domain_error when no positive
// eigenvalue was kept.
double spectral_gap(const SpectralData& data);

struct KernelData {
  long dim_plus = 0;   // even-degree kernel dimension
  long dim_minus = 0;  // odd-degree kernel dimension
  double concentration = 0;  // kernel weight fraction in degree zero
};

// Kernel dimensions split by parity. Throws certification_error when the
// bottom of the spectrum is not cleanly separated from the first excited
// cluster (p below the resolvable-gap regime).
KernelData kernel_data(const TorusModel& model, int p);

}  // namespace ttorsion
