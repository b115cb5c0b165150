#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace ttorsion {

struct KrylovOptions {
  int nev = 10;           // converged lowest eigenvalues requested
  int max_basis = 60;     // Rayleigh-Ritz window size
  int max_cycles = 600;   // restart budget
  double tol = 1e-8;      // residual tolerance, relative to the spectral scale
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

// Lowest eigenvalues of a Hermitian operator provided as a matvec callback,
// by thick-restart Rayleigh-Ritz iteration with full reorthogonalization.
// Deterministic for a fixed seed. Throws certification_error when the restart
// budget runs out before the requested pairs converge.
std::vector<double> lowest_eigenvalues(
    const std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>& apply,
    Eigen::Index dim, const KrylovOptions& opts = {});

}  // namespace ttorsion
