#include "ttorsion/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ttorsion/errors.hpp"

namespace ttorsion {

namespace {

Eigen::VectorXcd random_vector(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = std::complex<double>(g(rng), g(rng));
  return v;
}

// Two-pass classical Gram-Schmidt against the first m columns of Q.
void orthogonalize(const Eigen::MatrixXcd& Q, int m, Eigen::VectorXcd& w) {
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::VectorXcd h = Q.leftCols(m).adjoint() * w;
    w.noalias() -= Q.leftCols(m) * h;
  }
}

}  // namespace

std::vector<double> lowest_eigenvalues(
    const std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>& apply,
    Eigen::Index dim, const KrylovOptions& opts) {
  if (dim < 1) throw domain_error("lowest_eigenvalues: empty space");
  if (opts.nev < 1) throw domain_error("lowest_eigenvalues: nev must be positive");

  const int nev = static_cast<int>(std::min<Eigen::Index>(opts.nev, dim));
  const int max_basis = static_cast<int>(std::min<Eigen::Index>(std::max(opts.max_basis, nev + 8), dim));

  std::mt19937_64 rng(opts.seed);
  Eigen::MatrixXcd Q(dim, max_basis);
  Eigen::MatrixXcd AQ(dim, max_basis);

  Eigen::VectorXcd q0 = random_vector(dim, rng);
  q0.normalize();
  Q.col(0) = q0;
  int m = 1;        // orthonormal basis size
  int filled = 0;   // AQ columns computed

  Eigen::VectorXcd w(dim);
  for (int cycle = 0; cycle < opts.max_cycles; ++cycle) {
    // Expand until the window is full.
    while (m < max_basis || filled < m) {
      apply(Q.col(filled), w);
      AQ.col(filled) = w;
      ++filled;
      if (m < max_basis && filled == m) {
        Eigen::VectorXcd v = w;
        orthogonalize(Q, m, v);
        double beta = v.norm();
        int guard = 0;
        while (beta < 1e-12 && guard++ < 8) {
          v = random_vector(dim, rng);
          orthogonalize(Q, m, v);
          beta = v.norm();
        }
        if (beta < 1e-12) break;  // space exhausted
        Q.col(m) = v / beta;
        ++m;
      }
      if (m == max_basis && filled == m) break;
    }

    // Rayleigh-Ritz on the current window.
    Eigen::MatrixXcd H = Q.leftCols(filled).adjoint() * AQ.leftCols(filled);
    H = ((H + Eigen::MatrixXcd(H.adjoint())) * 0.5).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success) throw error("lowest_eigenvalues: dense solve failed");

    const Eigen::VectorXd theta = es.eigenvalues();
    const Eigen::MatrixXcd S = es.eigenvectors();
    const double scale = std::max(1.0, theta.cwiseAbs().maxCoeff());

    Eigen::MatrixXcd RQ = Q.leftCols(filled) * S;
    Eigen::MatrixXcd RAQ = AQ.leftCols(filled) * S;

    int converged = 0;
    int first_bad = -1;
    for (int i = 0; i < std::min(nev, filled); ++i) {
      const double res = (RAQ.col(i) - theta(i) * RQ.col(i)).norm();
      if (res <= opts.tol * scale) {
        ++converged;
      } else if (first_bad < 0) {
        first_bad = i;
      }
    }
    if (converged >= nev || filled >= dim) {
      std::vector<double> out(theta.data(), theta.data() + std::min(nev, filled));
      return out;
    }

    // Thick restart: keep low Ritz vectors, re-enter along an unconverged residual.
    const int keep = std::max(1, std::min({nev + 20, max_basis - 6, filled - 3}));
    Q.leftCols(keep) = RQ.leftCols(keep);
    AQ.leftCols(keep) = RAQ.leftCols(keep);
    m = keep;
    filled = keep;

    const int seed_col = first_bad >= 0 ? first_bad : 0;
    Eigen::VectorXcd r = RAQ.col(seed_col) - theta(seed_col) * RQ.col(seed_col);
    orthogonalize(Q, m, r);
    double beta = r.norm();
    int guard = 0;
    while (beta < 1e-12 && guard++ < 8) {
      r = random_vector(dim, rng);
      orthogonalize(Q, m, r);
      beta = r.norm();
    }
    if (beta < 1e-12) throw certification_error("lowest_eigenvalues: basis collapse");
    if (m < max_basis) {
      Q.col(m) = r / beta;
      ++m;
    }
  }
  throw certification_error("lowest_eigenvalues: restart budget exhausted before convergence");
}

}  // namespace ttorsion
