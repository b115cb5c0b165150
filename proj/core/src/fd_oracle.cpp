#include "ttorsion/fd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ttorsion/clifford.hpp"
#include "ttorsion/errors.hpp"
#include "ttorsion/lanczos.hpp"

namespace ttorsion {

namespace {

constexpr double kPi = 3.14159265358979323846;

long plane_flux(const TorusModel& model, int p, int l) {
  const int n = model.n();
  const double area = std::pow(model.spec.vol, 1.0 / n);
  const double f = p * model.spec.a[l] * area / (2.0 * kPi);
  const double r = std::round(f);
  if (!(r >= 1.0) || std::abs(f - r) > 1e-8 * std::max(1.0, r))
    throw domain_error("fd_low_spectrum: per-plane flux must be a positive integer");
  return static_cast<long>(r);
}

// Dense spectrum of the discretized scalar magnetic Laplacian on one plane
// with `flux` quanta through the N x N periodic cell of side s.
Eigen::VectorXd plane_spectrum(long flux, int N, double s) {
  const double h = s / N;
  const double phi = 2.0 * kPi * static_cast<double>(flux) / (static_cast<double>(N) * N);
  const double phi_row = 2.0 * kPi * static_cast<double>(flux) / N;
  const Eigen::Index dim = static_cast<Eigen::Index>(N) * N;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
  const std::complex<double> I(0.0, 1.0);

  auto idx = [N](int x, int y) { return static_cast<Eigen::Index>(x) * N + y; };
  for (int x = 0; x < N; ++x) {
    for (int y = 0; y < N; ++y) {
      const Eigen::Index v = idx(x, y);
      H(v, v) += 4.0 / (h * h);
      // Forward link in x; wrap column carries the boundary phase.
      const std::complex<double> ux = (x == N - 1) ? std::exp(I * (phi_row * y))
                                                   : std::complex<double>(1.0, 0.0);
      const Eigen::Index vx = idx((x + 1) % N, y);
      H(vx, v) -= ux / (h * h);
      H(v, vx) -= std::conj(ux) / (h * h);
      // Forward link in y.
      const std::complex<double> uy = std::exp(-I * (phi * x));
      const Eigen::Index vy = idx(x, (y + 1) % N);
      H(vy, v) -= uy / (h * h);
      H(v, vy) -= std::conj(uy) / (h * h);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw error("fd_low_spectrum: plane solve failed");
  return es.eigenvalues();
}

std::vector<double> lowest(std::vector<double> v, int count) {
  std::sort(v.begin(), v.end());
  if (static_cast<int>(v.size()) > count) v.resize(count);
  return v;
}

std::vector<double> spectrum_n1(const TorusModel& model, int p, int N, int count) {
  const long flux = plane_flux(model, p, 0);
  const double s = std::sqrt(model.spec.vol);
  const Eigen::VectorXd mu = plane_spectrum(flux, N, s);
  const double shift = p * model.spec.a[0];
  std::vector<double> all;
  all.reserve(2 * mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    all.push_back(mu(i) - shift);
    all.push_back(mu(i) + shift);
  }
  return lowest(std::move(all), count);
}

std::vector<double> spectrum_n2_product(const TorusModel& model, int p, int N, int count) {
  const double area = std::sqrt(model.spec.vol);
  const double s = std::sqrt(area);
  std::vector<Eigen::VectorXd> mu;
  for (int l = 0; l < 2; ++l) mu.push_back(plane_spectrum(plane_flux(model, p, l), N, s));

  const SpinorSpace space(2);
  const CliffordElement cr = clifford_curvature(space, model.spec.a);
  std::vector<double> shifts;
  for (int sidx = 0; sidx < 4; ++sidx) shifts.push_back(p * cr.mat(sidx, sidx).real());

  const int L = std::min<int>(400, static_cast<int>(mu[0].size()));
  std::vector<double> all;
  all.reserve(static_cast<std::size_t>(L) * L * 4);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j)
      for (double shift : shifts) all.push_back(mu[0](i) + mu[1](j) + shift);
  return lowest(std::move(all), count);
}

std::vector<double> spectrum_n2_twisted(const TorusModel& model, int p, int N, int count) {
  const double area = std::sqrt(model.spec.vol);
  const double s = std::sqrt(area);
  const double h = s / N;
  const long F0 = plane_flux(model, p, 0);
  const long F1 = plane_flux(model, p, 1);

  const SpinorSpace space(2);
  const CliffordElement cr = clifford_curvature(space, model.spec.a);
  const CliffordElement cb = clifford_three_form(space, model.B);
  Eigen::Matrix4cd diag = (8.0 / (h * h)) * Eigen::Matrix4cd::Identity();
  diag += static_cast<double>(p) * cr.mat + cb.mat * cb.mat;

  std::vector<Eigen::Matrix4cd> fwd(4), bwd(4);
  for (int i = 0; i < 4; ++i) {
    const Eigen::Matrix4cd Ci = clifford_contraction_three_form(space, model.B, i).mat;
    fwd[i] = -Eigen::Matrix4cd::Identity() / (h * h) - Ci / h;
    bwd[i] = -Eigen::Matrix4cd::Identity() / (h * h) + Ci / h;
  }

  const std::complex<double> I(0.0, 1.0);
  std::vector<std::vector<std::complex<double>>> row_phase(2), col_phase(2);
  const long flux[2] = {F0, F1};
  for (int l = 0; l < 2; ++l) {
    const double phi = 2.0 * kPi * static_cast<double>(flux[l]) / (static_cast<double>(N) * N);
    const double phi_row = 2.0 * kPi * static_cast<double>(flux[l]) / N;
    row_phase[l].resize(N);
    col_phase[l].resize(N);
    for (int t = 0; t < N; ++t) {
      row_phase[l][t] = std::exp(I * (phi_row * t));
      col_phase[l][t] = std::exp(-I * (phi * t));
    }
  }

  const Eigen::Index sites = static_cast<Eigen::Index>(N) * N * N * N;
  const Eigen::Index dim = sites * 4;

  auto link = [&](int i, const int* x) -> std::complex<double> {
    const int l = i / 2;
    const int u = x[2 * l], w = x[2 * l + 1];
    if (i % 2 == 0) return (u == N - 1) ? row_phase[l][w] : std::complex<double>(1.0, 0.0);
    return col_phase[l][u];
  };

  auto apply = [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
    out.resize(dim);
    int x[4];
    const long stride[4] = {static_cast<long>(N) * N * N * 4, static_cast<long>(N) * N * 4,
                            static_cast<long>(N) * 4, 4};
    for (x[0] = 0; x[0] < N; ++x[0])
      for (x[1] = 0; x[1] < N; ++x[1])
        for (x[2] = 0; x[2] < N; ++x[2])
          for (x[3] = 0; x[3] < N; ++x[3]) {
            long base = 0;
            for (int i = 0; i < 4; ++i) base += x[i] * stride[i];
            Eigen::Vector4cd acc = diag * in.segment<4>(base);
            for (int i = 0; i < 4; ++i) {
              int xf[4] = {x[0], x[1], x[2], x[3]};
              xf[i] = (x[i] + 1) % N;
              long fb = 0;
              for (int d = 0; d < 4; ++d) fb += xf[d] * stride[d];
              acc += link(i, x) * (fwd[i] * in.segment<4>(fb));

              int xb[4] = {x[0], x[1], x[2], x[3]};
              xb[i] = (x[i] + N - 1) % N;
              long bb = 0;
              for (int d = 0; d < 4; ++d) bb += xb[d] * stride[d];
              acc += std::conj(link(i, xb)) * (bwd[i] * in.segment<4>(bb));
            }
            out.segment<4>(base) = acc;
          }
  };

  KrylovOptions opts;
  opts.nev = count;
  opts.max_basis = std::max(60, count + 30);
  // Discretization error dominates at O(h^2); tighter residuals buy nothing.
  opts.tol = 1e-7;
  return lowest_eigenvalues(apply, dim, opts);
}

}  // namespace

std::vector<double> fd_low_spectrum(const TorusModel& model, int p, int grid, int count) {
  if (p < 1) throw domain_error("fd_low_spectrum: p must be positive");
  if (grid < 4) throw domain_error("fd_low_spectrum: grid too coarse");
  if (count < 1) throw domain_error("fd_low_spectrum: count must be positive");
  const int n = model.n();
  if (n == 1) return spectrum_n1(model, p, grid, count);
  if (n == 2 && model.B.is_zero()) return spectrum_n2_product(model, p, grid, count);
  if (n == 2) return spectrum_n2_twisted(model, p, grid, count);
  throw domain_error("fd_low_spectrum: grid oracle implemented for n <= 2");
}

std::vector<double> distinct_levels(const std::vector<double>& values, double merge_tol) {
  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  double acc = 0.0;
  int run = 0;
  for (double v : sorted) {
    if (run > 0 && v - acc / run > merge_tol) {
      out.push_back(acc / run);
      acc = 0.0;
      run = 0;
    }
    acc += v;
    ++run;
  }
  if (run > 0) out.push_back(acc / run);
  return out;
}

}  // namespace ttorsion
