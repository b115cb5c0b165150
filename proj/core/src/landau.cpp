#include "ttorsion/landau.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>

#include <Eigen/Dense>

#include "ttorsion/clifford.hpp"
#include "ttorsion/errors.hpp"
#include "ttorsion/pgrading.hpp"
#include "ttorsion/quadrature.hpp"
#include "ttorsion/weyl.hpp"

namespace ttorsion {

namespace {

double cb_operator_norm(const TorusModel& model) {
  if (model.B.is_zero()) return 0.0;
  const SpinorSpace space(model.n());
  const CliffordElement cb = clifford_three_form(space, model.B);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cb.mat, Eigen::EigenvaluesOnly);
  double norm = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    norm = std::max(norm, std::abs(es.eigenvalues()(i)));
  return norm;
}

long binom_long(int n, int k) {
  if (k < 0 || k > n) return 0;
  long out = 1;
  for (int i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
  return out;
}

// Merge near-coincident eigenvalues; states arrive sorted ascending.
std::vector<SpectralEntry> cluster_states(
    std::vector<std::pair<double, std::vector<double>>>& states, int n, double ctol) {
  std::sort(states.begin(), states.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<SpectralEntry> out;
  for (const auto& [lambda, weights] : states) {
    if (!out.empty() && lambda - out.back().lambda <= ctol) {
      for (int q = 0; q <= n; ++q) out.back().mult[q] += weights[q];
      continue;
    }
    SpectralEntry e;
    e.lambda = lambda;
    e.mult = weights;
    out.push_back(std::move(e));
  }
  return out;
}

void finalize(SpectralData& data, const TorusModel& model, double tail_tol) {
  // Clamp the kernel cluster onto zero exactly.
  const double clamp = 1e-9 * std::max(1.0, data.lambda_keep);
  if (!data.entries.empty() && std::abs(data.entries.front().lambda) <= clamp)
    data.entries.front().lambda = 0.0;
  for (const auto& e : data.entries)
    if (e.lambda < 0.0)
      throw certification_error("landau_spectrum: negative eigenvalue " + std::to_string(e.lambda));

  data.tail_bound = spectral_tail_bound(data, data.tail_reference_u);
  if (!(data.tail_bound <= tail_tol)) {
    // Estimate a shell count that would certify, for the error message.
    SpectralData probe = data;
    int K = data.cutoff;
    while (K < 4096) {
      K *= 2;
      probe.cutoff = K;
      probe.lambda_keep = 2.0 * data.p * model.spec.min_a() * (K + 0.5);
      if (spectral_tail_bound(probe, data.tail_reference_u) <= tail_tol) break;
    }
    char msg[192];
    std::snprintf(msg, sizeof(msg),
                  "landau_spectrum: tail bound %.3e exceeds tolerance %.3e at u=%g; "
                  "retry with K >= %d",
                  data.tail_bound, tail_tol, data.tail_reference_u, K);
    throw certification_error(msg);
  }
}

}  // namespace

double spectral_tail_bound(const SpectralData& data, double u, bool plain) {
  if (!(u > 0)) throw domain_error("spectral_tail_bound: u must be positive");
  const int n = data.n;
  const double weight_factor =
      static_cast<double>(data.d_p) * (plain ? std::ldexp(1.0, n) : n * std::ldexp(1.0, n - 1));
  const double pn = std::pow(static_cast<double>(data.p), n);

  // Discarded true eigenvalues lambda > lambda_keep pair with oscillator
  // levels m whose sqrt(2 p a_min m) >= sqrt(lambda_keep) - cb_norm; a level-m
  // state can reach at most 2 p a_max (m + n), so start where that first
  // crosses the shifted threshold.
  const double thr = std::max(0.0, std::sqrt(std::max(0.0, data.lambda_keep)) - data.cb_norm);
  const double thr2 = thr * thr;
  long m0 = 0;
  while (2.0 * data.p * data.a_max * (m0 + n) < thr2 && m0 < (1L << 40)) ++m0;

  NeumaierSum sum;
  double prev_term = std::numeric_limits<double>::infinity();
  for (long m = m0; m < 2000000; ++m) {
    const double root = std::sqrt(2.0 * data.p * data.a_min * static_cast<double>(m));
    const double shifted = std::max(0.0, root - data.cb_norm);
    const double count = static_cast<double>(binom_long(static_cast<int>(m) + n - 1, n - 1));
    const double term = weight_factor * count * std::exp(-u * shifted * shifted / (2.0 * data.p));
    sum.add(term);
    if (term < 1e-280 && term < prev_term) break;
    prev_term = term;
  }
  return sum.value() / pn;
}

SpectralData landau_spectrum_closed_form(const TorusModel& model, int p, int K,
                                         double tail_tol, double tail_reference_u) {
  if (p < 1) throw domain_error("landau_spectrum: p must be positive");
  if (K < 1) throw domain_error("landau_spectrum: K must be positive");
  if (!model.B.is_zero())
    throw domain_error("landau_spectrum_closed_form: requires a vanishing three-form");

  const int n = model.n();
  const auto& a = model.spec.a;
  SpectralData data;
  data.p = p;
  data.n = n;
  data.cutoff = K;
  data.d_p = model.d_p(p);
  data.a_min = model.spec.min_a();
  data.a_max = *std::max_element(a.begin(), a.end());
  data.cb_norm = 0.0;
  data.tail_reference_u = tail_reference_u;
  data.lambda_keep = 2.0 * p * data.a_min * (K + 0.5);

  const double budget = data.lambda_keep / (2.0 * p);
  std::vector<std::pair<double, std::vector<double>>> states;
  std::vector<int> k(n, 0);
  const double dp = static_cast<double>(data.d_p);

  auto emit = [&]() {
    double base = 0.0;
    for (int l = 0; l < n; ++l) base += a[l] * k[l];
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      double shifted = base;
      int q = 0;
      for (int l = 0; l < n; ++l)
        if (mask & (1u << l)) {
          shifted += a[l];
          ++q;
        }
      const double lambda = 2.0 * p * shifted;
      if (lambda <= data.lambda_keep * (1.0 + 1e-12)) {
        std::vector<double> w(n + 1, 0.0);
        w[q] = dp;
        states.emplace_back(lambda, std::move(w));
      }
    }
  };

  // Depth-first walk over k with sum a_l k_l within budget.
  auto walk = [&](auto&& self, int l, double used) -> void {
    if (l == n) {
      emit();
      return;
    }
    for (k[l] = 0; used + a[l] * k[l] <= budget; ++k[l]) self(self, l + 1, used + a[l] * k[l]);
    k[l] = 0;
  };
  walk(walk, 0, 0.0);

  const double ctol = 1e-9 * std::max(1.0, data.lambda_keep);
  data.entries = cluster_states(states, n, ctol);
  finalize(data, model, tail_tol);
  return data;
}

SpectralData landau_spectrum_ladder(const TorusModel& model, int p, int K,
                                    double tail_tol, double tail_reference_u) {
  if (p < 1) throw domain_error("landau_spectrum: p must be positive");
  if (K < 1) throw domain_error("landau_spectrum: K must be positive");

  const int n = model.n();
  const int fiber = 1 << n;
  const auto& a = model.spec.a;

  SpectralData data;
  data.p = p;
  data.n = n;
  data.cutoff = K;
  data.d_p = model.d_p(p);
  data.a_min = model.spec.min_a();
  data.a_max = *std::max_element(a.begin(), a.end());
  data.cb_norm = cb_operator_norm(model);
  data.tail_reference_u = tail_reference_u;
  data.lambda_keep = 2.0 * p * data.a_min * (K + 0.5);

  const SymbolicOperator squared = assemble_dirac_squared(model);
  std::vector<Rational> a_rat;
  for (double v : a) a_rat.push_back(rational_from_double(v));
  const weyl::Poly reduced = weyl::from_symbolic(squared, p, a_rat);
  if (!reduced.g_free())
    throw error("landau_spectrum_ladder: guiding-center factors failed to cancel");

  // Fock basis: all oscillator occupation tuples with total level <= Kb.
  const int Kb = K + 8;
  std::vector<std::vector<int>> basis;
  std::map<std::vector<int>, int> index_of;
  {
    std::vector<int> k(n, 0);
    auto walk = [&](auto&& self, int l, int used) -> void {
      if (l == n) {
        index_of.emplace(k, static_cast<int>(basis.size()));
        basis.push_back(k);
        return;
      }
      for (k[l] = 0; used + k[l] <= Kb; ++k[l]) self(self, l + 1, used + k[l]);
      k[l] = 0;
    };
    walk(walk, 0, 0);
  }
  const int nf = static_cast<int>(basis.size());
  const Eigen::Index dim = static_cast<Eigen::Index>(nf) * fiber;

  std::vector<double> b(n);
  for (int l = 0; l < n; ++l) b[l] = static_cast<double>(p) * a[l];

  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
  using Amp = std::map<std::vector<int>, std::complex<double>>;
  const std::complex<double> mi(0.0, -1.0);

  for (const auto& [key, coeff] : reduced.terms()) {
    const Eigen::MatrixXcd C = coeff.to_complex();
    for (int col = 0; col < nf; ++col) {
      Amp amp;
      amp.emplace(basis[col], std::complex<double>(1.0, 0.0));
      for (int i = 2 * n - 1; i >= 0; --i) {
        const int l = i / 2;
        const double s = std::sqrt(b[l] / 2.0);
        for (int rep = 0; rep < key.v[i]; ++rep) {
          Amp next;
          for (const auto& [kvec, c] : amp) {
            const int kl = kvec[l];
            std::vector<int> down = kvec;
            std::vector<int> up = kvec;
            up[l] += 1;
            if (i % 2 == 0) {
              // V_{2l} = s (alpha - alpha^dag)
              if (kl > 0) {
                down[l] -= 1;
                next[down] += c * s * std::sqrt(static_cast<double>(kl));
              }
              next[up] -= c * s * std::sqrt(static_cast<double>(kl + 1));
            } else {
              // V_{2l+1} = -i s (alpha + alpha^dag)
              if (kl > 0) {
                down[l] -= 1;
                next[down] += c * mi * s * std::sqrt(static_cast<double>(kl));
              }
              next[up] += c * mi * s * std::sqrt(static_cast<double>(kl + 1));
            }
          }
          amp.swap(next);
        }
      }
      for (const auto& [kvec, c] : amp) {
        auto it = index_of.find(kvec);
        if (it == index_of.end()) continue;
        const int row = it->second;
        for (int sp = 0; sp < fiber; ++sp)
          for (int s2 = 0; s2 < fiber; ++s2)
            H(static_cast<Eigen::Index>(row) * fiber + s2,
              static_cast<Eigen::Index>(col) * fiber + sp) += c * C(s2, sp);
      }
    }
  }

  const double hnorm = H.norm();
  if ((H - H.adjoint()).norm() > 1e-9 * std::max(1.0, hnorm))
    throw error("landau_spectrum_ladder: assembled matrix is not self-adjoint");
  H = ((H + Eigen::MatrixXcd(H.adjoint())) * 0.5).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success) throw error("landau_spectrum_ladder: eigensolver failed");

  std::vector<int> degree_of(fiber);
  for (int s = 0; s < fiber; ++s) degree_of[s] = __builtin_popcount(static_cast<unsigned>(s));

  const double dp = static_cast<double>(data.d_p);
  std::vector<std::pair<double, std::vector<double>>> states;
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double lambda = es.eigenvalues()(i);
    if (lambda > data.lambda_keep * (1.0 + 1e-12)) continue;
    std::vector<double> w(n + 1, 0.0);
    for (Eigen::Index r = 0; r < dim; ++r) {
      const int sp = static_cast<int>(r % fiber);
      w[degree_of[sp]] += dp * std::norm(es.eigenvectors()(r, i));
    }
    states.emplace_back(lambda, std::move(w));
  }

  const double ctol = 1e-9 * std::max(1.0, data.lambda_keep);
  data.entries = cluster_states(states, n, ctol);
  finalize(data, model, tail_tol);
  return data;
}

SpectralData landau_spectrum(const TorusModel& model, int p, int K,
                             double tail_tol, double tail_reference_u) {
  if (model.B.is_zero()) return landau_spectrum_closed_form(model, p, K, tail_tol, tail_reference_u);
  return landau_spectrum_ladder(model, p, K, tail_tol, tail_reference_u);
}

double spectral_gap(const SpectralData& data) {
  const double floor = 1e-7 * std::max(1.0, 2.0 * data.p * data.a_min);
  for (const auto& e : data.entries)
    if (e.lambda > floor) return e.lambda;
  throw domain_error("spectral_gap: no positive eigenvalue kept");
}

KernelData kernel_data(const TorusModel& model, int p) {
  const SpectralData data =
      landau_spectrum(model, p, 6, std::numeric_limits<double>::infinity());
  if (data.entries.empty()) throw certification_error("kernel_data: empty spectrum");
  const SpectralEntry& bottom = data.entries.front();
  const double gap_scale = 2.0 * p * data.a_min;
  if (!(bottom.lambda == 0.0))
    throw certification_error("kernel_data: bottom cluster not at zero (p below gap regime)");
  if (data.entries.size() < 2 || data.entries[1].lambda < 0.25 * gap_scale)
    throw certification_error("kernel_data: kernel not cleanly separated from first excited cluster");

  double even = 0.0, odd = 0.0, total = 0.0;
  for (int q = 0; q < static_cast<int>(bottom.mult.size()); ++q) {
    total += bottom.mult[q];
    if (q % 2 == 0)
      even += bottom.mult[q];
    else
      odd += bottom.mult[q];
  }
  KernelData out;
  const double re = std::round(even), ro = std::round(odd);
  if (std::abs(even - re) > 1e-6 * std::max(1.0, even) ||
      std::abs(odd - ro) > 1e-6 * std::max(1.0, odd))
    throw certification_error("kernel_data: kernel parity weights are not integral");
  out.dim_plus = static_cast<long>(re);
  out.dim_minus = static_cast<long>(ro);
  out.concentration = total > 0 ? bottom.mult[0] / total : 0.0;
  return out;
}

nlohmann::json SpectralData::to_json() const {
  nlohmann::json j;
  j["schema"] = schema;
  j["p"] = p;
  j["n"] = n;
  j["cutoff"] = cutoff;
  j["d_p"] = d_p;
  j["lambda_keep"] = lambda_keep;
  j["a_min"] = a_min;
  j["a_max"] = a_max;
  j["cb_norm"] = cb_norm;
  j["tail_reference_u"] = tail_reference_u;
  j["tail_bound"] = tail_bound;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json je;
    je["lambda"] = e.lambda;
    je["mult"] = e.mult;
    j["entries"].push_back(je);
  }
  return j;
}

SpectralData SpectralData::from_json(const nlohmann::json& j) {
  static const char* keys[] = {"schema", "p",      "n",           "cutoff",
                               "d_p",    "lambda_keep", "a_min",  "a_max",
                               "cb_norm", "tail_reference_u", "tail_bound", "entries"};
  if (!j.is_object()) throw config_error("SpectralData: expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys)
      if (it.key() == k) known = true;
    if (!known) throw config_error("SpectralData: unknown key '" + it.key() + "'");
  }
  for (const char* k : keys)
    if (!j.contains(k)) throw config_error(std::string("SpectralData: missing key '") + k + "'");
  if (j["schema"].get<int>() != 1)
    throw config_error("SpectralData: unsupported schema " + j["schema"].dump());

  SpectralData d;
  d.schema = 1;
  d.p = j["p"].get<int>();
  d.n = j["n"].get<int>();
  d.cutoff = j["cutoff"].get<int>();
  d.d_p = j["d_p"].get<long>();
  d.lambda_keep = j["lambda_keep"].get<double>();
  d.a_min = j["a_min"].get<double>();
  d.a_max = j["a_max"].get<double>();
  d.cb_norm = j["cb_norm"].get<double>();
  d.tail_reference_u = j["tail_reference_u"].get<double>();
  d.tail_bound = j["tail_bound"].get<double>();
  for (const auto& je : j.at("entries")) {
    if (!je.is_object() || je.size() != 2 || !je.contains("lambda") || !je.contains("mult"))
      throw config_error("SpectralData: malformed entry");
    SpectralEntry e;
    e.lambda = je["lambda"].get<double>();
    e.mult = je["mult"].get<std::vector<double>>();
    if (static_cast<int>(e.mult.size()) != d.n + 1)
      throw config_error("SpectralData: entry weight vector has wrong length");
    d.entries.push_back(std::move(e));
  }
  return d;
}

}  // namespace ttorsion
