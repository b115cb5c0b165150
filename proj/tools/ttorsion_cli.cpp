#include <CLI11.hpp>

#include <clocale>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "ttorsion/config.hpp"
#include "ttorsion/landau.hpp"
#include "ttorsion/model_kernel.hpp"
#include "ttorsion/pgrading.hpp"
#include "ttorsion/special.hpp"
#include "ttorsion/theta.hpp"

namespace fs = std::filesystem;
using namespace ttorsion;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCriteriaFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCertification = 3;

std::string g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string g6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

RunConfig default_config() {
  CurvatureSpectrum spec({2.0 * std::numbers::pi}, 1.0, 1);
  ThreeForm B(1);
  RunConfig cfg{TorusModel(spec, B), {8, 16, 32, 64}};
  cfg.cutoff = 20;
  return cfg;
}

std::string model_line(const TorusModel& model) {
  std::string s = "model: n=" + std::to_string(model.n()) + " a=(";
  for (int i = 0; i < model.n(); ++i) {
    if (i) s += ",";
    s += g17(model.spec.a[i]);
  }
  s += ") vol=" + g17(model.spec.vol) + " rank_e=" + std::to_string(model.spec.rank_e) + " B={";
  bool first = true;
  const int d = 2 * model.n();
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = j + 1; k < d; ++k) {
        double v = model.B.get(i, j, k);
        if (v != 0.0) {
          if (!first) s += ",";
          first = false;
          s += "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) +
               ")=" + g17(v);
        }
      }
  s += "}";
  return s;
}

// Writes through a temp file plus rename so concurrent sweeps never observe a
// half-written cache entry.
void write_file_atomic(const fs::path& path, const std::string& bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw error("cannot open '" + tmp.string() + "' for writing");
    out << bytes;
    out.flush();
    if (!out) throw error("write failure on '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  bool force = false;
  std::vector<std::string> tolerance_overrides;
};

void attach_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "JSON run configuration (built-in default if omitted)");
  sub->add_option("--out", args.out_dir, "output directory (overrides the config)");
  sub->add_flag("--force", args.force, "recompute cached artifacts");
  sub->add_option("--tolerance", args.tolerance_overrides,
                  "override a tolerance, NAME=VALUE (repeatable)");
}

RunConfig make_config(const CommonArgs& args) {
  RunConfig cfg = args.config_path.empty() ? default_config() : load_config(args.config_path);
  for (const auto& t : args.tolerance_overrides) apply_tolerance_override(cfg, t);
  if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
  return cfg;
}

fs::path spectrum_cache_path(const RunConfig& cfg, int p, int K) {
  return fs::path(cfg.output_dir) / ("spectrum_" + content_hash(cfg.cache_key_material(p, K)) + ".json");
}

// Loads a cached spectrum when present and matching, otherwise computes and
// stores it. Returns the data plus whether the cache served it.
SpectralData cached_spectrum(const RunConfig& cfg, int p, int K, bool force, bool* from_cache) {
  const fs::path path = spectrum_cache_path(cfg, p, K);
  if (!force && fs::exists(path)) {
    std::ifstream in(path);
    nlohmann::json j;
    in >> j;
    SpectralData data = SpectralData::from_json(j);
    if (data.p != p || data.cutoff != K)
      throw error("cache entry '" + path.string() + "' does not match its key");
    if (from_cache) *from_cache = true;
    return data;
  }
  SpectralData data = landau_spectrum(cfg.model, p, K, cfg.tail_tol, cfg.u_switch);
  write_file_atomic(path, data.to_json().dump(2) + "\n");
  if (from_cache) *from_cache = false;
  return data;
}

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

void emit_checks(std::string& report, const std::vector<Check>& checks, bool& all_pass) {
  for (const auto& c : checks) {
    report += std::string(c.pass ? "[PASS] " : "[FAIL] ") + c.name + ": " + c.detail + "\n";
    if (!c.pass) all_pass = false;
  }
}

int cmd_check_identities(const CommonArgs& args) {
  RunConfig cfg = make_config(args);
  fs::create_directories(cfg.output_dir);

  std::string report;
  report += "identity report\n";
  report += model_line(cfg.model) + "\n";
  report += "seed=" + std::to_string(cfg.seed) + "\n";
  report += "tolerances: identity_tol=" + g17(cfg.identity_tol) +
            " mellin_cross_tol=1e-09 deriv_rel_tol=1e-06 product_rule_rel_tol=1e-10\n";

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> pick_n(1, 4);
  std::uniform_real_distribution<double> pick_a(0.1, 20.0);
  std::uniform_real_distribution<double> pick_u(0.05, 8.0);
  std::uniform_real_distribution<double> pick_vol(0.2, 5.0);
  std::uniform_int_distribution<int> pick_rank(1, 3);

  std::vector<Check> checks;

  {
    const int samples = 500;
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
      const int n = pick_n(rng);
      std::vector<double> a(n);
      for (double& v : a) v = pick_a(rng);
      const double u = pick_u(rng);
      CurvatureSpectrum spec(a, 1.0, 1);
      worst = std::max(worst, std::abs(local_density(u, spec) - trace_form(u, spec)));
    }
    checks.push_back({"local_density vs trace_form (" + std::to_string(samples) + " samples)",
                      worst < cfg.identity_tol, "max |delta| = " + g17(worst)});
  }

  {
    const double val = riemann_zeta_mellin({2.0, 0.0}).real();
    const double ref = std::numbers::pi * std::numbers::pi / 6.0;
    const double delta = std::abs(val - ref);
    checks.push_back({"mellin transform at z=2 vs pi^2/6", delta < cfg.identity_tol,
                      "|delta| = " + g17(delta)});
  }

  {
    const double val = riemann_zeta_mellin({2.5, 0.0}).real();
    const double ref = riemann_zeta({2.5, 0.0}).real();
    const double delta = std::abs(val - ref);
    checks.push_back({"mellin transform at z=2.5 vs zeta series", delta < 1e-9,
                      "|delta| = " + g17(delta)});
  }

  {
    const int models = 50;
    double worst = 0.0;
    double worst_pr = 0.0;
    for (int s = 0; s < models; ++s) {
      const int n = pick_n(rng);
      std::vector<double> a(n);
      for (double& v : a) v = pick_a(rng);
      CurvatureSpectrum spec(a, pick_vol(rng), pick_rank(rng));

      const double h = 4e-3;
      auto central = [&](double step) {
        return (zeta_hat(step, spec) - zeta_hat(-step, spec)) / (2.0 * step);
      };
      const double num = (4.0 * central(h / 2) - central(h)) / 3.0;
      const double closed = zeta_hat_prime_zero(spec);
      const double scale = std::max(std::abs(closed), 1e-2 * spec.det_over_2pi() * spec.vol);
      worst = std::max(worst, std::abs(num - closed) / scale);

      const double pr = zeta_hat_prime_zero_product_rule(spec);
      worst_pr = std::max(worst_pr, std::abs(pr - closed) /
                                        std::max(std::abs(closed),
                                                 1e-2 * spec.det_over_2pi() * spec.vol));
    }
    checks.push_back({"zeta_hat'(0) numeric derivative vs closed form (" +
                          std::to_string(models) + " models)",
                      worst < 1e-6, "max rel = " + g17(worst)});
    checks.push_back({"zeta_hat'(0) product rule vs closed form", worst_pr < 1e-10,
                      "max rel = " + g17(worst_pr)});
  }

  bool all_pass = true;
  emit_checks(report, checks, all_pass);
  report += std::string("result: ") + (all_pass ? "PASS" : "FAIL") + "\n";

  write_file_atomic(fs::path(cfg.output_dir) / "identities.txt", report);
  std::fputs(report.c_str(), stdout);
  return all_pass ? kExitPass : kExitCriteriaFail;
}

int cmd_parametrix(const CommonArgs& args, int jmax, bool flat) {
  RunConfig cfg = make_config(args);
  if (jmax < 0 || jmax > 4) throw config_error("parametrix: jmax must lie in [0,4]");
  fs::create_directories(cfg.output_dir);

  const TorusModel& model = cfg.model;
  const int n = model.n();
  const int fiber = 1 << n;

  SymbolicOperator op(n, fiber);
  if (flat) {
    for (int i = 0; i < 2 * n; ++i) {
      MultiIndex d = multi_unit(2 * n, i);
      d[i] = 2;
      op.add(0, multi_zero(2 * n), d, RatMatrix::Identity(fiber) * GaussRat(-1));
    }
  } else {
    op = assemble_dirac_squared(model);
  }

  std::string report;
  report += "parametrix report\n";
  report += model_line(model) + "\n";
  report += "operator: " + std::string(flat ? "flat laplacian" : "squared twisted operator") + "\n";
  report += "jmax=" + std::to_string(jmax) + "\n";
  report += "tolerances: exact rational arithmetic, no numeric tolerance applies\n";

  std::vector<Check> checks;

  const int op_degree = op.degree();
  if (!flat) {
    checks.push_back({"squared operator degree", op_degree == 2,
                      "degree = " + std::to_string(op_degree) + " (expected 2)"});
    TorusModel untwisted(model.spec, ThreeForm(n));
    const bool bfree =
        (op.max_degree_part() - assemble_dirac_squared(untwisted).max_degree_part()).is_zero();
    checks.push_back({"max-degree part free of three-form terms", bfree,
                      bfree ? "matches the untwisted square" : "differs from the untwisted square"});
  }

  const auto thetas = parametrix_coefficients(op, jmax);
  for (int j = 0; j <= jmax; ++j) {
    const auto& th = thetas[static_cast<size_t>(j)];
    report += "Theta_" + std::to_string(j) + (th.is_zero() ? " = 0\n" : ":\n" + th.to_text());
    const bool deg_ok = th.is_zero() || th.degree() <= 2 * j;
    const bool pow_ok = th.max_p_power_at_origin() <= j;
    checks.push_back({"Theta_" + std::to_string(j) + " degree bound", deg_ok,
                      "degree " + (th.is_zero() ? std::string("-inf") : std::to_string(th.degree())) +
                          " <= " + std::to_string(2 * j)});
    checks.push_back({"Theta_" + std::to_string(j) + " origin p-power bound", pow_ok,
                      "power " + std::to_string(th.max_p_power_at_origin()) + " <= " +
                          std::to_string(j)});
  }

  report += "audit:\n";
  bool all_pass = true;
  emit_checks(report, checks, all_pass);
  report += std::string("result: ") + (all_pass ? "PASS" : "FAIL") + "\n";

  write_file_atomic(fs::path(cfg.output_dir) / "parametrix.txt", report);
  std::fputs(report.c_str(), stdout);
  return all_pass ? kExitPass : kExitCriteriaFail;
}

int cmd_spectrum(const CommonArgs& args, int p_single) {
  RunConfig cfg = make_config(args);
  fs::create_directories(cfg.output_dir);

  std::vector<int> ps = cfg.p_grid;
  if (p_single > 0) ps = {p_single};

  std::printf("spectrum run, cutoff=%d\n", cfg.cutoff);
  std::printf("tolerances: tail_tol=%s tail_reference_u=%s\n", g17(cfg.tail_tol).c_str(),
              g17(cfg.u_switch).c_str());
  for (int p : ps) {
    bool from_cache = false;
    SpectralData data = cached_spectrum(cfg, p, cfg.cutoff, args.force, &from_cache);
    std::printf("p=%d %s %s entries=%zu d_p=%ld gap=%s tail_bound=%s\n", p,
                from_cache ? "cache-hit" : "computed",
                spectrum_cache_path(cfg, p, cfg.cutoff).string().c_str(), data.entries.size(),
                data.d_p, g17(spectral_gap(data)).c_str(), g17(data.tail_bound).c_str());
  }
  return kExitPass;
}

int cmd_torsion(const CommonArgs& args) {
  RunConfig cfg = make_config(args);
  fs::create_directories(cfg.output_dir);

  ThetaOptions opts;
  opts.u_switch = cfg.u_switch;
  opts.quad_abs_tol = cfg.quadrature_abs;
  opts.tail_tol = cfg.tail_tol;

  AsymptoticsReport rep = asymptotics_report(cfg.model, cfg.p_grid, cfg.cutoff, opts, [&](int p) {
    return cached_spectrum(cfg, p, cfg.cutoff, args.force, nullptr);
  });

  const std::string csv = report_csv(rep);
  write_file_atomic(fs::path(cfg.output_dir) / "torsion.csv", csv);
  nlohmann::json sidecar = report_sidecar(rep);
  write_file_atomic(fs::path(cfg.output_dir) / "torsion.json", sidecar.dump(2) + "\n");

  std::printf("torsion report, cutoff=%d\n", cfg.cutoff);
  std::printf("tolerances: u_switch=%s quad_abs=%s tail_tol=%s noise_floor=%s\n",
              g17(opts.u_switch).c_str(), g17(opts.quad_abs_tol).c_str(),
              g17(opts.tail_tol).c_str(), g17(rep.noise_floor).c_str());
  std::fputs(csv.c_str(), stdout);
  std::printf("trend |residual_scaled| decreasing: %s\n",
              rep.trend_scaled_residual_decreasing ? "PASS" : "FAIL");
  std::printf("reference residual within 1e-6 relative: %s%s\n",
              rep.reference_residual_small ? "PASS" : "FAIL",
              rep.n > 1 ? " (informational beyond n=1)" : "");

  const bool pass =
      rep.trend_scaled_residual_decreasing && (rep.n > 1 || rep.reference_residual_small);
  std::printf("verdict: %s\n", pass ? "PASS" : "FAIL");
  return pass ? kExitPass : kExitCriteriaFail;
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");

  CLI::App app{"twisted holomorphic torsion on flat torus models"};
  app.require_subcommand(1);

  CommonArgs ci_args, px_args, sp_args, to_args;
  int jmax = 3;
  bool flat = false;
  int p_single = 0;

  CLI::App* ci = app.add_subcommand("check-identities", "run the kernel identity sweeps");
  attach_common(ci, ci_args);

  CLI::App* px = app.add_subcommand("parametrix", "dump heat coefficients and audit the bounds");
  attach_common(px, px_args);
  px->add_option("--jmax", jmax, "highest coefficient index (<= 4)");
  px->add_flag("--flat", flat, "use the bare flat Laplacian instead of the squared operator");

  CLI::App* sp = app.add_subcommand("spectrum", "compute or load cached spectral data");
  attach_common(sp, sp_args);
  sp->add_option("--p", p_single, "single tensor power (default: the config grid)");

  CLI::App* to = app.add_subcommand("torsion", "full report over the p grid with trend verdicts");
  attach_common(to, to_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (ci->parsed()) return cmd_check_identities(ci_args);
    if (px->parsed()) return cmd_parametrix(px_args, jmax, flat);
    if (sp->parsed()) return cmd_spectrum(sp_args, p_single);
    if (to->parsed()) return cmd_torsion(to_args);
  } catch (const certification_error& e) {
    std::fprintf(stderr, "certification error: %s\n", e.what());
    return kExitCertification;
  } catch (const config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitConfig;
}
