#include "ttorsion/config.hpp"

#include <cstdio>
#include <fstream>

#include "ttorsion/errors.hpp"

namespace ttorsion {

namespace {

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  if (!j.is_object()) throw config_error(where + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) known = true;
    if (!known) throw config_error(where + ": unknown key '" + it.key() + "'");
  }
}

template <typename T>
T require(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw config_error(where + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw config_error(where + ": key '" + key + "' has the wrong type");
  }
}

TorusModel parse_model(const nlohmann::json& j) {
  reject_unknown(j, {"n", "curvature", "volume", "rank_e", "three_form"}, "config.model");
  const int n = require<int>(j, "n", "config.model");
  const auto curvature = require<std::vector<double>>(j, "curvature", "config.model");
  const double volume = require<double>(j, "volume", "config.model");
  const int rank_e = require<int>(j, "rank_e", "config.model");
  if (static_cast<int>(curvature.size()) != n)
    throw config_error("config.model: curvature list must have n entries");

  ThreeForm B(n >= 1 ? n : 1);
  if (j.contains("three_form")) {
    if (!j.at("three_form").is_array())
      throw config_error("config.model: three_form must be an array");
    for (const auto& entry : j.at("three_form")) {
      reject_unknown(entry, {"i", "j", "k", "value"}, "config.model.three_form");
      const int i = require<int>(entry, "i", "config.model.three_form");
      const int jj = require<int>(entry, "j", "config.model.three_form");
      const int k = require<int>(entry, "k", "config.model.three_form");
      const double value = require<double>(entry, "value", "config.model.three_form");
      if (!(0 <= i && i < jj && jj < k && k < 2 * n))
        throw config_error("config.model.three_form: indices must satisfy 0 <= i < j < k < 2n");
      B.set(i, jj, k, value);
    }
  }
  try {
    return TorusModel(CurvatureSpectrum(curvature, volume, rank_e), B);
  } catch (const domain_error& e) {
    throw config_error(std::string("config.model: ") + e.what());
  }
}

}  // namespace

RunConfig config_from_json(const nlohmann::json& j) {
  reject_unknown(j, {"schema", "model", "p_grid", "cutoff", "tolerances", "output", "seed"},
                 "config");
  if (require<int>(j, "schema", "config") != 1)
    throw config_error("config: unsupported schema version");

  if (!j.contains("model")) throw config_error("config: missing key 'model'");
  RunConfig cfg{parse_model(j.at("model")), {}, 16, 1e-12, 1e-10, 4, 1e-9, 0.2, "out", 7};

  cfg.p_grid = require<std::vector<int>>(j, "p_grid", "config");
  if (cfg.p_grid.empty()) throw config_error("config: p_grid must be nonempty");
  for (std::size_t i = 0; i < cfg.p_grid.size(); ++i) {
    if (cfg.p_grid[i] < 1) throw config_error("config: p_grid entries must be positive");
    if (i > 0 && cfg.p_grid[i] <= cfg.p_grid[i - 1])
      throw config_error("config: p_grid must ascend strictly");
  }
  cfg.cutoff = require<int>(j, "cutoff", "config");
  if (cfg.cutoff < 1) throw config_error("config: cutoff must be positive");

  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    reject_unknown(t, {"quadrature_abs", "identity_tol", "trend_window", "tail_tol", "u_switch"},
                   "config.tolerances");
    if (t.contains("quadrature_abs")) cfg.quadrature_abs = t.at("quadrature_abs").get<double>();
    if (t.contains("identity_tol")) cfg.identity_tol = t.at("identity_tol").get<double>();
    if (t.contains("trend_window")) cfg.trend_window = t.at("trend_window").get<int>();
    if (t.contains("tail_tol")) cfg.tail_tol = t.at("tail_tol").get<double>();
    if (t.contains("u_switch")) cfg.u_switch = t.at("u_switch").get<double>();
  }
  if (!(cfg.quadrature_abs > 0) || !(cfg.identity_tol > 0) || !(cfg.tail_tol > 0))
    throw config_error("config.tolerances: tolerances must be positive");
  if (!(cfg.u_switch > 0 && cfg.u_switch < 1))
    throw config_error("config.tolerances: u_switch must lie in (0,1)");
  if (cfg.trend_window < 2) throw config_error("config.tolerances: trend_window must be >= 2");

  if (j.contains("output")) {
    reject_unknown(j.at("output"), {"dir"}, "config.output");
    if (j.at("output").contains("dir")) cfg.output_dir = j.at("output").at("dir").get<std::string>();
  }
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error("config: parse failure in '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

void apply_tolerance_override(RunConfig& config, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
    throw config_error("tolerance override must look like NAME=VALUE: '" + spec + "'");
  const std::string name = spec.substr(0, eq);
  const std::string value = spec.substr(eq + 1);
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    throw config_error("tolerance override value is not a number: '" + spec + "'");

  if (name == "quadrature_abs")
    config.quadrature_abs = v;
  else if (name == "identity_tol")
    config.identity_tol = v;
  else if (name == "tail_tol")
    config.tail_tol = v;
  else if (name == "u_switch")
    config.u_switch = v;
  else if (name == "trend_window")
    config.trend_window = static_cast<int>(v);
  else
    throw config_error("unknown tolerance '" + name + "'");
  if (!(config.quadrature_abs > 0) || !(config.identity_tol > 0) || !(config.tail_tol > 0) ||
      !(config.u_switch > 0 && config.u_switch < 1) || config.trend_window < 2)
    throw config_error("tolerance override out of range: '" + spec + "'");
}

std::string RunConfig::cache_key_material(int p, int K) const {
  char buf[64];
  std::string out = "model:n=" + std::to_string(model.n());
  for (double a : model.spec.a) {
    std::snprintf(buf, sizeof(buf), ",a=%.17g", a);
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), ",vol=%.17g,rank=%d", model.spec.vol, model.spec.rank_e);
  out += buf;
  const int m = 2 * model.n();
  for (int i = 0; i < m; ++i)
    for (int jj = i + 1; jj < m; ++jj)
      for (int k = jj + 1; k < m; ++k) {
        const double v = model.B.get(i, jj, k);
        if (v != 0.0) {
          std::snprintf(buf, sizeof(buf), ",B[%d,%d,%d]=%.17g", i, jj, k, v);
          out += buf;
        }
      }
  out += ";p=" + std::to_string(p) + ";K=" + std::to_string(K);
  return out;
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace ttorsion
