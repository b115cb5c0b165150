#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ttorsion/model.hpp"

namespace ttorsion {

// Validated run configuration. Strict: schema versioned, unknown keys
// rejected, model constraints (positivity, flux integrality) enforced at load.
struct RunConfig {
  TorusModel model;
  std::vector<int> p_grid;
  int cutoff = 16;

  double quadrature_abs = 1e-12;
  double identity_tol = 1e-10;
  int trend_window = 4;
  double tail_tol = 1e-9;
  double u_switch = 0.2;

  std::string output_dir = "out";
  std::uint64_t seed = 7;

  // Canonical serialization of (model, p, K) driving the spectrum cache key.
  std::string cache_key_material(int p, int K) const;
};

RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// Apply a --tolerance NAME=VALUE override; throws config_error for unknown
// names or unparsable values.
void apply_tolerance_override(RunConfig& config, const std::string& spec);

// FNV-1a 64-bit content hash, printed as 16 hex digits.
std::string content_hash(const std::string& bytes);

}  // namespace ttorsion
