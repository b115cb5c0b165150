#include <doctest.h>

#include <numbers>
#include <string>

#include <nlohmann/json.hpp>

#include "ttorsion/config.hpp"
#include "ttorsion/errors.hpp"

using namespace ttorsion;
using nlohmann::json;

namespace {

json base_config() {
  return json{{"schema", 1},
              {"model",
               {{"n", 2},
                {"curvature", {2.0 * std::numbers::pi, 2.0 * std::numbers::pi}},
                {"volume", 1.0},
                {"rank_e", 1},
                {"three_form", {{{"i", 0}, {"j", 1}, {"k", 2}, {"value", 0.5}}}}}},
              {"p_grid", {4, 8, 16}},
              {"cutoff", 12},
              {"tolerances", {{"tail_tol", 1e-9}, {"u_switch", 0.2}}},
              {"output", {{"dir", "scratch"}}},
              {"seed", 11}};
}

}  // namespace

TEST_CASE("valid configuration parses with defaults and explicit values") {
  RunConfig cfg = config_from_json(base_config());
  CHECK(cfg.model.n() == 2);
  CHECK(cfg.model.spec.a[0] == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(cfg.model.spec.vol == doctest::Approx(1.0));
  CHECK(cfg.model.spec.rank_e == 1);
  CHECK(cfg.model.B.get(0, 1, 2) == doctest::Approx(0.5));
  REQUIRE(cfg.p_grid.size() == 3);
  CHECK(cfg.p_grid[2] == 16);
  CHECK(cfg.cutoff == 12);
  CHECK(cfg.tail_tol == doctest::Approx(1e-9));
  CHECK(cfg.u_switch == doctest::Approx(0.2));
  CHECK(cfg.quadrature_abs == doctest::Approx(1e-12));  // default
  CHECK(cfg.identity_tol == doctest::Approx(1e-10));    // default
  CHECK(cfg.trend_window == 4);                         // default
  CHECK(cfg.output_dir == "scratch");
  CHECK(cfg.seed == 11);

  json minimal{{"schema", 1},
               {"model",
                {{"n", 1}, {"curvature", {2.0 * std::numbers::pi}}, {"volume", 1.0}, {"rank_e", 1}}},
               {"p_grid", {2}},
               {"cutoff", 8}};
  RunConfig mc = config_from_json(minimal);
  CHECK(mc.output_dir == "out");
  CHECK(mc.seed == 7);
  CHECK(mc.model.B.is_zero());
}

TEST_CASE("unknown keys are rejected at every level") {
  auto expect_reject = [](json j) { CHECK_THROWS_AS(config_from_json(j), config_error); };
  json j = base_config();
  j["extra"] = 1;
  expect_reject(j);
  j = base_config();
  j["model"]["twist"] = 1;
  expect_reject(j);
  j = base_config();
  j["tolerances"]["tol_x"] = 1.0;
  expect_reject(j);
  j = base_config();
  j["output"]["file"] = "x";
  expect_reject(j);
  j = base_config();
  j["model"]["three_form"][0]["w"] = 1;
  expect_reject(j);
}

TEST_CASE("schema version is enforced") {
  json j = base_config();
  j["schema"] = 2;
  CHECK_THROWS_AS(config_from_json(j), config_error);
  j.erase("schema");
  CHECK_THROWS_AS(config_from_json(j), config_error);
}

TEST_CASE("p grid must be a strictly ascending positive list") {
  json j = base_config();
  j["p_grid"] = json::array();
  CHECK_THROWS_AS(config_from_json(j), config_error);
  j["p_grid"] = {4, 4};
  CHECK_THROWS_AS(config_from_json(j), config_error);
  j["p_grid"] = {8, 4};
  CHECK_THROWS_AS(config_from_json(j), config_error);
  j["p_grid"] = {0, 4};
  CHECK_THROWS_AS(config_from_json(j), config_error);
}

TEST_CASE("cutoff is required and positive") {
  json j = base_config();
  j.erase("cutoff");
  CHECK_THROWS_AS(config_from_json(j), config_error);
  j = base_config();
  j["cutoff"] = 0;
  CHECK_THROWS_AS(config_from_json(j), config_error);
}

TEST_CASE("model constraints surface as configuration errors") {
  json j = base_config();
  j["model"]["curvature"] = {1.0};  // wrong length for n = 2
  CHECK_THROWS_AS(config_from_json(j), config_error);

  j = base_config();
  j["model"]["curvature"] = {-1.0, 2.0};
  CHECK_THROWS_AS(config_from_json(j), config_error);

  j = base_config();
  j["model"]["volume"] = 0.0;
  CHECK_THROWS_AS(config_from_json(j), config_error);

  j = base_config();
  j["model"]["rank_e"] = 0;
  CHECK_THROWS_AS(config_from_json(j), config_error);

  // Fractional flux: a = pi on unit volume gives omega integral 1/2.
  j = base_config();
  j["model"]["n"] = 1;
  j["model"]["curvature"] = {std::numbers::pi};
  j["model"].erase("three_form");
  CHECK_THROWS_AS(config_from_json(j), config_error);

  // A line model admits no three-form.
  j = base_config();
  j["model"]["n"] = 1;
  j["model"]["curvature"] = {2.0 * std::numbers::pi};
  CHECK_THROWS_AS(config_from_json(j), config_error);
}

TEST_CASE("three-form indices must be strictly ordered and in range") {
  for (auto bad : {json{{"i", 1}, {"j", 1}, {"k", 2}, {"value", 0.5}},
                   json{{"i", 2}, {"j", 1}, {"k", 3}, {"value", 0.5}},
                   json{{"i", 0}, {"j", 1}, {"k", 4}, {"value", 0.5}},
                   json{{"i", -1}, {"j", 1}, {"k", 2}, {"value", 0.5}}}) {
    json j = base_config();
    j["model"]["three_form"] = json::array({bad});
    CHECK_THROWS_AS(config_from_json(j), config_error);
  }
}

TEST_CASE("tolerance bounds are validated") {
  json j = base_config();
  j["tolerances"]["u_switch"] = 0.0;
  CHECK_THROWS_AS(config_from_json(j), config_error);
  j["tolerances"]["u_switch"] = 1.0;
  CHECK_THROWS_AS(config_from_json(j), config_error);
  j = base_config();
  j["tolerances"]["tail_tol"] = -1e-9;
  CHECK_THROWS_AS(config_from_json(j), config_error);
  j = base_config();
  j["tolerances"]["trend_window"] = 1;
  CHECK_THROWS_AS(config_from_json(j), config_error);
}

TEST_CASE("tolerance overrides parse, apply, and reject garbage") {
  RunConfig cfg = config_from_json(base_config());
  apply_tolerance_override(cfg, "tail_tol=1e-6");
  CHECK(cfg.tail_tol == doctest::Approx(1e-6));
  apply_tolerance_override(cfg, "u_switch=0.5");
  CHECK(cfg.u_switch == doctest::Approx(0.5));
  apply_tolerance_override(cfg, "trend_window=3");
  CHECK(cfg.trend_window == 3);
  CHECK_THROWS_AS(apply_tolerance_override(cfg, "bogus=1"), config_error);
  CHECK_THROWS_AS(apply_tolerance_override(cfg, "tail_tol=abc"), config_error);
  CHECK_THROWS_AS(apply_tolerance_override(cfg, "noequals"), config_error);
  CHECK_THROWS_AS(apply_tolerance_override(cfg, "u_switch=1.5"), config_error);
  CHECK_THROWS_AS(apply_tolerance_override(cfg, "=1"), config_error);
  CHECK_THROWS_AS(apply_tolerance_override(cfg, "tail_tol="), config_error);
}

TEST_CASE("cache key material tracks everything that shapes a spectrum") {
  RunConfig cfg = config_from_json(base_config());
  const std::string key = cfg.cache_key_material(4, 12);
  CHECK(key == cfg.cache_key_material(4, 12));
  CHECK(key != cfg.cache_key_material(8, 12));
  CHECK(key != cfg.cache_key_material(4, 16));

  json j = base_config();
  j["model"]["three_form"][0]["value"] = 0.25;
  CHECK(config_from_json(j).cache_key_material(4, 12) != key);

  j = base_config();
  j["model"]["curvature"] = {2.0 * std::numbers::pi, 4.0 * std::numbers::pi};
  CHECK(config_from_json(j).cache_key_material(4, 12) != key);

  j = base_config();
  j["model"]["rank_e"] = 2;
  CHECK(config_from_json(j).cache_key_material(4, 12) != key);

  // Tolerances and output settings do not affect the key.
  j = base_config();
  j["tolerances"]["tail_tol"] = 1e-7;
  j["output"]["dir"] = "elsewhere";
  CHECK(config_from_json(j).cache_key_material(4, 12) == key);
}

TEST_CASE("content hash matches the published 64-bit FNV-1a vectors") {
  CHECK(content_hash("") == "cbf29ce484222325");
  CHECK(content_hash("a") == "af63dc4c8601ec8c");
  CHECK(content_hash("foobar") == "85944171f73967e8");
  CHECK(content_hash("x").size() == 16);
}

TEST_CASE("shipped configurations load") {
  const std::string root = TTORSION_SOURCE_DIR;
  RunConfig ref = load_config(root + "/configs/reference_n1.json");
  CHECK(ref.model.n() == 1);
  CHECK(ref.model.spec.a[0] == doctest::Approx(2.0 * std::numbers::pi));
  REQUIRE(ref.p_grid.size() == 4);
  CHECK(ref.p_grid[3] == 64);
  CHECK(ref.cutoff == 20);

  RunConfig un = load_config(root + "/configs/untwisted_n2.json");
  CHECK(un.model.n() == 2);
  CHECK(un.model.B.is_zero());
  CHECK(un.cutoff == 24);

  RunConfig tw = load_config(root + "/configs/twisted_n2.json");
  CHECK(tw.model.B.get(0, 1, 2) == doctest::Approx(0.5));

  CHECK_THROWS_AS(load_config(root + "/configs/nonexistent.json"), config_error);
}
