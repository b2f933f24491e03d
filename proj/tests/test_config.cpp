// Run configuration parsing, validation, and round trips.

#include <gapspec/config.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

using namespace gapspec;
using Catch::Approx;
using nlohmann::json;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
  const std::string path = "cfg_" + name;
  std::ofstream f(path);
  f << body;
  return path;
}

} // namespace

TEST_CASE("configuration defaults", "[config]") {
  const RunConfig c;
  REQUIRE(c.grid.N == 256);
  REQUIRE_FALSE(c.grid.fixed_L);
  REQUIRE(c.output.format == OutputFormat::csv);
  REQUIRE(c.output.directory == ".");
  REQUIRE(c.jobs == 0);
  REQUIRE_FALSE(c.model_alias.has_value());
  REQUIRE_NOTHROW(c.validate());
}

TEST_CASE("grid halfwidth policy selection", "[config]") {
  GridSpecCfg g;
  REQUIRE(g.halfwidth(0.5) == Approx(default_halfwidth(0.5)));
  g.fixed_L = true;
  g.L = 17.0;
  REQUIRE(g.halfwidth(0.5) == 17.0);
  REQUIRE(g.halfwidth(-0.9) == 17.0);
}

TEST_CASE("configuration JSON round trip", "[config]") {
  RunConfig c;
  c.potential = {0.5, 1.5, -0.25, 0.125};
  c.grid.N = 64;
  c.grid.fixed_L = true;
  c.grid.L = 18.5;
  c.tolerances.tol_band = 2.5e-4;
  c.tolerances.tol_match = 5e-3;
  c.output.format = OutputFormat::json;
  c.output.directory = "out";
  c.jobs = 2;

  json j = c;
  REQUIRE(j.at("potential").at("a2") == Approx(1.5));
  REQUIRE(j.at("grid").at("L_policy").at("fixed") == Approx(18.5));
  REQUIRE(j.at("output").at("format") == "json");
  REQUIRE(j.at("jobs") == 2);
  REQUIRE_FALSE(j.contains("model"));

  const RunConfig back = j.get<RunConfig>();
  REQUIRE(back.potential.a1 == Approx(c.potential.a1));
  REQUIRE(back.potential.a4 == Approx(c.potential.a4));
  REQUIRE(back.grid == c.grid);
  REQUIRE(back.tolerances.tol_band == Approx(2.5e-4));
  REQUIRE(back.tolerances.tol_match == Approx(5e-3));
  REQUIRE(back.output == c.output);
  REQUIRE(back.jobs == 2);
}

TEST_CASE("model aliases expand to coefficients", "[config]") {
  SECTION("kerr") {
    const json j = {{"model", {{"kind", "kerr"}, {"rho", 0.5}}}};
    const RunConfig c = j.get<RunConfig>();
    REQUIRE(c.model_alias.has_value());
    REQUIRE(c.model_alias->kind == ModelAlias::Kind::kerr);
    REQUIRE(c.potential.a1 == 1.0);
    REQUIRE(c.potential.a2 == 0.5);
    REQUIRE(c.potential.a3 == 0.0);
    REQUIRE(c.potential.a4 == 0.0);
  }
  SECTION("grating") {
    const json j = {{"model", {{"kind", "grating"}, {"s", 0.25}}}};
    const RunConfig c = j.get<RunConfig>();
    REQUIRE(c.potential.a1 == 0.0);
    REQUIRE(c.potential.a3 == 1.0);
    REQUIRE(c.potential.a4 == 0.25);
  }
  SECTION("alias serialization uses the model parameter name") {
    ModelAlias m{ModelAlias::Kind::grating, 0.25};
    json j = m;
    REQUIRE(j.at("kind") == "grating");
    REQUIRE(j.at("s") == Approx(0.25));
  }
  SECTION("unknown alias kind") {
    const json j = {{"model", {{"kind", "saturable"}}}};
    REQUIRE_THROWS_AS(j.get<RunConfig>(), ConfigError);
  }
}

TEST_CASE("configuration validation failures", "[config]") {
  SECTION("alias contradicting explicit coefficients") {
    const json j = {{"model", {{"kind", "kerr"}, {"rho", 0.5}}},
                    {"potential", {{"a1", 0.0}, {"a2", 0.0}, {"a3", 1.0}, {"a4", 0.0}}}};
    REQUIRE_THROWS_AS(j.get<RunConfig>(), ConfigError);
  }
  SECTION("grid too small") {
    const json j = {{"grid", {{"N", 4}}}};
    REQUIRE_THROWS_AS(j.get<RunConfig>(), ConfigError);
  }
  SECTION("nonpositive fixed halfwidth") {
    const json j = {{"grid", {{"N", 64}, {"L_policy", {{"fixed", -1.0}}}}}};
    REQUIRE_THROWS_AS(j.get<RunConfig>(), ConfigError);
  }
  SECTION("unknown output format") {
    const json j = {{"output", {{"format", "xml"}}}};
    REQUIRE_THROWS_AS(j.get<RunConfig>(), ConfigError);
  }
  SECTION("malformed halfwidth policy") {
    const json j = {{"grid", {{"N", 64}, {"L_policy", "manual"}}}};
    REQUIRE_THROWS_AS(j.get<RunConfig>(), ConfigError);
  }
}

TEST_CASE("configuration files", "[config]") {
  SECTION("valid file") {
    const std::string path = write_temp("valid.json", R"({
      "model": {"kind": "kerr", "rho": 0.0},
      "grid": {"N": 96, "L_policy": "auto"},
      "tolerances": {"tol_band": 2.5e-4, "tol_match": 5e-3}
    })");
    const RunConfig c = load_config(path);
    REQUIRE(c.grid.N == 96);
    REQUIRE(c.potential.a1 == 1.0);
    REQUIRE(c.tolerances.tol_band == Approx(2.5e-4));
    std::remove(path.c_str());
  }
  SECTION("missing file") {
    REQUIRE_THROWS_AS(load_config("no_such_config.json"), ConfigError);
  }
  SECTION("unparseable file") {
    const std::string path = write_temp("broken.json", "{ not json");
    REQUIRE_THROWS_AS(load_config(path), ConfigError);
    std::remove(path.c_str());
  }
  SECTION("wrong field types") {
    const std::string path = write_temp("badfield.json", R"({"potential": "kerr"})");
    REQUIRE_THROWS_AS(load_config(path), ConfigError);
    std::remove(path.c_str());
  }
}
