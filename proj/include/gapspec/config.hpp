#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "gapspec/potential.hpp"
#include "gapspec/soliton.hpp"
#include "gapspec/spectrum.hpp"

namespace gapspec {

/// Raised for malformed or inconsistent configuration; mapped to exit
/// code 2 by the CLI.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Grid request: either the automatic omega-dependent halfwidth or a
/// caller-fixed one.
struct GridSpecCfg {
  int N = 256;
  bool fixed_L = false;
  double L = 0.0;

  double halfwidth(double omega) const {
    if (fixed_L) return L;
    return default_halfwidth(omega);
  }

  bool operator==(const GridSpecCfg&) const = default;
};

inline void to_json(nlohmann::json& j, const GridSpecCfg& g) {
  j = nlohmann::json{{"N", g.N}};
  if (g.fixed_L)
    j["L_policy"] = nlohmann::json{{"fixed", g.L}};
  else
    j["L_policy"] = "auto";
}

inline void from_json(const nlohmann::json& j, GridSpecCfg& g) {
  g.N = j.value("N", 256);
  if (j.contains("L_policy")) {
    const auto& lp = j.at("L_policy");
    if (lp.is_string()) {
      if (lp.get<std::string>() != "auto")
        throw ConfigError("grid.L_policy: expected \"auto\" or {\"fixed\": L}");
      g.fixed_L = false;
    } else if (lp.is_object() && lp.contains("fixed")) {
      g.fixed_L = true;
      g.L = lp.at("fixed").get<double>();
    } else {
      throw ConfigError("grid.L_policy: expected \"auto\" or {\"fixed\": L}");
    }
  }
}

enum class OutputFormat { csv, json };

inline const char* to_string(OutputFormat f) {
  return f == OutputFormat::csv ? "csv" : "json";
}

struct OutputCfg {
  OutputFormat format = OutputFormat::csv;
  std::string directory = ".";

  bool operator==(const OutputCfg&) const = default;
};

inline void to_json(nlohmann::json& j, const OutputCfg& o) {
  j = nlohmann::json{{"format", to_string(o.format)}, {"directory", o.directory}};
}

inline void from_json(const nlohmann::json& j, OutputCfg& o) {
  if (j.contains("format")) {
    const std::string f = j.at("format").get<std::string>();
    if (f == "csv")
      o.format = OutputFormat::csv;
    else if (f == "json")
      o.format = OutputFormat::json;
    else
      throw ConfigError("output.format: expected csv or json");
  }
  o.directory = j.value("directory", o.directory);
}

/// Full run configuration; file values are overridden by CLI flags.
struct RunConfig {
  PotentialParams potential{};
  std::optional<ModelAlias> model_alias;
  GridSpecCfg grid;
  TolSet tolerances;
  OutputCfg output;
  int jobs = 0;  ///< 0 = resolve via GAPSPEC_JOBS / hardware

  void validate() const {
    if (grid.N < 8) throw ConfigError("grid.N must be >= 8");
    if (grid.fixed_L && !(grid.L > 0.0)) throw ConfigError("grid halfwidth must be positive");
    if (model_alias) {
      const PotentialParams expanded = model_alias->kind == ModelAlias::Kind::kerr
                                           ? kerr_potential(model_alias->param)
                                           : grating_potential(model_alias->param);
      const auto close = [](double a, double b) { return std::abs(a - b) < 1e-12; };
      if (!(close(expanded.a1, potential.a1) && close(expanded.a2, potential.a2) &&
            close(expanded.a3, potential.a3) && close(expanded.a4, potential.a4)))
        throw ConfigError("model alias does not match the potential coefficients");
    }
  }
};

inline void to_json(nlohmann::json& j, const ModelAlias& m) {
  j = nlohmann::json{
      {"kind", m.kind == ModelAlias::Kind::kerr ? "kerr" : "grating"},
      {m.kind == ModelAlias::Kind::kerr ? "rho" : "s", m.param}};
}

inline void from_json(const nlohmann::json& j, ModelAlias& m) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "kerr") {
    m.kind = ModelAlias::Kind::kerr;
    m.param = j.value("rho", 0.0);
  } else if (kind == "grating") {
    m.kind = ModelAlias::Kind::grating;
    m.param = j.value("s", 0.0);
  } else {
    throw ConfigError("model alias kind: expected kerr or grating");
  }
}

inline void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json{{"potential", c.potential},
                     {"grid", c.grid},
                     {"tolerances", c.tolerances},
                     {"output", c.output}};
  if (c.model_alias) j["model"] = *c.model_alias;
  if (c.jobs > 0) j["jobs"] = c.jobs;
}

inline void from_json(const nlohmann::json& j, RunConfig& c) {
  if (j.contains("model")) {
    c.model_alias = j.at("model").get<ModelAlias>();
    c.potential = c.model_alias->kind == ModelAlias::Kind::kerr
                      ? kerr_potential(c.model_alias->param)
                      : grating_potential(c.model_alias->param);
  }
  if (j.contains("potential")) c.potential = j.at("potential").get<PotentialParams>();
  if (j.contains("grid")) c.grid = j.at("grid").get<GridSpecCfg>();
  if (j.contains("tolerances")) c.tolerances = j.at("tolerances").get<TolSet>();
  if (j.contains("output")) c.output = j.at("output").get<OutputCfg>();
  c.jobs = j.value("jobs", 0);
  c.validate();
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  try {
    return j.get<RunConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
}

} // namespace gapspec
