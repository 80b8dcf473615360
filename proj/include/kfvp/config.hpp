#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "kfvp/integrate.hpp"

namespace kfvp {

/// Complete description of a run. Defaults are the flagship decay run.
struct RunConfig {
  Grid grid;
  BasisSpec basis{1, 32, 34};
  ModelParams model;
  Schedule schedule;
  std::string preset = "decay-torus";
  double amplitude = 1e-3;
  std::uint64_t seed = 7;
  FunctionalWeights weights;
  bool check_equivalence = true;
  double fit_t0 = 1.0;
  double fit_t1 = 10.0;
  std::string output_dir = "run";

  void validate() const;
};

nlohmann::json to_json(const RunConfig& cfg);
/// `origin` names the source in error messages.
RunConfig from_json(const nlohmann::json& j, const std::string& origin = "config");

/// Parse a config document. Syntax errors report the line and column;
/// semantic errors report the JSON path of the offending entry.
RunConfig parse_config(const std::string& text, const std::string& origin = "config");
RunConfig load_config(const std::string& path);
void save_config(const RunConfig& cfg, const std::string& path);

/// Apply "section.key=value" overrides; value is JSON if it parses, otherwise a string.
void apply_overrides(nlohmann::json& j, const std::vector<std::string>& assignments);

}  // namespace kfvp
