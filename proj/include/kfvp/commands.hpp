#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kfvp/config.hpp"

namespace kfvp {

std::vector<std::string> csv_columns(int dim);
std::string csv_row(const EnergyReport& r, int dim);
void write_series_csv(const std::string& path, const std::vector<EnergyReport>& reports, int dim);
/// Column name -> values; "nan" entries become quiet NaN.
std::map<std::string, std::vector<double>> read_series_csv(const std::string& path);

struct RunResult {
  Trajectory trajectory;
  nlohmann::json summary;
  SimState initial;
};

/// Build, integrate and summarize. When `out_dir` is set, writes config.json,
/// series.csv, summary.json and checkpoints there.
RunResult execute_run(const RunConfig& cfg, const std::optional<std::string>& out_dir, std::ostream& log);

/// Resume from a checkpoint for `steps` more steps.
RunResult execute_resume(const std::string& checkpoint, long steps, const std::optional<std::string>& config_path,
                         const std::optional<std::string>& out_dir, std::ostream& log);

nlohmann::json summarize(const RunConfig& cfg, const Trajectory& traj, const SimState& initial,
                         const Discretization& disc);

struct WindowSpec {
  double t0 = 0;
  double t1 = 0;
};
/// "T0:T1"
WindowSpec parse_window(const std::string& text);

DecayFit fit_series(const std::string& csv_path, DecayModel model, const WindowSpec& window,
                    const std::string& column = "E");

struct ProbeRequest {
  int dim = 1;
  int order = 8;
  bool eigensolve = true;
  int samples = 1000;
  std::uint64_t seed = 1;
};
nlohmann::json probe_coercivity(const ProbeRequest& req);

}  // namespace kfvp
