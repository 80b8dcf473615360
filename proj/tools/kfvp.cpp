// Command-line front end: run, probe-coercivity, fit, resume.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "kfvp/commands.hpp"

namespace {

using namespace kfvp;

int do_run(const std::string& config_path, const std::string& out, const std::vector<std::string>& sets) {
  nlohmann::json j;
  {
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot open config: " + config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    // Syntax check with line numbers before applying overrides.
    j = to_json(parse_config(ss.str(), config_path));
  }
  apply_overrides(j, sets);
  RunConfig cfg = from_json(j, config_path);
  if (!out.empty()) cfg.output_dir = out;
  const RunResult res = execute_run(cfg, cfg.output_dir, std::cerr);
  const auto& fit = res.summary["fit"];
  if (fit.contains("lambda"))
    std::cout << "lambda_fit " << fit["lambda"].get<double>() << " r2 " << fit["r_squared"].get<double>() << "\n";
  std::cout << "wrote " << cfg.output_dir << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier-Hermite simulator for the perturbed kinetic-fluid system"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  bool serial = false;
  std::vector<std::string> sets;
  auto* run = app.add_subcommand("run", "integrate a configured scenario");
  run->add_option("--config", config_path, "JSON run configuration")->required();
  run->add_option("--out", out_dir, "output directory (overrides output.dir)");
  run->add_flag("--serial", serial, "deterministic serial execution (the only mode currently built)");
  run->add_option("--set", sets, "override, e.g. --set schedule.dt=1e-3");

  ProbeRequest probe;
  std::string probe_out = "coercivity.json";
  auto* pc = app.add_subcommand("probe-coercivity", "empirical coercivity constant of the linearized operator");
  pc->add_option("--dim", probe.dim, "velocity dimension")->required();
  pc->add_option("--order", probe.order, "Hermite modes per axis")->required();
  auto* samples_opt = pc->add_option("--samples", probe.samples, "random samples");
  auto* eig_opt = pc->add_flag("--eigensolve", "exact generalized eigensolve (default)");
  samples_opt->excludes(eig_opt);
  pc->add_option("--seed", probe.seed, "seed for --samples");
  pc->add_option("--out", probe_out, "JSON record path");

  std::string series, model = "exp", window;
  std::string column = "E";
  auto* fit = app.add_subcommand("fit", "fit a decay law to a series column");
  fit->add_option("--series", series, "series.csv")->required();
  fit->add_option("--model", model, "exp or alg")->check(CLI::IsMember({"exp", "alg"}));
  fit->add_option("--window", window, "T0:T1")->required();
  fit->add_option("--column", column, "column to fit");

  std::string checkpoint, resume_config, resume_out;
  long steps = 0;
  auto* resume = app.add_subcommand("resume", "continue a run from a checkpoint");
  resume->add_option("--checkpoint", checkpoint, "checkpoint file")->required();
  resume->add_option("--steps", steps, "number of further steps")->required();
  resume->add_option("--config", resume_config, "config (default: config.json of the run)");
  resume->add_option("--out", resume_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return do_run(config_path, out_dir, sets);
    if (*pc) {
      probe.eigensolve = samples_opt->count() == 0;
      const nlohmann::json rec = probe_coercivity(probe);
      std::cout << "lambda0 " << rec["lambda0"].get<double>() << " (" << rec["argmin"].get<std::string>() << ")\n";
      std::ofstream o(probe_out);
      if (!o) throw IoError("cannot write " + probe_out);
      o << rec.dump(2) << "\n";
      return kExitOk;
    }
    if (*fit) {
      const DecayFit f = fit_series(series, parse_decay_model(model), parse_window(window), column);
      std::cout << "rate " << f.rate << " r2 " << f.r_squared << " amplitude " << f.amplitude << " points "
                << f.points << "\n";
      return kExitOk;
    }
    if (*resume) {
      const auto res = execute_resume(checkpoint, steps,
                                      resume_config.empty() ? std::nullopt : std::optional<std::string>(resume_config),
                                      resume_out.empty() ? std::nullopt : std::optional<std::string>(resume_out),
                                      std::cerr);
      std::cout << "wrote " << res.summary["config"]["output"]["dir"].get<std::string>() << "\n";
      return kExitOk;
    }
  } catch (const kfvp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
