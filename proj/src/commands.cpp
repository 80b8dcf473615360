#include "kfvp/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "kfvp/checkpoint.hpp"
#include "kfvp/presets.hpp"

namespace kfvp {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void ensure_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw IoError("cannot create directory " + p.string() + ": " + ec.message());
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
  if (!out) throw IoError("failed writing " + p.string());
}

std::string checkpoint_name(std::uint64_t step) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "step_%08llu.bin", static_cast<unsigned long long>(step));
  return buf;
}

Checkpoint make_checkpoint(const RunConfig& cfg, const SimState& s) {
  return Checkpoint{cfg.grid, cfg.basis, cfg.model.gamma, cfg.model.c0, s};
}

RunResult run_from(const RunConfig& cfg, const SimState& initial, const Discretization& disc,
                   const FunctionalContext& ctx, const std::optional<std::string>& out_dir, std::ostream& log,
                   json extra) {
  std::optional<fs::path> dir;
  if (out_dir) {
    dir = fs::path(*out_dir);
    ensure_dir(*dir);
    save_config(cfg, (*dir / "config.json").string());
    if (cfg.schedule.checkpoint_every > 0) ensure_dir(*dir / "checkpoints");
  }

  std::ofstream csv;
  if (dir) {
    csv.open(*dir / "series.csv");
    if (!csv) throw IoError("cannot write " + (*dir / "series.csv").string());
    const auto cols = csv_columns(disc.dim());
    for (std::size_t i = 0; i < cols.size(); ++i) csv << (i ? "," : "") << cols[i];
    csv << "\n";
  }

  IntegrateHooks hooks;
  hooks.on_report = [&](const EnergyReport& r) {
    if (dir) {
      csv << csv_row(r, disc.dim()) << "\n";
      csv.flush();
    }
  };
  hooks.on_checkpoint = [&](const SimState& s) {
    if (dir) write_checkpoint((*dir / "checkpoints" / checkpoint_name(s.step)).string(), make_checkpoint(cfg, s));
  };

  const auto t_start = std::chrono::steady_clock::now();
  RunResult res;
  res.initial = initial;
  res.trajectory = integrate(ctx, initial, cfg.schedule, hooks);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  res.summary = summarize(cfg, res.trajectory, initial, disc);
  res.summary["wall_time_seconds"] = wall;
  for (auto& [k, v] : extra.items()) res.summary[k] = v;
  if (dir) {
    if (!csv) throw IoError("failed writing series.csv");
    write_checkpoint((*dir / "final.bin").string(), make_checkpoint(cfg, res.trajectory.final_state));
    write_text(*dir / "summary.json", res.summary.dump(2) + "\n");
  }
  log << "steps " << res.trajectory.stats.steps << ", t = " << res.trajectory.final_state.t << ", E = "
      << fmt(res.trajectory.reports.back().energy.E) << ", wall " << wall << " s\n";
  return res;
}

}  // namespace

std::vector<std::string> csv_columns(int dim) {
  std::vector<std::string> c{"t", "E0", "E1", "D1", "E2", "D2", "E", "D", "DT1", "DT", "mass_f", "mass_rho"};
  for (int a = 1; a <= dim; ++a) c.push_back("momentum_" + std::to_string(a));
  for (const char* n : {"entropy_lhs_rate", "entropy_rhs", "entropy_residual", "moment_residual_a",
                        "moment_residual_b", "moment_residual_gamma", "zero_mean_a", "zero_mean_rho"})
    c.emplace_back(n);
  for (int a = 1; a <= dim; ++a) c.push_back("zero_mean_momentum_" + std::to_string(a));
  for (const char* n : {"F_min", "truncation_leakage", "plain_norm"}) c.emplace_back(n);
  return c;
}

std::string csv_row(const EnergyReport& r, int dim) {
  std::vector<double> v{r.t,          r.energy.E0, r.energy.E1, r.energy.D1,         r.energy.E2,
                        r.energy.D2,  r.energy.E,  r.energy.D,  r.energy.DT1,        r.energy.DT,
                        r.conserved.mass_f, r.conserved.mass_rho};
  for (int a = 0; a < dim; ++a) v.push_back(r.conserved.momentum(a));
  for (double x : {r.entropy.lhs_rate, r.entropy.rhs, r.entropy.residual, r.moments.a, r.moments.b,
                   r.moments.gamma, r.zero_mean_a, r.zero_mean_rho})
    v.push_back(x);
  for (int a = 0; a < dim; ++a) v.push_back(r.zero_mean_momentum(a));
  for (double x : {r.F_min, r.truncation_leakage, r.plain_norm}) v.push_back(x);
  std::string line;
  for (std::size_t i = 0; i < v.size(); ++i) line += (i ? "," : "") + fmt(v[i]);
  return line;
}

void write_series_csv(const std::string& path, const std::vector<EnergyReport>& reports, int dim) {
  std::ostringstream os;
  const auto cols = csv_columns(dim);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const auto& r : reports) os << csv_row(r, dim) << "\n";
  write_text(path, os.str());
}

std::map<std::string, std::vector<double>> read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open series: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty series file");
  std::vector<std::string> names;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) names.push_back(cell);
  }
  std::map<std::string, std::vector<double>> out;
  for (const auto& n : names) out[n];
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t i = 0;
    while (std::getline(ss, cell, ',')) {
      if (i >= names.size()) throw IoError(path + ":" + std::to_string(lineno) + ": too many fields");
      double v;
      if (cell == "nan" || cell == "NaN") {
        v = std::numeric_limits<double>::quiet_NaN();
      } else {
        try {
          std::size_t used = 0;
          v = std::stod(cell, &used);
          if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
          throw IoError(path + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
        }
      }
      out[names[i++]].push_back(v);
    }
    if (i != names.size()) throw IoError(path + ":" + std::to_string(lineno) + ": expected " +
                                         std::to_string(names.size()) + " fields");
  }
  return out;
}

json summarize(const RunConfig& cfg, const Trajectory& traj, const SimState& initial, const Discretization& disc) {
  const auto& reps = traj.reports;
  const int dim = disc.dim();
  json s;
  s["config"] = to_json(cfg);
  const EnergyReport& last = reps.back();
  s["final"] = {{"t", last.t},         {"E", num(last.energy.E)}, {"D", num(last.energy.D)},
                {"DT", num(last.energy.DT)}, {"F_min", num(last.F_min)}, {"plain_norm", num(last.plain_norm)}};

  std::vector<double> ts, es;
  for (const auto& r : reps) {
    ts.push_back(r.t);
    es.push_back(r.energy.E);
  }
  try {
    const DecayFit fit = fit_decay(ts, es, DecayModel::exponential, cfg.fit_t0, cfg.fit_t1);
    s["fit"] = {{"model", "exp"},
                {"window", {cfg.fit_t0, cfg.fit_t1}},
                {"lambda", fit.rate},
                {"amplitude", fit.amplitude},
                {"r_squared", fit.r_squared},
                {"points", fit.points}};
  } catch (const Error& e) {
    s["fit"] = {{"model", "exp"}, {"window", {cfg.fit_t0, cfg.fit_t1}}, {"error", e.what()}};
  }

  const EnergyReport& first = reps.front();
  double dmf = 0, dmr = 0;
  std::vector<double> dmom(static_cast<std::size_t>(dim), 0.0);
  double max_rhs = -std::numeric_limits<double>::infinity(), max_res = 0, fmin = std::numeric_limits<double>::infinity();
  double max_ma = 0, max_mb = 0, max_mg = 0;
  for (const auto& r : reps) {
    dmf = std::max(dmf, std::abs(r.conserved.mass_f - first.conserved.mass_f));
    dmr = std::max(dmr, std::abs(r.conserved.mass_rho - first.conserved.mass_rho));
    for (int a = 0; a < dim; ++a)
      dmom[static_cast<std::size_t>(a)] =
          std::max(dmom[static_cast<std::size_t>(a)], std::abs(r.conserved.momentum(a) - first.conserved.momentum(a)));
    if (std::isfinite(r.entropy.rhs)) max_rhs = std::max(max_rhs, r.entropy.rhs);
    if (std::isfinite(r.entropy.residual)) max_res = std::max(max_res, std::abs(r.entropy.residual));
    if (std::isfinite(r.moments.a)) max_ma = std::max(max_ma, r.moments.a);
    if (std::isfinite(r.moments.b)) max_mb = std::max(max_mb, r.moments.b);
    if (std::isfinite(r.moments.gamma)) max_mg = std::max(max_mg, r.moments.gamma);
    fmin = std::min(fmin, r.F_min);
  }
  s["drift"] = {{"mass_f", dmf}, {"mass_rho", dmr}, {"momentum", dmom}};
  s["entropy"] = {{"max_rhs", num(max_rhs)}, {"max_abs_residual", max_res}};
  s["moment_residuals_max"] = {{"a", max_ma}, {"b", max_mb}, {"gamma", max_mg}};
  s["F_min"] = fmin;

  const ZeroMean z = zero_mean_check(disc, initial);
  std::vector<double> zm(z.momentum.data(), z.momentum.data() + z.momentum.size());
  s["zero_mean_initial"] = {{"a", z.a}, {"rho", z.rho}, {"momentum", zm}, {"hypotheses_hold", z.max_abs() <= 1e-12}};
  s["stats"] = {{"steps", traj.stats.steps},
                {"truncation_leakage", traj.stats.total_leakage},
                {"max_cfl", traj.stats.max_cfl},
                {"scheme", scheme_name(cfg.schedule.scheme)},
                {"picard_max_iterations", traj.stats.max_picard_iterations},
                {"picard_max_ratio", traj.stats.max_contraction_ratio},
                {"picard_mean_ratio", traj.stats.mean_contraction_ratio}};
  return s;
}

RunResult execute_run(const RunConfig& cfg, const std::optional<std::string>& out_dir, std::ostream& log) {
  cfg.validate();
  Discretization disc(cfg.grid, cfg.basis);
  std::string warning;
  effective_s_cap(cfg.weights, cfg.grid, &warning);
  json extra;
  extra["warnings"] = json::array();
  if (!warning.empty()) {
    log << "warning: " << warning << "\n";
    extra["warnings"].push_back(warning);
  }
  FunctionalContext ctx(disc, cfg.model, cfg.weights);
  if (cfg.check_equivalence) {
    const EquivalenceResult eq = norm_equivalence_battery(ctx);
    extra["norm_equivalence"] = {{"states", eq.states}, {"min_ratio", eq.min_ratio}, {"max_ratio", eq.max_ratio},
                                 {"passed", eq.passed}};
    if (!eq.passed) {
      std::ostringstream os;
      os << "functional weights fail the norm-equivalence battery: E/plain in [" << eq.min_ratio << ", "
         << eq.max_ratio << "], required [0.5, 2]";
      throw ConfigError(os.str());
    }
  }
  const SimState initial = preset_initial(cfg.preset, cfg.amplitude, cfg.seed, disc, cfg.model);
  const ZeroMean z = zero_mean_check(disc, initial);
  if (cfg.preset == "decay-torus" && z.max_abs() > 1e-12) {
    const std::string w = "initial data violates the zero-mean hypotheses of the decay theorem";
    log << "warning: " << w << "\n";
    extra["warnings"].push_back(w);
  }
  return run_from(cfg, initial, disc, ctx, out_dir, log, extra);
}

RunResult execute_resume(const std::string& checkpoint, long steps, const std::optional<std::string>& config_path,
                         const std::optional<std::string>& out_dir, std::ostream& log) {
  if (steps < 0) throw ConfigError("resume: steps must be >= 0");
  const Checkpoint cp = read_checkpoint(checkpoint);
  const fs::path ckdir = fs::path(checkpoint).parent_path();
  std::string cfg_path;
  if (config_path) {
    cfg_path = *config_path;
  } else {
    // Checkpoints live in <run>/checkpoints/ or directly in <run>/.
    for (const fs::path& cand : {ckdir / "config.json", ckdir.parent_path() / "config.json"}) {
      if (fs::exists(cand)) {
        cfg_path = cand.string();
        break;
      }
    }
    if (cfg_path.empty()) throw IoError("resume: no config.json next to " + checkpoint + "; pass --config");
  }
  RunConfig cfg = load_config(cfg_path);
  if (!(cfg.grid == cp.grid) || !(cfg.basis == cp.basis) || cfg.model.gamma != cp.gamma || cfg.model.c0 != cp.c0)
    throw ConfigError("resume: checkpoint grid/basis/model does not match " + cfg_path);
  cfg.schedule.n_steps = steps;
  std::string dir;
  if (out_dir) {
    dir = *out_dir;
  } else {
    fs::path base = ckdir.filename() == "checkpoints" ? ckdir.parent_path() : ckdir;
    dir = (base / ("resume_" + std::to_string(cp.state.step))).string();
  }
  cfg.output_dir = dir;
  Discretization disc(cfg.grid, cfg.basis);
  FunctionalContext ctx(disc, cfg.model, cfg.weights);
  json extra;
  extra["resumed_from"] = {{"checkpoint", checkpoint}, {"step", cp.state.step}, {"t", cp.state.t}};
  return run_from(cfg, cp.state, disc, ctx, dir, log, extra);
}

WindowSpec parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("window '" + text + "': expected T0:T1");
  WindowSpec w;
  try {
    std::size_t u0 = 0, u1 = 0;
    const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
    w.t0 = std::stod(a, &u0);
    w.t1 = std::stod(b, &u1);
    if (u0 != a.size() || u1 != b.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw ConfigError("window '" + text + "': expected two numbers T0:T1");
  }
  if (!(w.t1 > w.t0)) throw ConfigError("window '" + text + "': T0 must be smaller than T1");
  return w;
}

DecayFit fit_series(const std::string& csv_path, DecayModel model, const WindowSpec& window,
                    const std::string& column) {
  const auto cols = read_series_csv(csv_path);
  const auto t = cols.find("t");
  const auto v = cols.find(column);
  if (t == cols.end()) throw IoError(csv_path + ": no 't' column");
  if (v == cols.end()) throw IoError(csv_path + ": no '" + column + "' column");
  return fit_decay(t->second, v->second, model, window.t0, window.t1);
}

json probe_coercivity(const ProbeRequest& req) {
  const BasisSpec spec{req.dim, req.order, req.order + 2};
  const auto res = coercivity_probe<double>(
      spec, req.eigensolve ? CoercivityMode::eigensolve : CoercivityMode::random, req.samples, req.seed);
  json j{{"dim", req.dim},
         {"order", req.order},
         {"mode", req.eigensolve ? "eigensolve" : "random"},
         {"lambda0", res.lambda0},
         {"argmin", res.argmin}};
  if (!req.eigensolve) {
    j["samples"] = req.samples;
    j["seed"] = req.seed;
  }
  return j;
}

}  // namespace kfvp
