#include "kfvp/integrate.hpp"

#include <optional>

namespace kfvp {

void Schedule::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("schedule: dt must be positive");
  if (n_steps < 0) throw ConfigError("schedule: n_steps must be >= 0");
  if (report_every < 1) throw ConfigError("schedule: report_every must be >= 1");
  if (checkpoint_every < 0) throw ConfigError("schedule: checkpoint_every must be >= 0");
  if (scheme == Scheme::picard) {
    if (!(picard.tol > 0.0)) throw ConfigError("scheme: tol must be positive");
    if (picard.max_iter < 2) throw ConfigError("scheme: max_iter must be >= 2");
  }
}

Trajectory integrate(const FunctionalContext& ctx, const SimState& initial, const Schedule& schedule,
                     const IntegrateHooks& hooks) {
  schedule.validate();
  const auto& disc = ctx.disc();
  const auto& params = ctx.params();
  check_state(disc, initial, params);

  Trajectory traj;
  SimState cur = initial;
  std::optional<SimState> prev, prev2;
  double ratio_sum = 0.0;
  long ratio_count = 0;

  const auto emit = [&](long local_step) {
    EnergyReport r = make_report(ctx, cur);
    r.truncation_leakage = traj.stats.total_leakage;
    if (local_step >= 1 && prev) r.entropy = entropy_balance(disc, cur, *prev, schedule.dt, params);
    if (local_step >= 2 && prev && prev2)
      r.moments = moment_residuals(disc, *prev2, *prev, cur, schedule.dt, params);
    if (hooks.on_report) hooks.on_report(r);
    traj.reports.push_back(std::move(r));
  };

  emit(0);
  for (long k = 1; k <= schedule.n_steps; ++k) {
    auto [next, st] = step(disc, cur, schedule.dt, schedule.scheme, schedule.picard, params);
    traj.stats.total_leakage += st.truncation_leakage;
    traj.stats.max_cfl = std::max(traj.stats.max_cfl, st.cfl);
    traj.stats.max_picard_iterations = std::max(traj.stats.max_picard_iterations, st.picard_iterations);
    for (double q : st.contraction_ratios) {
      traj.stats.max_contraction_ratio = std::max(traj.stats.max_contraction_ratio, q);
      ratio_sum += q;
      ++ratio_count;
    }
    if (hooks.on_step) hooks.on_step(next, st);
    prev2 = std::move(prev);
    prev = std::move(cur);
    cur = std::move(next);
    traj.stats.steps = k;
    if (k % schedule.report_every == 0 || k == schedule.n_steps) emit(k);
    if (schedule.checkpoint_every > 0 && k % schedule.checkpoint_every == 0 && hooks.on_checkpoint)
      hooks.on_checkpoint(cur);
  }
  traj.stats.mean_contraction_ratio = ratio_count ? ratio_sum / double(ratio_count) : 0.0;
  traj.final_state = std::move(cur);
  return traj;
}

}  // namespace kfvp
