#pragma once

#include <functional>
#include <vector>

#include "kfvp/functionals.hpp"

namespace kfvp {

struct Schedule {
  double dt = 2e-3;
  long n_steps = 5000;
  Scheme scheme = Scheme::imex1;
  PicardOptions picard;
  int report_every = 50;
  int checkpoint_every = 0;  ///< 0 disables periodic checkpoints

  void validate() const;
};

struct RunStats {
  long steps = 0;
  double total_leakage = 0.0;
  double max_cfl = 0.0;
  int max_picard_iterations = 0;
  double max_contraction_ratio = 0.0;
  double mean_contraction_ratio = 0.0;  ///< over all recorded ratios
};

struct IntegrateHooks {
  std::function<void(const EnergyReport&)> on_report;
  std::function<void(const SimState&)> on_checkpoint;
  std::function<void(const SimState&, const StepStats&)> on_step;
};

struct Trajectory {
  std::vector<EnergyReport> reports;
  SimState final_state;
  RunStats stats;
};

/// Advance `initial` by schedule.n_steps steps, reporting at step 0 and every
/// report_every steps (and at the final step). Reports at step n carry the
/// entropy balance over [n-1, n] and the moment residuals centered at n-1.
Trajectory integrate(const FunctionalContext& ctx, const SimState& initial, const Schedule& schedule,
                     const IntegrateHooks& hooks = {});

}  // namespace kfvp
