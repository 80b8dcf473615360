#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kfvp/state.hpp"

namespace kfvp {

struct Tendencies {
  Mat df;
  Vec drho;
  Mat du;
};

struct StepStats {
  int picard_iterations = 0;
  double last_residual = 0.0;
  std::vector<double> residuals;
  std::vector<double> contraction_ratios;
  double truncation_leakage = 0.0;  ///< squared coefficient mass dropped by this step
  double dt_used = 0.0;
  double cfl = 0.0;  ///< dt * max|xi| * max|v| (advisory)
};

enum class Scheme { imex1, picard };

struct PicardOptions {
  double tol = 1e-10;  ///< relative to the H^s-type norm of the new iterate
  int max_iter = 20;
  int norm_order = 3;
};

/// Throws StateError if 1 + rho drops below the vacuum floor, DivergenceError on nonfinite entries.
void check_state(const Discretization& disc, const SimState& s, const ModelParams& params);

/// Full nonlinear tendencies of the perturbation system.
Tendencies rhs_full(const Discretization& disc, const SimState& s, const ModelParams& params);

/// Time derivative of the state at t = 0, from the equations themselves.
inline Tendencies ft0(const Discretization& disc, const SimState& s0, const ModelParams& params) {
  return rhs_full(disc, s0, params);
}

/// First-order IMEX step. Relaxation and the implicit viscous part are
/// solved pointwise/diagonally; phase-space transport is Crank-Nicolson in the
/// Fourier x discrete-velocity eigenbasis; the fluid is advanced in conservative
/// form so mass and total momentum are preserved.
std::pair<SimState, StepStats> step_imex(const Discretization& disc, const SimState& s, double dt,
                                         const ModelParams& params);

/// Per-step frozen-coefficient fixed-point iteration.
std::pair<SimState, StepStats> step_picard(const Discretization& disc, const SimState& s, double dt,
                                           const PicardOptions& opts, const ModelParams& params);

std::pair<SimState, StepStats> step(const Discretization& disc, const SimState& s, double dt, Scheme scheme,
                                    const PicardOptions& opts, const ModelParams& params);

/// min over grid points and quadrature nodes of M + sqrt(M) f.
double positivity_min(const Discretization& disc, const SimState& s);

/// Combined H^order norm of (f, rho, u), squared-sum convention, square-rooted.
double state_norm(const Discretization& disc, const Mat& f, const Vec& rho, const Mat& u, int order);

Scheme parse_scheme(const std::string& name);
std::string scheme_name(Scheme s);

}  // namespace kfvp
