#pragma once

#include <array>
#include <string>
#include <vector>

#include "kfvp/dynamics.hpp"

namespace kfvp {

struct FunctionalWeights {
  double tau1 = 0.01;
  double tau2 = 0.01;
  double tau3 = 1.0;
  double tau4 = 0.01;
  double tau5 = 0.01;
  std::array<double, 4> ck{0.25, 0.0625, 0.015625, 0.00390625};
  int s_cap = 4;

  void validate() const;
};

/// s_cap lowered to 3 when the grid has fewer than 32 points per axis. `warning`
/// receives a message when the cap changes.
int effective_s_cap(const FunctionalWeights& w, const Grid& grid, std::string* warning = nullptr);

struct EnergyTerms {
  double E0 = 0, E1 = 0, D1 = 0, E2 = 0, D2 = 0, E = 0, D = 0, DT1 = 0, DT = 0;
};

struct Conserved {
  double mass_f = 0;
  double mass_rho = 0;
  Vec momentum;
};

struct EntropyBalance {
  double lhs_rate = 0;
  double rhs = 0;
  double residual = 0;
};

struct MomentResiduals {
  double a = 0;
  double b = 0;
  double gamma = 0;
};

struct EnergyReport {
  double t = 0;
  EnergyTerms energy;
  Conserved conserved;
  EntropyBalance entropy;
  MomentResiduals moments;
  double zero_mean_a = 0;
  double zero_mean_rho = 0;
  Vec zero_mean_momentum;
  double F_min = 0;
  double truncation_leakage = 0;
  double plain_norm = 0;
};

/// Precomputed velocity-derivative Gram matrices for one discretization.
class FunctionalContext {
 public:
  FunctionalContext(const Discretization& disc, const ModelParams& params, const FunctionalWeights& weights);

  const Discretization& disc() const { return *disc_; }
  const ModelParams& params() const { return params_; }
  const FunctionalWeights& weights() const { return weights_; }
  int s_cap() const { return s_cap_; }

  /// sum_{|beta| = k} D_beta^T D_beta, D_beta the exact velocity derivative.
  const Mat& l2_gram(int k) const { return l2_gram_[k]; }
  /// sum_{|beta| = k} D_beta^T G_nu D_beta.
  const Mat& nu_gram(int k) const { return nu_gram_[k]; }

 private:
  const Discretization* disc_;
  ModelParams params_;
  FunctionalWeights weights_;
  int s_cap_;
  std::vector<Mat> l2_gram_;
  std::vector<Mat> nu_gram_;
};

/// Matrix of the exact velocity derivative d^beta from the order-N basis into the order-(N + |beta|) basis.
Mat velocity_derivative(int dim, int order, const MultiIndex& beta);

/// sum_{|alpha| + |beta| <= s} ||d^alpha_beta f||.
double mixed_sobolev_norm(const Discretization& disc, const Mat& f, int s);
/// sum_{|alpha| + |beta| <= s} ||d^alpha_beta f||^2.
double mixed_sobolev_norm_sq(const Discretization& disc, const Mat& f, int s);

/// Gamma_{ij} applied at every grid point.
Vec gamma_field(const VelocityBasis<double>& vel, const Mat& g, int i, int j, GammaConvention conv);

double energy_E0(const FunctionalContext& ctx, const SimState& s);
double energy_E1(const FunctionalContext& ctx, const SimState& s);
double dissipation_D1(const FunctionalContext& ctx, const SimState& s);
std::pair<double, double> energy_E2_D2(const FunctionalContext& ctx, const SimState& s);
EnergyTerms energy_total(const FunctionalContext& ctx, const SimState& s);

/// ||f||^2_{H^s_{x,v}} + ||(rho, u)||^2_{H^s}, squared-sum convention.
double plain_norm(const FunctionalContext& ctx, const SimState& s);

Conserved conserved(const Discretization& disc, const SimState& s);

struct ZeroMean {
  double a = 0;
  double rho = 0;
  Vec momentum;
  double max_abs() const;
};
ZeroMean zero_mean_check(const Discretization& disc, const SimState& s);

/// Free energy: fluid kinetic + pressure potential + kinetic entropy relative to M.
double entropy(const Discretization& disc, const SimState& s, const ModelParams& params);
/// -int n |grad_v g - u (1 + g)|^2 / (1 + g) M dv dx with g = f / sqrt(M).
double entropy_dissipation(const Discretization& disc, const SimState& s);
EntropyBalance entropy_balance(const Discretization& disc, const SimState& s, const SimState& prev, double dt,
                               const ModelParams& params);

/// Residual norms of the a, b and second-moment equations at `mid`, with
/// centered differences over `before` and `after` (each dt away).
MomentResiduals moment_residuals(const Discretization& disc, const SimState& before, const SimState& mid,
                                 const SimState& after, double dt, const ModelParams& params);

/// Series version: centered in the interior, one-sided at the ends.
std::vector<MomentResiduals> moment_residuals(const Discretization& disc, const std::vector<SimState>& series,
                                              double dt, const ModelParams& params);

enum class DecayModel { exponential, algebraic };
DecayModel parse_decay_model(const std::string& name);

struct DecayFit {
  double rate = 0;  ///< exponential: lambda in e^{-lambda t}; algebraic: exponent p in (1+t)^p
  double amplitude = 0;
  double r_squared = 0;
  int points = 0;
};

DecayFit fit_decay(const std::vector<double>& times, const std::vector<double>& values, DecayModel model,
                   double t0, double t1);

/// Random smooth small state: Fourier modes 1-2, macro Hermite modes plus a
/// weaker micro part with |k| in {2, 3}; sup norm of every field at most amplitude.
SimState random_smooth_state(const Discretization& disc, Rng& rng, double amplitude);

struct EquivalenceResult {
  bool passed = false;
  double min_ratio = 0;  ///< min E / plain
  double max_ratio = 0;
  int states = 0;
};
EquivalenceResult norm_equivalence_battery(const FunctionalContext& ctx, int count = 100, double amplitude = 0.1,
                                           std::uint64_t seed = 20240901);

/// Everything except the time-differenced entries, which need neighbors.
EnergyReport make_report(const FunctionalContext& ctx, const SimState& s);

}  // namespace kfvp
