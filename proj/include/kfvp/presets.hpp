#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kfvp/state.hpp"

namespace kfvp {

/// Names accepted by preset_initial.
const std::vector<std::string>& preset_names();

/// Build initial data.
///   equilibrium          zero state
///   decay-torus          zero-mean a, rho and total momentum, lowest Fourier band, micro part at 0.1 amplitude
///   conservation-audit   like decay-torus plus nonzero means in a, rho and u
///   manufactured-moment  macro-only kinetic part
/// Random draws use Rng (mt19937_64) seeded with `seed`.
SimState preset_initial(const std::string& name, double amplitude, std::uint64_t seed, const Discretization& disc,
                        const ModelParams& params);

}  // namespace kfvp
