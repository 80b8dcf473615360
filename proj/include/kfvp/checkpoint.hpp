#pragma once

#include <cstdint>
#include <string>

#include "kfvp/state.hpp"

namespace kfvp {

// Binary layout, all little-endian:
//   "KFVP"  u32 version
//   u32 dim_x, dim_v, n, order, quad_size
//   f64 box, gamma, c0, t
//   u64 step
//   f64 rho[P]
//   f64 u[D][P]        component-major
//   f64 f[P][M]        point-major, modes in lexicographic multi-index order
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  Grid grid;
  BasisSpec basis;
  double gamma = 1.4;
  double c0 = 1.0 / 1.4;
  SimState state;
};

void write_checkpoint(const std::string& path, const Checkpoint& cp);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace kfvp
