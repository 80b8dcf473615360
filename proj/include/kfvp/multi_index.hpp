#pragma once

#include <array>
#include <numeric>
#include <string>
#include <vector>

namespace kfvp {

inline constexpr int kMaxDim = 3;

/// Tuple of nonnegative integers; entries past the active dimension stay zero.
using MultiIndex = std::array<int, kMaxDim>;

inline int total_order(const MultiIndex& k) { return k[0] + k[1] + k[2]; }

inline MultiIndex unit_index(int axis) {
  MultiIndex e{0, 0, 0};
  e[axis] = 1;
  return e;
}

inline MultiIndex operator+(MultiIndex a, const MultiIndex& b) {
  for (int i = 0; i < kMaxDim; ++i) a[i] += b[i];
  return a;
}

inline std::string to_string(const MultiIndex& k, int dim) {
  std::string s = "(";
  for (int i = 0; i < dim; ++i) {
    if (i) s += ",";
    s += std::to_string(k[i]);
  }
  return s + ")";
}

/// All multi-indices in `dim` variables with lo <= |k| <= hi, lexicographic order.
inline std::vector<MultiIndex> multi_indices(int dim, int lo, int hi) {
  std::vector<MultiIndex> out;
  MultiIndex k{0, 0, 0};
  const auto recurse = [&](auto&& self, int axis, int remaining) -> void {
    if (axis == dim) {
      const int t = total_order(k);
      if (t >= lo && t <= hi) out.push_back(k);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      k[axis] = v;
      self(self, axis + 1, remaining - v);
    }
    k[axis] = 0;
  };
  recurse(recurse, 0, hi);
  return out;
}

}  // namespace kfvp
