#pragma once

#include <cmath>
#include <cstdint>
#include <memory>

#include <Eigen/Dense>

#include "kfvp/hermite.hpp"
#include "kfvp/spectral.hpp"

namespace kfvp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

struct ModelParams {
  double gamma = 1.4;
  double c0 = 1.0 / 1.4;
  bool normalize_pressure = true;  ///< require p'(1) = c0 * gamma = 1
  double vacuum_floor = 1e-6;      ///< hard lower bound on 1 + rho
  GammaConvention gamma_convention = GammaConvention::literal;

  void validate() const {
    if (!(gamma >= 1.0)) throw ConfigError("model: gamma must be >= 1");
    if (!(c0 > 0.0)) throw ConfigError("model: c0 must be positive");
    if (normalize_pressure && std::abs(c0 * gamma - 1.0) > 1e-12)
      throw ConfigError("model: c0 * gamma must equal 1 when normalize_pressure is set");
  }

  double pressure(double n) const { return c0 * std::pow(n, gamma); }
  double pressure_slope(double n) const { return c0 * gamma * std::pow(n, gamma - 1.0); }
  /// Pressure potential with A(1) = 0.
  double potential(double n) const {
    if (gamma == 1.0) return c0 * std::log(n);
    return c0 * (std::pow(n, gamma - 1.0) - 1.0) / (gamma - 1.0);
  }
};

/// f: one row per grid point, one column per Hermite mode.
/// rho: density perturbation. u: one column per velocity component.
struct SimState {
  Mat f;
  Vec rho;
  Mat u;
  double t = 0.0;
  std::uint64_t step = 0;
};

/// Grid, velocity basis and the operators shared by the steppers and diagnostics.
class Discretization {
 public:
  Discretization(const Grid& grid, const BasisSpec& basis, int derivative_cap = 4);

  const Grid& grid() const { return grid_; }
  const BasisSpec& basis_spec() const { return basis_spec_; }
  const SpectralSpace<double>& space() const { return space_; }
  const VelocityBasis<double>& velocity() const { return velocity_; }
  int dim() const { return grid_.dim; }
  Eigen::Index points() const { return space_.points(); }
  Eigen::Index modes() const { return velocity_.size(); }

  /// Symbol of d/dx_a with the Nyquist mode removed.
  const Eigen::VectorXcd& d_symbol(int axis) const { return d_symbol_[axis]; }
  /// Wavenumber along axis a with the Nyquist mode set to zero.
  const Vec& xi_odd(int axis) const { return xi_odd_[axis]; }
  /// -|xi|^2.
  const Vec& laplace_symbol() const { return laplace_; }

  /// Orthogonal eigenvectors of the truncated multiplication-by-v operators
  /// (they commute, so one basis diagonalizes every axis).
  const Mat& transport_vectors() const { return q_; }
  /// Discrete velocities: entry (j, a) is the eigenvalue of v_a on eigenvector j.
  const Mat& transport_velocities() const { return lambda_; }
  double max_speed() const { return max_speed_; }

  SimState zero_state() const;
  void check_shape(const SimState& s) const;

  // Column-wise helpers on P x M kinetic fields or P x 1 scalar fields.
  Mat dx(const Mat& field, int axis) const;
  Mat laplace(const Mat& field) const;
  Mat dealias(const Mat& field) const { return space_.dealias(field); }

  /// f * op^T: velocity operator applied at every grid point.
  Mat apply_velocity(const Mat& f, const Eigen::SparseMatrix<double>& op) const {
    return f * op.transpose();
  }

 private:
  Grid grid_;
  BasisSpec basis_spec_;
  SpectralSpace<double> space_;
  VelocityBasis<double> velocity_;
  std::array<Eigen::VectorXcd, kMaxDim> d_symbol_;
  std::array<Vec, kMaxDim> xi_odd_;
  Vec laplace_;
  Mat q_;
  Mat lambda_;
  double max_speed_ = 0.0;
};

}  // namespace kfvp
