#include "kfvp/state.hpp"

#include <Eigen/Eigenvalues>

namespace kfvp {

Discretization::Discretization(const Grid& grid, const BasisSpec& basis, int derivative_cap)
    : grid_(grid), basis_spec_(basis), space_(grid, derivative_cap), velocity_(basis) {
  if (grid.dim != basis.dim)
    throw ConfigError("grid dimension " + std::to_string(grid.dim) + " differs from velocity dimension " +
                      std::to_string(basis.dim));
  const Eigen::Index p = space_.points();
  laplace_ = Vec::Zero(p);
  for (int a = 0; a < dim(); ++a) {
    Vec xi = space_.wavenumber(a);
    laplace_ -= xi.cwiseAbs2();
    for (Eigen::Index j = 0; j < p; ++j)
      if (space_.is_nyquist(j, a)) xi(j) = 0.0;
    xi_odd_[a] = xi;
    d_symbol_[a] = xi.cast<std::complex<double>>() * std::complex<double>(0.0, 1.0);
  }

  // 1D truncated v: symmetric tridiagonal with off-diagonals sqrt(k).
  const int n = basis.order;
  Mat jac = Mat::Zero(n, n);
  for (int k = 1; k < n; ++k) jac(k, k - 1) = jac(k - 1, k) = std::sqrt(double(k));
  Eigen::SelfAdjointEigenSolver<Mat> eig(jac);
  const Mat& q1 = eig.eigenvectors();
  const Vec& l1 = eig.eigenvalues();
  max_speed_ = l1.cwiseAbs().maxCoeff();

  const ModeSpace& ms = velocity_.modes();
  const Eigen::Index m = ms.size();
  q_.resize(m, m);
  lambda_.resize(m, dim());
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) {
      double v = 1.0;
      for (int a = 0; a < dim(); ++a) v *= q1(ms[r][a], ms[c][a]);
      q_(r, c) = v;
    }
  }
  for (Eigen::Index c = 0; c < m; ++c)
    for (int a = 0; a < dim(); ++a) lambda_(c, a) = l1(ms[c][a]);
}

SimState Discretization::zero_state() const {
  SimState s;
  s.f = Mat::Zero(points(), modes());
  s.rho = Vec::Zero(points());
  s.u = Mat::Zero(points(), dim());
  return s;
}

void Discretization::check_shape(const SimState& s) const {
  if (s.f.rows() != points() || s.f.cols() != modes())
    throw ShapeError("kinetic field is " + std::to_string(s.f.rows()) + "x" + std::to_string(s.f.cols()) +
                     ", expected " + std::to_string(points()) + "x" + std::to_string(modes()));
  if (s.rho.size() != points()) throw ShapeError("density field has wrong size");
  if (s.u.rows() != points() || s.u.cols() != dim()) throw ShapeError("velocity field has wrong shape");
}

Mat Discretization::dx(const Mat& field, int axis) const {
  CMat s = space_.forward(field);
  s = d_symbol_[axis].asDiagonal() * s;
  return space_.inverse(s);
}

Mat Discretization::laplace(const Mat& field) const {
  CMat s = space_.forward(field);
  s = laplace_.cast<std::complex<double>>().asDiagonal() * s;
  return space_.inverse(s);
}

}  // namespace kfvp
