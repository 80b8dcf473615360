#pragma once

// Periodic pseudo-spectral discretization on [0, L)^d.
//
// Fields are stored flat with axis 0 slowest. Kinetic fields are matrices with
// one row per grid point and one column per Hermite mode; every column-wise
// routine here accepts either shape.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "kfvp/errors.hpp"
#include "kfvp/multi_index.hpp"

namespace kfvp {

struct Grid {
  int dim = 1;
  int n = 64;
  double box = 2.0 * std::numbers::pi;

  void validate() const {
    if (dim < 1 || dim > kMaxDim) throw ConfigError("grid: dim must be 1, 2 or 3 (got " + std::to_string(dim) + ")");
    if (n < 16 || n % 2 != 0) throw ConfigError("grid: n must be even and >= 16 (got " + std::to_string(n) + ")");
    if (!(box > 0.0) || !std::isfinite(box)) throw ConfigError("grid: box must be positive");
  }

  Eigen::Index points() const {
    Eigen::Index p = 1;
    for (int a = 0; a < dim; ++a) p *= n;
    return p;
  }
  double volume() const { return std::pow(box, dim); }

  friend bool operator==(const Grid&, const Grid&) = default;
};

template <typename Scalar>
class SpectralSpace {
 public:
  using Complex = std::complex<Scalar>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  using CVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  explicit SpectralSpace(const Grid& grid, int derivative_cap = 4) : grid_(grid), cap_(derivative_cap) {
    grid.validate();
    const int n = grid.n;
    const Eigen::Index p = grid.points();
    dealias_cut_ = (n - 1) / 3;
    const Scalar k0 = Scalar(2) * std::numbers::pi_v<Scalar> / Scalar(grid.box);
    wave_index_.resize(p, grid.dim);
    xi_.resize(p, grid.dim);
    nyquist_.resize(p, grid.dim);
    keep_.resize(p);
    coords_.resize(p, grid.dim);
    const Scalar h = Scalar(grid.box) / Scalar(n);
    for (Eigen::Index flat = 0; flat < p; ++flat) {
      Eigen::Index rem = flat;
      bool keep = true;
      for (int a = grid.dim - 1; a >= 0; --a) {
        const int j = static_cast<int>(rem % n);
        rem /= n;
        const int idx = j <= n / 2 ? j : j - n;
        wave_index_(flat, a) = idx;
        nyquist_(flat, a) = (j == n / 2);
        xi_(flat, a) = k0 * Scalar(idx);
        coords_(flat, a) = h * Scalar(j);
        if (std::abs(idx) > dealias_cut_) keep = false;
      }
      keep_(flat) = keep ? Scalar(1) : Scalar(0);
    }
  }

  const Grid& grid() const { return grid_; }
  int dim() const { return grid_.dim; }
  Eigen::Index points() const { return grid_.points(); }
  Scalar volume() const { return Scalar(grid_.volume()); }
  /// Volume element of the trapezoidal rule.
  Scalar cell() const { return volume() / Scalar(points()); }
  int derivative_cap() const { return cap_; }
  int dealias_cutoff() const { return dealias_cut_; }
  /// Physical coordinate of every grid point along `axis`.
  auto coordinate(int axis) const { return coords_.col(axis); }
  /// Angular wavenumber of every Fourier mode along `axis`.
  auto wavenumber(int axis) const { return xi_.col(axis); }
  /// Integer wave index (signed, Nyquist at +n/2).
  int wave_index(Eigen::Index mode, int axis) const { return wave_index_(mode, axis); }
  bool is_nyquist(Eigen::Index mode, int axis) const { return nyquist_(mode, axis); }
  const Vector& dealias_mask() const { return keep_; }

  void check_rows(Eigen::Index rows) const {
    if (rows != points())
      throw ShapeError("field has " + std::to_string(rows) + " points, grid expects " + std::to_string(points()));
  }

  template <typename Derived>
  CMatrix forward(const Eigen::MatrixBase<Derived>& field) const {
    check_rows(field.rows());
    CMatrix out = field.template cast<Complex>();
    transform(out, false);
    return out;
  }

  /// Real part of the inverse transform.
  template <typename Derived>
  Matrix inverse(const Eigen::MatrixBase<Derived>& spec) const {
    check_rows(spec.rows());
    CMatrix tmp = spec;
    transform(tmp, true);
    return tmp.real();
  }

  /// Spectral multiplier of d^alpha: prod_a (i xi_a)^alpha_a, Nyquist zeroed for odd orders.
  CVector derivative_symbol(const MultiIndex& alpha) const {
    check_order(alpha);
    CVector m(points());
    for (Eigen::Index j = 0; j < points(); ++j) {
      Complex s(1);
      for (int a = 0; a < dim(); ++a) {
        if (alpha[a] == 0) continue;
        if (alpha[a] % 2 == 1 && nyquist_(j, a)) {
          s = Complex(0);
          break;
        }
        s *= std::pow(Complex(0, xi_(j, a)), alpha[a]);
      }
      m(j) = s;
    }
    return m;
  }

  /// |symbol|^2 of d^alpha.
  Vector derivative_weight(const MultiIndex& alpha) const { return derivative_symbol(alpha).cwiseAbs2(); }

  /// sum_{lo <= |alpha| <= hi} |symbol of d^alpha|^2 per Fourier mode.
  Vector sobolev_weight(int hi, int lo = 0) const {
    Vector w = Vector::Zero(points());
    if (hi < lo) return w;
    for (const MultiIndex& alpha : multi_indices(dim(), lo, hi)) w += derivative_weight(alpha);
    return w;
  }

  void check_order(const MultiIndex& alpha) const {
    if (total_order(alpha) > cap_)
      throw OrderError("derivative order " + std::to_string(total_order(alpha)) + " exceeds cap " +
                       std::to_string(cap_));
    for (int a = dim(); a < kMaxDim; ++a)
      if (alpha[a] != 0) throw DimensionError("derivative along axis beyond grid dimension");
  }

  template <typename Derived>
  Matrix derivative(const Eigen::MatrixBase<Derived>& field, const MultiIndex& alpha) const {
    CMatrix s = forward(field);
    s = derivative_symbol(alpha).asDiagonal() * s;
    return inverse(s);
  }

  template <typename Derived>
  Matrix derivative(const Eigen::MatrixBase<Derived>& field, int axis, int order = 1) const {
    if (axis < 0 || axis >= dim()) throw DimensionError("derivative axis out of range");
    MultiIndex alpha{0, 0, 0};
    alpha[axis] = order;
    return derivative(field, alpha);
  }

  /// 2/3-rule truncation.
  template <typename Derived>
  Matrix dealias(const Eigen::MatrixBase<Derived>& field) const {
    CMatrix s = forward(field);
    s = keep_.template cast<Complex>().asDiagonal() * s;
    return inverse(s);
  }

  /// Dealiased pointwise product.
  template <typename A, typename B>
  Matrix product(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) const {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("product: operand shape mismatch");
    return dealias(a.cwiseProduct(b));
  }

  /// Integral over the box of each column.
  template <typename Derived>
  Scalar integral(const Eigen::MatrixBase<Derived>& field) const {
    check_rows(field.rows());
    return field.sum() * cell();
  }

  template <typename Derived>
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> column_integrals(const Eigen::MatrixBase<Derived>& field) const {
    check_rows(field.rows());
    return field.colwise().sum() * cell();
  }

  template <typename Derived>
  Scalar l2_sq(const Eigen::MatrixBase<Derived>& field) const {
    check_rows(field.rows());
    return field.squaredNorm() * cell();
  }

  template <typename Derived>
  Scalar l2(const Eigen::MatrixBase<Derived>& field) const {
    using std::sqrt;
    return sqrt(l2_sq(field));
  }

  /// Parseval scale: int |f|^2 dx = spectral_scale() * sum |f_hat|^2.
  Scalar spectral_scale() const { return volume() / (Scalar(points()) * Scalar(points())); }

  /// sum_{|alpha| <= s} ||d^alpha f||, the sum-of-norms convention.
  template <typename Derived>
  Scalar sobolev_norm(const Eigen::MatrixBase<Derived>& field, int s) const {
    check_cap(s);
    using std::sqrt;
    const Vector power = forward(field).cwiseAbs2().rowwise().sum();
    Scalar total = 0;
    for (const MultiIndex& alpha : multi_indices(dim(), 0, s))
      total += sqrt(spectral_scale() * derivative_weight(alpha).dot(power));
    return total;
  }

  /// sum_{|alpha| <= s} ||d^alpha f||^2, the squared convention.
  template <typename Derived>
  Scalar sobolev_norm_sq(const Eigen::MatrixBase<Derived>& field, int s) const {
    check_cap(s);
    const Vector power = forward(field).cwiseAbs2().rowwise().sum();
    return spectral_scale() * sobolev_weight(s).dot(power);
  }

  void check_cap(int s) const {
    if (s > cap_) throw OrderError("Sobolev order " + std::to_string(s) + " exceeds cap " + std::to_string(cap_));
    if (s < 0) throw OrderError("Sobolev order must be nonnegative");
  }

 private:
  // In-place multi-dimensional FFT over the rows of every column.
  void transform(CMatrix& data, bool inverse) const {
    thread_local Eigen::FFT<Scalar> fft;
    const int n = grid_.n;
    const Eigen::Index p = points();
    std::vector<Complex> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
    for (int a = 0; a < dim(); ++a) {
      Eigen::Index stride = 1;
      for (int b = a + 1; b < dim(); ++b) stride *= n;
      const Eigen::Index block = stride * n;
      for (Eigen::Index c = 0; c < data.cols(); ++c) {
        Complex* col = data.col(c).data();
        for (Eigen::Index base = 0; base < p; base += block) {
          for (Eigen::Index off = 0; off < stride; ++off) {
            Complex* line = col + base + off;
            for (int j = 0; j < n; ++j) in[static_cast<std::size_t>(j)] = line[j * stride];
            if (inverse)
              fft.inv(out, in);
            else
              fft.fwd(out, in);
            for (int j = 0; j < n; ++j) line[j * stride] = out[static_cast<std::size_t>(j)];
          }
        }
      }
    }
  }

  Grid grid_;
  int cap_;
  int dealias_cut_ = 0;
  Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic> wave_index_;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> nyquist_;
  Matrix xi_;
  Matrix coords_;
  Vector keep_;
};

}  // namespace kfvp
