#pragma once

// Velocity-space algebra in the orthonormal Hermite basis
//
//   psi_k(v) = prod_a He_{k_a}(v_a) sqrt(M(v_a)) / sqrt(k_a!),
//   M(v) = (2 pi)^{-D/2} exp(-|v|^2 / 2),
//
// where He_k are the probabilists' Hermite polynomials. In this basis the
// linearized Fokker-Planck operator is diagonal with eigenvalue -|k|, the
// moments a, b are single coefficients, and the macro projection P is a
// coordinate projection. Coefficient vectors are indexed by multi-indices in
// lexicographic order (axis 0 most significant).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include "kfvp/errors.hpp"
#include "kfvp/multi_index.hpp"
#include "kfvp/rng.hpp"

namespace kfvp {

struct BasisSpec {
  int dim = 1;        ///< velocity dimension D
  int order = 8;      ///< Hermite modes per axis, indices 0..order-1
  int quad_size = 10; ///< Gauss-Hermite nodes per axis

  void validate() const {
    if (dim < 1 || dim > kMaxDim)
      throw ConfigError("basis: dim must be 1, 2 or 3 (got " + std::to_string(dim) + ")");
    if (order < 4)
      throw ConfigError("basis: order must be >= 4 (got " + std::to_string(order) + ")");
    if (quad_size < order + 2)
      throw ConfigError("basis: quad_size must be >= order + 2 (got " + std::to_string(quad_size) +
                        " for order " + std::to_string(order) + ")");
  }

  Eigen::Index num_modes() const { return ipow(order, dim); }
  Eigen::Index num_nodes() const { return ipow(quad_size, dim); }

  static Eigen::Index ipow(int base, int e) {
    Eigen::Index r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
  }

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

/// Enumeration of the tensor multi-indices of a truncated basis.
class ModeSpace {
 public:
  ModeSpace() = default;
  ModeSpace(int dim, int order) : dim_(dim), order_(order) {
    const Eigen::Index n = BasisSpec::ipow(order, dim);
    modes_.resize(static_cast<std::size_t>(n));
    for (Eigen::Index flat = 0; flat < n; ++flat) {
      MultiIndex k{0, 0, 0};
      Eigen::Index rem = flat;
      for (int a = dim - 1; a >= 0; --a) {
        k[a] = static_cast<int>(rem % order);
        rem /= order;
      }
      modes_[static_cast<std::size_t>(flat)] = k;
    }
  }

  int dim() const { return dim_; }
  int order() const { return order_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(modes_.size()); }
  const MultiIndex& operator[](Eigen::Index flat) const { return modes_[static_cast<std::size_t>(flat)]; }

  bool contains(const MultiIndex& k) const {
    for (int a = 0; a < dim_; ++a)
      if (k[a] < 0 || k[a] >= order_) return false;
    for (int a = dim_; a < kMaxDim; ++a)
      if (k[a] != 0) return false;
    return true;
  }

  Eigen::Index index(const MultiIndex& k) const {
    Eigen::Index flat = 0;
    for (int a = 0; a < dim_; ++a) flat = flat * order_ + k[a];
    return flat;
  }

 private:
  int dim_ = 0;
  int order_ = 0;
  std::vector<MultiIndex> modes_;
};

enum class Ladder {
  lower,      ///< (d/dv_a + v_a/2):  psi_k -> sqrt(k_a) psi_{k-e_a}
  raise_neg,  ///< (d/dv_a - v_a/2):  psi_k -> -sqrt(k_a+1) psi_{k+e_a}
  mult_v,     ///< v_a:               psi_k -> sqrt(k_a+1) psi_{k+e_a} + sqrt(k_a) psi_{k-e_a}
  d_v,        ///< d/dv_a = (lower + raise_neg) / 2
};
inline constexpr std::array<Ladder, 4> kAllLadders{Ladder::lower, Ladder::raise_neg, Ladder::mult_v,
                                                   Ladder::d_v};

enum class Projection { P0, P1, P, IminusP };

/// Convention for Gamma_{ij}(g) = <(v_i v_j - c_ij) sqrt(M), g>.
enum class GammaConvention {
  literal,    ///< c_ij = 1 for every pair
  kronecker,  ///< c_ij = delta_ij
};

/// Sparse matrix of a ladder operator from the order_in basis into the order_out
/// basis. Output modes with a component >= order_out are dropped.
template <typename Scalar>
Eigen::SparseMatrix<Scalar> ladder_matrix(Ladder kind, int axis, int dim, int order_in, int order_out) {
  if (axis < 0 || axis >= dim)
    throw DimensionError("ladder: axis " + std::to_string(axis) + " out of range for dim " + std::to_string(dim));
  const ModeSpace in(dim, order_in);
  const ModeSpace out(dim, order_out);
  std::vector<Eigen::Triplet<Scalar>> trip;
  trip.reserve(static_cast<std::size_t>(2 * in.size()));
  const auto emit = [&](const MultiIndex& k, Eigen::Index col, int shift, Scalar coeff) {
    MultiIndex t = k;
    t[axis] += shift;
    if (coeff != Scalar(0) && out.contains(t)) trip.emplace_back(out.index(t), col, coeff);
  };
  using std::sqrt;
  for (Eigen::Index j = 0; j < in.size(); ++j) {
    const MultiIndex& k = in[j];
    const Scalar down = sqrt(Scalar(k[axis]));
    const Scalar up = sqrt(Scalar(k[axis] + 1));
    switch (kind) {
      case Ladder::lower:
        emit(k, j, -1, down);
        break;
      case Ladder::raise_neg:
        emit(k, j, +1, -up);
        break;
      case Ladder::mult_v:
        emit(k, j, +1, up);
        emit(k, j, -1, down);
        break;
      case Ladder::d_v:
        emit(k, j, +1, -up / 2);
        emit(k, j, -1, down / 2);
        break;
    }
  }
  Eigen::SparseMatrix<Scalar> m(out.size(), in.size());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

/// Squared coefficient each input mode loses when `kind` is truncated at the
/// input order (only k_a = order-1 modes push mass out of the basis).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> ladder_leak_weights(Ladder kind, int axis, int dim, int order) {
  const ModeSpace modes(dim, order);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(modes.size());
  for (Eigen::Index j = 0; j < modes.size(); ++j) {
    if (modes[j][axis] != order - 1) continue;
    const Scalar up2 = Scalar(order);
    w(j) = (kind == Ladder::lower) ? Scalar(0) : (kind == Ladder::d_v ? up2 / 4 : up2);
  }
  return w;
}

/// Gram matrix of the nu-inner product int (grad g . grad h + (1 + |v|^2) g h) dv,
/// assembled exactly from derivative and multiplication ladders into the
/// order+1 basis (nothing truncated).
template <typename Scalar>
Eigen::SparseMatrix<Scalar> nu_gram_matrix(int dim, int order) {
  const Eigen::Index n = BasisSpec::ipow(order, dim);
  Eigen::SparseMatrix<Scalar> g(n, n);
  g.setIdentity();
  for (int a = 0; a < dim; ++a) {
    // Both operators map order -> order+1 so nothing is dropped.
    const Eigen::SparseMatrix<Scalar> d = ladder_matrix<Scalar>(Ladder::d_v, a, dim, order, order + 1);
    const Eigen::SparseMatrix<Scalar> v = ladder_matrix<Scalar>(Ladder::mult_v, a, dim, order, order + 1);
    g += Eigen::SparseMatrix<Scalar>(d.transpose() * d);
    g += Eigen::SparseMatrix<Scalar>(v.transpose() * v);
  }
  g.makeCompressed();
  return g;
}

/// Normalized Hermite functions h_k(x) = He_k(x)/sqrt(k!) for k < count.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> normalized_hermite(Scalar x, int count) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> h(count);
  using std::sqrt;
  if (count > 0) h(0) = Scalar(1);
  if (count > 1) h(1) = x;
  for (int k = 1; k + 1 < count; ++k) h(k + 1) = (x * h(k) - sqrt(Scalar(k)) * h(k - 1)) / sqrt(Scalar(k + 1));
  return h;
}

/// Gauss-Hermite rule for the standard normal weight: nodes are the roots of
/// He_q, weights sum to one. Golub-Welsch eigenvalues polished by Newton steps,
/// weights from the Christoffel function.
template <typename Scalar>
std::pair<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>, Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> gauss_hermite(int q) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using std::abs;
  using std::sqrt;
  Matrix jacobi = Matrix::Zero(q, q);
  for (int k = 1; k < q; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = sqrt(Scalar(k));
  Eigen::SelfAdjointEigenSolver<Matrix> eig(jacobi, Eigen::EigenvaluesOnly);
  Vector x = eig.eigenvalues();
  Vector w(q);
  for (int i = 0; i < q; ++i) {
    for (int it = 0; it < 4; ++it) {
      const Vector h = normalized_hermite<Scalar>(x(i), q + 1);
      // h_q' = sqrt(q) h_{q-1}
      const Scalar step = h(q) / (sqrt(Scalar(q)) * h(q - 1));
      x(i) -= step;
      if (abs(step) <= Eigen::NumTraits<Scalar>::epsilon() * (1 + abs(x(i)))) break;
    }
  }
  for (int i = 0; i < q / 2; ++i) {
    const Scalar s = (x(q - 1 - i) - x(i)) / 2;
    x(i) = -s;
    x(q - 1 - i) = s;
  }
  if (q % 2 == 1) x(q / 2) = Scalar(0);
  for (int i = 0; i < q; ++i) w(i) = Scalar(1) / normalized_hermite<Scalar>(x(i), q).squaredNorm();
  return {x, w};
}

/// Tensor Gauss-Hermite table with the basis functions evaluated at every node.
template <typename Scalar>
struct QuadratureTable {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Matrix nodes;          ///< Q^D x D
  Vector weights;        ///< sum_q weights_q psi_k psi_j = delta_kj
  Vector gauss_weights;  ///< weights against M(v) dv, summing to one
  Vector maxwellian;     ///< M at each node
  Matrix psi;            ///< Q^D x N^D table of psi_k(node)
  Matrix hermite;        ///< Q^D x N^D table of psi_k / sqrt(M)

  /// max_{k,j} |sum_q w_q psi_k psi_j - delta_kj|
  Scalar orthonormality_residual() const {
    const Matrix gram = psi.transpose() * weights.asDiagonal() * psi;
    return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  }
};

template <typename Scalar>
QuadratureTable<Scalar> build_quadrature(const BasisSpec& spec) {
  using std::exp;
  using std::sqrt;
  const auto [x1, w1] = gauss_hermite<Scalar>(spec.quad_size);
  const ModeSpace nodes_space(spec.dim, spec.quad_size);
  const ModeSpace modes(spec.dim, spec.order);
  const Scalar inv_sqrt_2pi = Scalar(1) / sqrt(Scalar(2) * std::numbers::pi_v<Scalar>);

  // 1D tables of h_k(x_q).
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> h1(spec.quad_size, spec.order);
  for (int q = 0; q < spec.quad_size; ++q) h1.row(q) = normalized_hermite<Scalar>(x1(q), spec.order).transpose();

  QuadratureTable<Scalar> t;
  const Eigen::Index nq = nodes_space.size();
  t.nodes.resize(nq, spec.dim);
  t.weights.resize(nq);
  t.gauss_weights.resize(nq);
  t.maxwellian.resize(nq);
  t.psi.resize(nq, modes.size());
  t.hermite.resize(nq, modes.size());
  for (Eigen::Index q = 0; q < nq; ++q) {
    const MultiIndex& qi = nodes_space[q];
    Scalar gw = 1, m = 1;
    for (int a = 0; a < spec.dim; ++a) {
      const Scalar v = x1(qi[a]);
      t.nodes(q, a) = v;
      gw *= w1(qi[a]);
      m *= inv_sqrt_2pi * exp(-v * v / 2);
    }
    t.gauss_weights(q) = gw;
    t.maxwellian(q) = m;
    t.weights(q) = gw / m;
    const Scalar sqrt_m = sqrt(m);
    for (Eigen::Index j = 0; j < modes.size(); ++j) {
      Scalar h = 1;
      for (int a = 0; a < spec.dim; ++a) h *= h1(qi[a], modes[j][a]);
      t.hermite(q, j) = h;
      t.psi(q, j) = h * sqrt_m;
    }
  }
  return t;
}

/// Precomputed velocity-space operators for one BasisSpec.
template <typename Scalar>
class VelocityBasis {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using SparseMatrix = Eigen::SparseMatrix<Scalar>;

  explicit VelocityBasis(const BasisSpec& spec) : spec_(spec) {
    spec.validate();
    modes_ = ModeSpace(spec.dim, spec.order);
    abs_k_.resize(modes_.size());
    for (Eigen::Index j = 0; j < modes_.size(); ++j) abs_k_(j) = Scalar(total_order(modes_[j]));
    for (std::size_t k = 0; k < kAllLadders.size(); ++k) {
      for (int a = 0; a < spec.dim; ++a) {
        ladders_[k][a] = ladder_matrix<Scalar>(kAllLadders[k], a, spec.dim, spec.order, spec.order);
        leaks_[k][a] = ladder_leak_weights<Scalar>(kAllLadders[k], a, spec.dim, spec.order);
      }
    }
    nu_gram_ = nu_gram_matrix<Scalar>(spec.dim, spec.order);
    quad_ = build_quadrature<Scalar>(spec);
  }

  const BasisSpec& spec() const { return spec_; }
  int dim() const { return spec_.dim; }
  int order() const { return spec_.order; }
  Eigen::Index size() const { return modes_.size(); }
  const ModeSpace& modes() const { return modes_; }
  Eigen::Index index(const MultiIndex& k) const { return modes_.index(k); }
  /// Flat index of e_a.
  Eigen::Index unit(int axis) const { return modes_.index(unit_index(axis)); }
  /// Flat index of e_i + e_j.
  Eigen::Index pair(int i, int j) const { return modes_.index(unit_index(i) + unit_index(j)); }

  /// |k| per mode; the spectrum of -L.
  const Vector& abs_k() const { return abs_k_; }

  const SparseMatrix& ladder(Ladder kind, int axis) const {
    check_axis(axis);
    return ladders_[static_cast<std::size_t>(kind)][axis];
  }
  const Vector& leak_weights(Ladder kind, int axis) const {
    check_axis(axis);
    return leaks_[static_cast<std::size_t>(kind)][axis];
  }
  const SparseMatrix& nu_gram() const { return nu_gram_; }
  const QuadratureTable<Scalar>& quadrature() const { return quad_; }

  void check_axis(int axis) const {
    if (axis < 0 || axis >= spec_.dim)
      throw DimensionError("velocity axis " + std::to_string(axis) + " out of range for dim " +
                           std::to_string(spec_.dim));
  }
  void check_size(Eigen::Index n) const {
    if (n != size())
      throw ShapeError("coefficient vector has " + std::to_string(n) + " entries, basis expects " +
                       std::to_string(size()));
  }

 private:
  BasisSpec spec_;
  ModeSpace modes_;
  Vector abs_k_;
  std::array<std::array<SparseMatrix, kMaxDim>, 4> ladders_;
  std::array<std::array<Vector, kMaxDim>, 4> leaks_;
  SparseMatrix nu_gram_;
  QuadratureTable<Scalar> quad_;
};

template <typename Scalar>
VelocityBasis<Scalar> build_basis(const BasisSpec& spec) {
  return VelocityBasis<Scalar>(spec);
}

/// L g: diagonal with eigenvalue -|k|.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> apply_L(const VelocityBasis<Scalar>& basis,
                                                 const Eigen::MatrixBase<Derived>& g) {
  basis.check_size(g.size());
  return -(basis.abs_k().array() * g.array()).matrix();
}

template <typename Scalar>
struct LadderOutput {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> coeffs;
  Scalar leakage = 0;  ///< squared coefficient mass pushed past order-1 and dropped
};

template <typename Scalar, typename Derived>
LadderOutput<Scalar> apply_ladder(const VelocityBasis<Scalar>& basis, const Eigen::MatrixBase<Derived>& g,
                                  Ladder kind, int axis) {
  basis.check_size(g.size());
  LadderOutput<Scalar> out;
  out.coeffs = basis.ladder(kind, axis) * g;
  out.leakage = (basis.leak_weights(kind, axis).array() * g.array().square()).sum();
  return out;
}

template <typename Scalar>
struct Moments {
  Scalar a = 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b;
};

/// a = int sqrt(M) g dv, b = int v sqrt(M) g dv.
template <typename Scalar, typename Derived>
Moments<Scalar> moments(const VelocityBasis<Scalar>& basis, const Eigen::MatrixBase<Derived>& g) {
  basis.check_size(g.size());
  Moments<Scalar> m;
  m.a = g(0);
  m.b.resize(basis.dim());
  for (int a = 0; a < basis.dim(); ++a) m.b(a) = g(basis.unit(a));
  return m;
}

/// Gamma_{ij}(g) = <(v_i v_j - c_ij) sqrt(M), g>, axes zero-based.
template <typename Scalar, typename Derived>
Scalar gamma(const VelocityBasis<Scalar>& basis, const Eigen::MatrixBase<Derived>& g, int i, int j,
             GammaConvention conv = GammaConvention::literal) {
  basis.check_size(g.size());
  basis.check_axis(i);
  basis.check_axis(j);
  using std::sqrt;
  if (i == j) return sqrt(Scalar(2)) * g(basis.index(unit_index(i) + unit_index(i)));
  const Scalar cross = g(basis.pair(i, j));
  return conv == GammaConvention::literal ? cross - g(0) : cross;
}

template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> project(const VelocityBasis<Scalar>& basis,
                                                 const Eigen::MatrixBase<Derived>& g, Projection which) {
  basis.check_size(g.size());
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vector macro = Vector::Zero(g.size());
  if (which != Projection::P1) macro(0) = g(0);
  if (which != Projection::P0)
    for (int a = 0; a < basis.dim(); ++a) macro(basis.unit(a)) = g(basis.unit(a));
  if (which == Projection::IminusP) return g - macro;
  return macro;
}

/// nu-inner product from exact (untruncated) derivative and multiplication ladders.
template <typename Scalar, typename DerivedG, typename DerivedH>
Scalar nu_inner(const VelocityBasis<Scalar>& basis, const Eigen::MatrixBase<DerivedG>& g,
                const Eigen::MatrixBase<DerivedH>& h) {
  if (g.size() != h.size()) throw ShapeError("nu_inner: coefficient vectors of different bases");
  basis.check_size(g.size());
  Scalar s = g.dot(h);
  for (int a = 0; a < basis.dim(); ++a) {
    const auto d = ladder_matrix<Scalar>(Ladder::d_v, a, basis.dim(), basis.order(), basis.order() + 1);
    const auto v = ladder_matrix<Scalar>(Ladder::mult_v, a, basis.dim(), basis.order(), basis.order() + 1);
    s += (d * g).dot(d * h) + (v * g).dot(v * h);
  }
  return s;
}

/// f(v_q) = sum_k c_k psi_k(v_q) at every quadrature node.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> synthesize(const QuadratureTable<Scalar>& quad,
                                                    const Eigen::MatrixBase<Derived>& g) {
  if (g.size() != quad.psi.cols()) throw ShapeError("synthesize: coefficient/table size mismatch");
  return quad.psi * g;
}

template <typename Scalar>
struct AnalyzeOutput {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> coeffs;
  Scalar leakage = 0;  ///< discrete mass not represented by the resolved modes
};

/// Discrete projection of node values onto the resolved modes.
template <typename Scalar, typename Derived>
AnalyzeOutput<Scalar> analyze(const QuadratureTable<Scalar>& quad, const Eigen::MatrixBase<Derived>& values) {
  if (values.size() != quad.psi.rows()) throw ShapeError("analyze: value/table size mismatch");
  AnalyzeOutput<Scalar> out;
  out.coeffs = quad.psi.transpose() * (quad.weights.array() * values.array()).matrix();
  const Scalar total = (quad.weights.array() * values.array().square()).sum();
  using std::max;
  out.leakage = max(Scalar(0), total - out.coeffs.squaredNorm());
  return out;
}

enum class CoercivityMode { eigensolve, random };

template <typename Scalar>
struct CoercivityResult {
  Scalar lambda0 = 0;
  MultiIndex argmin_mode{0, 0, 0};  ///< dominant mode of the minimizer
  std::string argmin;               ///< human-readable description of the minimizer
};

/// Restricted Rayleigh quotient min <-Lg, g> / |g|_nu^2 over g with P0 g = 0.
/// Eigensolve mode solves the generalized symmetric eigenproblem exactly for the
/// truncated basis; random mode takes the minimum over `samples` draws.
template <typename Scalar>
CoercivityResult<Scalar> coercivity_probe(const BasisSpec& spec, CoercivityMode mode, int samples = 1000,
                                          std::uint64_t seed = 1) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  spec.validate();
  const ModeSpace modes(spec.dim, spec.order);
  const Eigen::Index n = modes.size() - 1;  // drop k = 0
  if (n < 1) throw ConfigError("coercivity_probe: no modes beyond k = 0");

  const Matrix gram_full = Matrix(nu_gram_matrix<Scalar>(spec.dim, spec.order));
  const Matrix gram = gram_full.bottomRightCorner(n, n);
  Vector dissipation(n);
  for (Eigen::Index j = 0; j < n; ++j) dissipation(j) = Scalar(total_order(modes[j + 1]));

  CoercivityResult<Scalar> res;
  Vector arg;
  if (mode == CoercivityMode::eigensolve) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(Matrix(dissipation.asDiagonal()), gram);
    res.lambda0 = ges.eigenvalues()(0);
    arg = ges.eigenvectors().col(0);
  } else {
    if (samples < 1) throw ConfigError("coercivity_probe: samples must be positive");
    Rng rng(seed);
    res.lambda0 = std::numeric_limits<Scalar>::infinity();
    Vector g(n);
    for (int s = 0; s < samples; ++s) {
      for (Eigen::Index j = 0; j < n; ++j) g(j) = Scalar(rng.normal());
      const Scalar q = g.dot(dissipation.asDiagonal() * g) / g.dot(gram * g);
      if (q < res.lambda0) {
        res.lambda0 = q;
        arg = g;
      }
    }
  }
  Eigen::Index jmax = 0;
  arg.cwiseAbs().maxCoeff(&jmax);
  res.argmin_mode = modes[jmax + 1];
  std::ostringstream os;
  os << "dominant mode k=" << to_string(res.argmin_mode, spec.dim) << " weight "
     << arg(jmax) * arg(jmax) / arg.squaredNorm();
  res.argmin = os.str();
  return res;
}

}  // namespace kfvp
