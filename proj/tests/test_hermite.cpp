#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "kfvp/hermite.hpp"

using namespace kfvp;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace {

constexpr double kPi = std::numbers::pi;

Vec unit(Eigen::Index n, Eigen::Index i) { return Vec::Unit(n, i); }

double maxwellian_1d(double v) { return std::exp(-0.5 * v * v) / std::sqrt(2 * kPi); }

// Probabilists' Hermite polynomial by the three-term recurrence.
double he(int k, double x) {
  double p0 = 1, p1 = x;
  if (k == 0) return p0;
  for (int j = 1; j < k; ++j) {
    const double p2 = x * p1 - j * p0;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double psi_1d(int k, double v) { return he(k, v) * std::sqrt(maxwellian_1d(v)) / std::sqrt(std::tgamma(k + 1.0)); }

// Second-order finite-difference discretization of (1/sqrt M) d/dv (M d/dv (g / sqrt M))
// on a fine uniform velocity grid, projected on psi_j with the trapezoidal rule.
double fd_L_coefficient(const std::function<double(double)>& g, int j) {
  const double lo = -14, hi = 14;
  const int n = 28000;
  const double h = (hi - lo) / n;
  double acc = 0;
  for (int i = 1; i < n; ++i) {
    const double v = lo + i * h;
    const auto phi = [&](double x) { return g(x) / std::sqrt(maxwellian_1d(x)); };
    const double fp = maxwellian_1d(v + h / 2) * (phi(v + h) - phi(v)) / h;
    const double fm = maxwellian_1d(v - h / 2) * (phi(v) - phi(v - h)) / h;
    const double lg = (fp - fm) / h / std::sqrt(maxwellian_1d(v));
    acc += lg * psi_1d(j, v) * h;
  }
  return acc;
}

// <f, psi_k> by the table quadrature.
template <typename F>
double quad_project(const QuadratureTable<double>& t, Eigen::Index k, F&& f) {
  double s = 0;
  for (Eigen::Index q = 0; q < t.nodes.rows(); ++q) s += t.weights(q) * f(q) * t.psi(q, k);
  return s;
}

}  // namespace

TEST_SUITE("hermite") {
  TEST_CASE("quadrature tables are orthonormal") {
    const auto t = build_quadrature<double>(BasisSpec{1, 4, 8});
    CHECK(t.orthonormality_residual() <= 1e-12);
    const auto t2 = build_quadrature<double>(BasisSpec{2, 8, 12});
    CHECK(t2.orthonormality_residual() <= 1e-12);
    const auto t3 = build_quadrature<double>(BasisSpec{1, 32, 34});
    CHECK(t3.orthonormality_residual() <= 1e-12);
    CHECK(t3.gauss_weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("basis spec validation") {
    CHECK_THROWS_AS(BasisSpec({1, 2, 8}).validate(), ConfigError);
    CHECK_THROWS_AS(BasisSpec({4, 8, 10}).validate(), ConfigError);
    CHECK_THROWS_AS(BasisSpec({1, 8, 9}).validate(), ConfigError);
    CHECK_THROWS_AS(build_basis<double>(BasisSpec{1, 2, 8}), ConfigError);
    CHECK_NOTHROW(BasisSpec({3, 4, 6}).validate());
  }

  TEST_CASE("psi table shape and ground mode") {
    const auto t = build_quadrature<double>(BasisSpec{2, 8, 12});
    CHECK(t.psi.rows() == 144);
    CHECK(t.psi.cols() == 64);
    for (Eigen::Index q = 0; q < t.psi.rows(); ++q) {
      const double v0 = t.nodes(q, 0), v1 = t.nodes(q, 1);
      CHECK(t.psi(q, 0) == doctest::Approx(std::sqrt(maxwellian_1d(v0) * maxwellian_1d(v1))).epsilon(1e-13));
    }
    // An odd node count places a node at the origin, where psi_0 = (2 pi)^{-1/2}.
    const auto odd = build_quadrature<double>(BasisSpec{2, 8, 13});
    bool found = false;
    for (Eigen::Index q = 0; q < odd.psi.rows(); ++q) {
      if (odd.nodes.row(q).norm() == 0.0) {
        CHECK(odd.psi(q, 0) == doctest::Approx(1.0 / std::sqrt(2 * kPi)).epsilon(1e-14));
        found = true;
      }
    }
    CHECK(found);
  }

  TEST_CASE("gauss-hermite nodes against known values") {
    // Q = 3: nodes 0, +-sqrt(3); weights against M are 2/3, 1/6, 1/6.
    const auto [x, w] = gauss_hermite<double>(3);
    CHECK(x(0) == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-15));
    CHECK(x(1) == 0.0);
    CHECK(w(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(w(0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    // Moments of the standard normal: E v^{2m} = (2m-1)!!.
    const auto [x2, w2] = gauss_hermite<double>(20);
    double m8 = 0;
    for (int i = 0; i < 20; ++i) m8 += w2(i) * std::pow(x2(i), 8);
    CHECK(m8 == doctest::Approx(105.0).epsilon(1e-12));
  }

  TEST_CASE("L annihilates the ground mode and matches a finite-difference oracle") {
    const auto b = build_basis<double>(BasisSpec{1, 4, 8});
    CHECK(apply_L(b, unit(4, 0)).norm() == 0.0);

    // Frozen from the finite-difference oracle.
    const double fd2 = fd_L_coefficient([](double v) { return psi_1d(2, v); }, 2);
    CHECK(fd2 == doctest::Approx(-2.0).epsilon(1e-5));
    CHECK(apply_L(b, unit(4, 2))(2) == -2.0);

    const Vec ones = Vec::Ones(4);
    const Vec h = apply_L(b, ones);
    for (int k = 0; k < 4; ++k) {
      const double fd = fd_L_coefficient([k](double v) { return psi_1d(k, v); }, k);
      CHECK(fd == doctest::Approx(-double(k)).epsilon(1e-5));
      CHECK(h(k) == -double(k));
    }
  }

  TEST_CASE("ladder examples") {
    const auto b = build_basis<double>(BasisSpec{1, 8, 10});
    CHECK(apply_ladder(b, unit(8, 0), Ladder::lower, 0).coeffs.norm() == 0.0);

    const Vec vpsi1 = apply_ladder(b, unit(8, 1), Ladder::mult_v, 0).coeffs;
    const auto& t = b.quadrature();
    for (int j = 0; j < 4; ++j) {
      const double oracle = quad_project(t, j, [&](Eigen::Index q) { return t.nodes(q, 0) * t.psi(q, 1); });
      CHECK(vpsi1(j) == doctest::Approx(oracle).epsilon(1e-13).scale(1));
    }
    CHECK(vpsi1(2) == doctest::Approx(std::sqrt(2.0)));
    CHECK(vpsi1(0) == doctest::Approx(1.0));

    for (int k = 0; k < 7; ++k) {
      const Vec up = apply_ladder(b, unit(8, k), Ladder::raise_neg, 0).coeffs;
      const Vec back = apply_ladder(b, up, Ladder::lower, 0).coeffs;
      CHECK(back(k) == doctest::Approx(-(k + 1.0)).epsilon(1e-14));
      CHECK(apply_L(b, unit(8, k + 1))(k + 1) == doctest::Approx(back(k)).epsilon(1e-14));
    }
  }

  TEST_CASE("ladder leakage reports the dropped top mode") {
    const auto b = build_basis<double>(BasisSpec{1, 8, 10});
    const auto out = apply_ladder(b, unit(8, 7), Ladder::mult_v, 0);
    CHECK(out.leakage == doctest::Approx(8.0));
    CHECK(out.coeffs(6) == doctest::Approx(std::sqrt(7.0)));
    CHECK(apply_ladder(b, unit(8, 3), Ladder::raise_neg, 0).leakage == 0.0);
    CHECK(apply_ladder(b, unit(8, 7), Ladder::d_v, 0).leakage == doctest::Approx(2.0));
  }

  TEST_CASE("axis errors") {
    const auto b = build_basis<double>(BasisSpec{2, 4, 6});
    CHECK_THROWS_AS(apply_ladder(b, Vec::Zero(16), Ladder::lower, 2), DimensionError);
    CHECK_THROWS_AS(gamma(b, Vec::Zero(16), 0, 3), DimensionError);
    CHECK_THROWS_AS(apply_L(b, Vec::Zero(5)), ShapeError);
  }

  TEST_CASE("moments") {
    const auto b3 = build_basis<double>(BasisSpec{3, 4, 6});
    const Eigen::Index m = b3.size();
    const auto zero = moments(b3, Vec::Zero(m));
    CHECK(zero.a == 0.0);
    CHECK(zero.b.norm() == 0.0);

    const Vec g = unit(m, b3.unit(1));
    const auto mo = moments(b3, g);
    const auto& t = b3.quadrature();
    // a = int sqrt(M) g, b_i = int v_i sqrt(M) g, with sqrt(M) = psi_0.
    const double a_oracle = quad_project(t, b3.unit(1), [&](Eigen::Index q) { return t.psi(q, 0); });
    CHECK(mo.a == doctest::Approx(a_oracle).scale(1).epsilon(1e-13));
    for (int i = 0; i < 3; ++i) {
      const double oracle =
          quad_project(t, b3.unit(1), [&](Eigen::Index q) { return t.nodes(q, i) * t.psi(q, 0); });
      CHECK(mo.b(i) == doctest::Approx(oracle).scale(1).epsilon(1e-13));
    }
    CHECK(mo.b(1) == doctest::Approx(1.0));

    const auto b1 = build_basis<double>(BasisSpec{1, 8, 10});
    Vec h = Vec::Zero(8);
    h(0) = 3;
    h(1) = 2;
    h(2) = 5;
    const auto mh = moments(b1, h);
    CHECK(mh.a == 3.0);
    CHECK(mh.b(0) == 2.0);
    const auto& t1 = b1.quadrature();
    const Vec vals = synthesize(t1, h);
    double a = 0, bb = 0;
    for (Eigen::Index q = 0; q < vals.size(); ++q) {
      a += t1.weights(q) * vals(q) * t1.psi(q, 0);
      bb += t1.weights(q) * vals(q) * t1.nodes(q, 0) * t1.psi(q, 0);
    }
    CHECK(a == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(bb == doctest::Approx(2.0).epsilon(1e-13));
  }

  TEST_CASE("second-moment functional") {
    const auto b1 = build_basis<double>(BasisSpec{1, 8, 10});
    const auto& t = b1.quadrature();
    const double oracle =
        quad_project(t, 2, [&](Eigen::Index q) { return (t.nodes(q, 0) * t.nodes(q, 0) - 1) * t.psi(q, 0); });
    CHECK(gamma(b1, unit(8, 2), 0, 0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(oracle == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));

    const auto b2 = build_basis<double>(BasisSpec{2, 6, 8});
    const auto& t2 = b2.quadrature();
    const double off =
        quad_project(t2, 0, [&](Eigen::Index q) { return (t2.nodes(q, 0) * t2.nodes(q, 1) - 1) * t2.psi(q, 0); });
    CHECK(gamma(b2, unit(36, 0), 0, 1) == -1.0);
    CHECK(off == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(gamma(b2, unit(36, 0), 0, 1, GammaConvention::kronecker) == 0.0);
    CHECK(gamma(b2, unit(36, 0), 1, 1) == 0.0);

    Rng rng(3);
    Vec g(36);
    for (auto& x : g) x = rng.normal();
    const Vec micro = project(b2, g, Projection::IminusP);
    Vec shifted = g;
    shifted(0) += 7.0;
    CHECK(micro(0) == 0.0);
    CHECK(gamma(b2, project(b2, shifted, Projection::IminusP), 0, 1) == gamma(b2, micro, 0, 1));
    CHECK(gamma(b2, micro, 0, 1) == gamma(b2, micro, 0, 1, GammaConvention::kronecker));
  }

  TEST_CASE("projections") {
    const auto b = build_basis<double>(BasisSpec{1, 8, 10});
    CHECK(project(b, unit(8, 0), Projection::IminusP).norm() == 0.0);
    const Vec g = unit(8, 2) + unit(8, 1);
    CHECK(project(b, g, Projection::P) == unit(8, 1));
    CHECK(project(b, g, Projection::P0).norm() == 0.0);
    CHECK(project(b, g, Projection::P1) == unit(8, 1));
  }

  TEST_CASE("projection properties") {
    for (const BasisSpec spec : {BasisSpec{1, 16, 18}, BasisSpec{2, 6, 8}, BasisSpec{3, 4, 6}}) {
      const auto b = build_basis<double>(spec);
      Rng rng(11);
      for (int s = 0; s < 50; ++s) {
        Vec g(b.size());
        for (auto& x : g) x = rng.normal();
        const Vec p = project(b, g, Projection::P);
        const Vec q = project(b, g, Projection::IminusP);
        CHECK((p + q - g).norm() == 0.0);
        CHECK(std::abs(p.squaredNorm() + q.squaredNorm() - g.squaredNorm()) <= 1e-12 * g.squaredNorm());
        CHECK((project(b, p, Projection::P0) + project(b, p, Projection::P1) - p).norm() == 0.0);
        // Range identity: L P g = -P1 g, and L preserves the micro subspace.
        CHECK((apply_L(b, p) + project(b, g, Projection::P1)).norm() == 0.0);
        CHECK(project(b, apply_L(b, q), Projection::P).norm() == 0.0);
        CHECK(q.dot(apply_L(b, q)) <= -2.0 * q.squaredNorm() + 1e-12);
      }
    }
  }

  TEST_CASE("nu inner product") {
    const auto b = build_basis<double>(BasisSpec{1, 8, 10});
    CHECK(nu_inner(b, unit(8, 0), unit(8, 0)) == doctest::Approx(2.25).epsilon(1e-14));
    CHECK(nu_inner(b, unit(8, 0), unit(8, 1)) == 0.0);
    CHECK(nu_inner(b, Vec::Zero(8), unit(8, 3)) == 0.0);

    // Quadrature oracle: int (1 + v^2) psi_0^2 + (psi_0')^2 with psi_0' = -v psi_0 / 2.
    const auto [x, w] = gauss_hermite<double>(12);
    double oracle = 0, oracle1 = 0;
    for (int i = 0; i < 12; ++i) {
      oracle += w(i) * (1 + x(i) * x(i) + 0.25 * x(i) * x(i));
      // psi_1 = v sqrt(M): (1 + v^2) v^2 + (1 - v^2 / 2)^2
      oracle1 += w(i) * ((1 + x(i) * x(i)) * x(i) * x(i) + std::pow(1 - 0.5 * x(i) * x(i), 2));
    }
    CHECK(oracle == doctest::Approx(2.25).epsilon(1e-13));
    CHECK(nu_inner(b, unit(8, 1), unit(8, 1)) == doctest::Approx(oracle1).epsilon(1e-13));
    CHECK(oracle1 == doctest::Approx(4.75).epsilon(1e-13));

    CHECK_THROWS_AS(nu_inner(b, unit(8, 0), unit(10, 0)), ShapeError);

    const Mat gram = Mat(b.nu_gram());
    Rng rng(5);
    for (int s = 0; s < 20; ++s) {
      Vec g(8), h(8);
      for (auto& v : g) v = rng.normal();
      for (auto& v : h) v = rng.normal();
      // The stored Gram is the same form as the extended-ladder evaluation.
      CHECK(g.dot(gram * h) == doctest::Approx(nu_inner(b, g, h)).epsilon(1e-12));
      CHECK(nu_inner(b, g, h) == doctest::Approx(nu_inner(b, h, g)).epsilon(1e-14));
      CHECK(nu_inner(b, g, g) >= g.squaredNorm());
    }
  }

  TEST_CASE("synthesize and analyze") {
    const auto b = build_basis<double>(BasisSpec{1, 8, 12});
    const auto& t = b.quadrature();
    const Vec v0 = synthesize(t, unit(8, 0));
    for (Eigen::Index q = 0; q < v0.size(); ++q)
      CHECK(v0(q) == doctest::Approx(std::sqrt(maxwellian_1d(t.nodes(q, 0)))).epsilon(1e-14));

    Rng rng(9);
    Vec g(8);
    for (auto& x : g) x = rng.normal();
    const auto back = analyze(t, synthesize(t, g));
    CHECK((back.coeffs - g).cwiseAbs().maxCoeff() <= 1e-12);

    const auto top = analyze(t, synthesize(t, unit(8, 7)));
    CHECK((top.coeffs - unit(8, 7)).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK(top.leakage <= 1e-13);

    // Samples of psi_8, one past the resolved order: nothing is captured and
    // the whole discrete mass is reported as leakage.
    Vec above(t.nodes.rows());
    for (Eigen::Index q = 0; q < above.size(); ++q) above(q) = psi_1d(8, t.nodes(q, 0));
    const auto a8 = analyze(t, above);
    CHECK(a8.coeffs.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(a8.leakage == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(analyze(t, Vec::Zero(5)), ShapeError);
  }

  TEST_CASE("coercivity probe") {
    const auto r8 = coercivity_probe<double>(BasisSpec{1, 8, 10}, CoercivityMode::eigensolve);
    const auto r16 = coercivity_probe<double>(BasisSpec{1, 16, 18}, CoercivityMode::eigensolve);
    const auto r32 = coercivity_probe<double>(BasisSpec{1, 32, 34}, CoercivityMode::eigensolve);
    // Frozen from an independent dense generalized eigensolve.
    CHECK(r8.lambda0 == doctest::Approx(0.18586).epsilon(1e-4));
    CHECK(r16.lambda0 == doctest::Approx(0.1858133).epsilon(1e-6));
    CHECK(r32.lambda0 == doctest::Approx(0.1858133).epsilon(1e-6));
    CHECK(std::abs(r16.lambda0 - r32.lambda0) / r32.lambda0 <= 0.10);

    const auto d2 = coercivity_probe<double>(BasisSpec{2, 8, 10}, CoercivityMode::eigensolve);
    CHECK(d2.lambda0 == doctest::Approx(0.152150).epsilon(1e-5));

    // psi_1 alone gives the quotient 1 / |psi_1|_nu^2, an upper bound for the infimum.
    const auto b = build_basis<double>(BasisSpec{1, 8, 10});
    const double q1 = 1.0 / nu_inner(b, unit(8, 1), unit(8, 1));
    CHECK(q1 == doctest::Approx(1.0 / 4.75));
    CHECK(r8.lambda0 <= q1);
    CHECK(total_order(r8.argmin_mode) <= 2);

    const auto rnd = coercivity_probe<double>(BasisSpec{1, 8, 10}, CoercivityMode::random, 500, 4);
    CHECK(rnd.lambda0 >= r8.lambda0 - 1e-12);
    CHECK_THROWS_AS(coercivity_probe<double>(BasisSpec{1, 2, 4}, CoercivityMode::eigensolve), ConfigError);
  }
}
