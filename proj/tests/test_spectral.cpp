#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kfvp/rng.hpp"
#include "kfvp/spectral.hpp"

using namespace kfvp;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace {

constexpr double kPi = std::numbers::pi;

// Random real field with integer wave indices |k| <= kmax (per axis) and 1D coordinates.
Vec band_limited(const SpectralSpace<double>& sp, Rng& rng, int kmax) {
  Vec out = Vec::Zero(sp.points());
  const double k0 = 2 * kPi / sp.grid().box;
  for (int k = 0; k <= kmax; ++k) {
    const double c = rng.normal(), s = rng.normal();
    out += c * (k * k0 * sp.coordinate(0)).array().cos().matrix() + s * (k * k0 * sp.coordinate(0)).array().sin().matrix();
  }
  return out;
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("grid validation") {
    CHECK_THROWS_AS(SpectralSpace<double>(Grid{1, 15, 1.0}), ConfigError);
    CHECK_THROWS_AS(SpectralSpace<double>(Grid{1, 8, 1.0}), ConfigError);
    CHECK_THROWS_AS(SpectralSpace<double>(Grid{4, 16, 1.0}), ConfigError);
    CHECK_THROWS_AS(SpectralSpace<double>(Grid{1, 16, -1.0}), ConfigError);
  }

  TEST_CASE("derivative of constants and sines") {
    for (double box : {2 * kPi, 3.0}) {
      SpectralSpace<double> sp(Grid{1, 64, box});
      CHECK(sp.derivative(Vec::Constant(64, 3.5), 0).cwiseAbs().maxCoeff() <= 1e-13);
      const double k = 2 * kPi / box;
      const Vec f = (k * sp.coordinate(0)).array().sin().matrix();
      const Vec df = sp.derivative(f, 0);
      const Vec exact = k * (k * sp.coordinate(0)).array().cos().matrix();
      CHECK((df - exact).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  TEST_CASE("second derivative against a second-difference oracle") {
    // Smooth periodic test function exp(sin x); the centered difference error is O(h^2).
    std::vector<double> errs;
    for (int n : {32, 64, 128}) {
      SpectralSpace<double> sp(Grid{1, n, 2 * kPi});
      const Vec x = sp.coordinate(0);
      const Vec f = x.array().sin().exp().matrix();
      const Vec d2 = sp.derivative(f, 0, 2);
      const double h = 2 * kPi / n;
      double err = 0;
      for (int i = 0; i < n; ++i) {
        const double fd = (f((i + 1) % n) - 2 * f(i) + f((i + n - 1) % n)) / (h * h);
        err = std::max(err, std::abs(fd - d2(i)));
      }
      errs.push_back(err);
    }
    CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.05));
    CHECK(errs[1] / errs[2] == doctest::Approx(4.0).epsilon(0.05));
  }

  TEST_CASE("derivative cap and shape errors") {
    SpectralSpace<double> sp(Grid{2, 16, 1.0}, 2);
    CHECK_THROWS_AS(sp.derivative(Vec::Zero(256), MultiIndex{2, 1, 0}), OrderError);
    CHECK_THROWS_AS(sp.derivative(Vec::Zero(256), MultiIndex{0, 0, 1}), DimensionError);
    CHECK_THROWS_AS(sp.derivative(Vec::Zero(100), 0), ShapeError);
    CHECK_THROWS_AS(sp.sobolev_norm(Vec::Zero(256), 3), OrderError);
    CHECK_THROWS_AS(sp.product(Vec::Zero(256), Vec::Zero(255)), ShapeError);
  }

  TEST_CASE("derivatives commute in 2D") {
    SpectralSpace<double> sp(Grid{2, 16, 2 * kPi});
    const Vec x = sp.coordinate(0), y = sp.coordinate(1);
    const Vec f = (x.array().sin() * (2 * y.array()).cos() + (x + y).array().cos()).matrix();
    const Vec fxy = sp.derivative(sp.derivative(f, 0), 1);
    const Vec fyx = sp.derivative(sp.derivative(f, 1), 0);
    CHECK((fxy - fyx).cwiseAbs().maxCoeff() <= 1e-12);
    const Vec direct = sp.derivative(f, MultiIndex{1, 1, 0});
    CHECK((fxy - direct).cwiseAbs().maxCoeff() <= 1e-12);
    const Vec exact = (-2 * x.array().cos() * (2 * y.array()).sin() - (x + y).array().cos()).matrix();
    CHECK((direct - exact).cwiseAbs().maxCoeff() <= 1e-12);
  }

  TEST_CASE("dealiased products") {
    SpectralSpace<double> sp(Grid{1, 64, 2 * kPi});
    Rng rng(1);
    const Vec f = sp.dealias(band_limited(sp, rng, 30));
    CHECK((sp.product(Vec::Ones(64), f) - f).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((sp.dealias(f) - f).cwiseAbs().maxCoeff() <= 1e-12);

    const Vec x = sp.coordinate(0);
    const Vec s = (5 * x).array().sin().matrix();
    const Vec prod = sp.product(s, s);
    const Vec exact = (0.5 - 0.5 * (10 * x).array().cos()).matrix();
    CHECK((prod - exact).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(sp.dealias_cutoff() == 21);
  }

  TEST_CASE("dealiased product matches a fine-grid oracle") {
    SpectralSpace<double> coarse(Grid{1, 64, 2 * kPi});
    SpectralSpace<double> fine(Grid{1, 128, 2 * kPi});
    Rng rng(2);
    // Coefficients drawn once, evaluated on both grids.
    const int kmax = coarse.dealias_cutoff();
    std::vector<std::array<double, 4>> coef;
    for (int k = 0; k <= kmax; ++k) coef.push_back({rng.normal(), rng.normal(), rng.normal(), rng.normal()});
    const auto eval = [&](const SpectralSpace<double>& sp, int which) {
      Vec out = Vec::Zero(sp.points());
      for (int k = 0; k <= kmax; ++k)
        out += coef[k][2 * which] * (k * sp.coordinate(0)).array().cos().matrix() +
               coef[k][2 * which + 1] * (k * sp.coordinate(0)).array().sin().matrix();
      return out;
    };
    const Vec p_coarse = coarse.product(eval(coarse, 0), eval(coarse, 1));
    // Fine grid: the product has wave indices <= 2 kmax < 64 and is resolved exactly.
    const Vec full = eval(fine, 0).cwiseProduct(eval(fine, 1));
    Eigen::VectorXcd spec = fine.forward(full);
    for (Eigen::Index j = 0; j < spec.size(); ++j)
      if (std::abs(fine.wave_index(j, 0)) > kmax) spec(j) = 0;
    const Vec truncated = fine.inverse(spec);
    double err = 0;
    for (int i = 0; i < 64; ++i) err = std::max(err, std::abs(truncated(2 * i) - p_coarse(i)));
    CHECK(err <= 1e-12);
  }

  TEST_CASE("norms and integrals") {
    SpectralSpace<double> sp(Grid{1, 64, 2 * kPi});
    const Vec x = sp.coordinate(0);
    CHECK(sp.sobolev_norm(Vec::Zero(64), 2) == 0.0);
    const Vec s = x.array().sin().matrix();
    CHECK(sp.sobolev_norm(s, 1) == doctest::Approx(2 * std::sqrt(kPi)).epsilon(1e-13));
    CHECK(sp.sobolev_norm_sq(s, 3) == doctest::Approx(4 * kPi).epsilon(1e-13));
    CHECK(std::abs(sp.integral(x.array().cos().matrix())) <= 1e-12);
    CHECK(sp.integral(Vec::Ones(64)) == doctest::Approx(2 * kPi));
    // Trapezoidal oracle of ||sin||^2 + ||cos||^2.
    double q = 0;
    for (int i = 0; i < 64; ++i) q += (std::pow(std::sin(x(i)), 2) + std::pow(std::cos(x(i)), 2)) * (2 * kPi / 64);
    CHECK(q == doctest::Approx(2 * kPi));
  }

  TEST_CASE("Parseval and real round trip") {
    for (int dim : {1, 2, 3}) {
      SpectralSpace<double> sp(Grid{dim, 16, 1.7});
      Rng rng(10 + dim);
      Mat f(sp.points(), 2);
      for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = rng.normal();
      const Eigen::MatrixXcd hat = sp.forward(f);
      CHECK(sp.l2_sq(f) == doctest::Approx(sp.spectral_scale() * hat.squaredNorm()).epsilon(1e-12));
      CHECK((sp.inverse(hat) - f).cwiseAbs().maxCoeff() <= 1e-12);
      const Mat d = sp.dealias(f);
      CHECK((sp.dealias(d) - d).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  TEST_CASE("odd derivatives remove the Nyquist mode") {
    SpectralSpace<double> sp(Grid{1, 16, 2 * kPi});
    Vec alt(16);
    for (int i = 0; i < 16; ++i) alt(i) = (i % 2 == 0) ? 1.0 : -1.0;
    CHECK(sp.derivative(alt, 0).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(sp.derivative(alt, 0, 2).cwiseAbs().maxCoeff() == doctest::Approx(64.0));
  }
}
