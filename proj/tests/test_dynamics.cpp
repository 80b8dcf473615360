#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kfvp/integrate.hpp"
#include "kfvp/presets.hpp"

using namespace kfvp;

namespace {

constexpr double kPi = std::numbers::pi;

const Discretization& small_disc() {
  static const Discretization d(Grid{1, 32, 2 * kPi}, BasisSpec{1, 8, 10});
  return d;
}

SimState small_perturbation(const Discretization& disc, double eps, std::uint64_t seed = 7) {
  return preset_initial("decay-torus", eps, seed, disc, ModelParams{});
}

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("equilibrium is a fixed point of the tendencies and both steppers") {
    const auto& disc = small_disc();
    const ModelParams params;
    const SimState z = disc.zero_state();
    const Tendencies t = rhs_full(disc, z, params);
    CHECK(max_abs(t.df) == 0.0);
    CHECK(max_abs(t.drho) == 0.0);
    CHECK(max_abs(t.du) == 0.0);

    const auto [s1, st1] = step_imex(disc, z, 1e-2, params);
    CHECK(max_abs(s1.f) == 0.0);
    CHECK(max_abs(s1.rho) == 0.0);
    CHECK(max_abs(s1.u) == 0.0);
    CHECK(s1.step == 1);
    CHECK(s1.t == doctest::Approx(1e-2));

    const auto [s2, st2] = step_picard(disc, z, 1e-2, PicardOptions{}, params);
    CHECK(st2.picard_iterations == 1);
    CHECK(st2.last_residual == 0.0);
    CHECK(max_abs(s2.f) == 0.0);
  }

  TEST_CASE("constant fluid velocity drives only the first-moment source and friction") {
    const auto& disc = small_disc();
    SimState s = disc.zero_state();
    const double u0 = 0.3;
    s.u.setConstant(u0);
    const Tendencies t = rhs_full(disc, s, ModelParams{});
    const Eigen::Index e1 = disc.velocity().unit(0);
    for (Eigen::Index j = 0; j < t.df.cols(); ++j) {
      const double expect = (j == e1) ? u0 : 0.0;
      CHECK(max_abs(t.df.col(j).array() - expect) <= 1e-14);
    }
    CHECK(max_abs(t.du.array() + u0) <= 1e-14);
    CHECK(max_abs(t.drho) <= 1e-14);
  }

  TEST_CASE("continuity tendency matches a finite-difference oracle") {
    const auto& disc = small_disc();
    SimState s = disc.zero_state();
    const Vec x = disc.space().coordinate(0);
    s.rho = 0.01 * x.array().sin().matrix();
    s.u.col(0) = 0.02 * (2 * x).array().cos().matrix();
    const Vec drho = rhs_full(disc, s, ModelParams{}).drho;
    // Centered differences of the flux (1 + rho) u on a fine grid, sampled at the coarse points.
    const int fine = 1 << 16;
    const double h = 2 * kPi / fine;
    const auto flux = [](double y) { return (1 + 0.01 * std::sin(y)) * 0.02 * std::cos(2 * y); };
    double err = 0;
    for (Eigen::Index p = 0; p < x.size(); ++p) {
      const double fd = -(flux(x(p) + h) - flux(x(p) - h)) / (2 * h);
      err = std::max(err, std::abs(fd - drho(p)));
    }
    CHECK(err <= 1e-9);
  }

  TEST_CASE("vacuum and nonfinite states are rejected") {
    const auto& disc = small_disc();
    SimState s = disc.zero_state();
    s.rho(5) = -1.0;
    CHECK_THROWS_AS(rhs_full(disc, s, ModelParams{}), StateError);
    try {
      step_imex(disc, s, 1e-3, ModelParams{});
      FAIL("expected StateError");
    } catch (const StateError& e) {
      CHECK(std::string(e.what()).find("grid point 5") != std::string::npos);
      CHECK(e.exit_code() == kExitDivergence);
    }
    SimState n = disc.zero_state();
    n.u(3, 0) = std::nan("");
    CHECK_THROWS_AS(step_imex(disc, n, 1e-3, ModelParams{}), DivergenceError);
    CHECK_THROWS_AS(step_imex(disc, disc.zero_state(), 0.0, ModelParams{}), ConfigError);
    SimState bad = disc.zero_state();
    bad.f.resize(bad.f.rows(), bad.f.cols() + 1);
    CHECK_THROWS_AS(rhs_full(disc, bad, ModelParams{}), ShapeError);
  }

  TEST_CASE("initial time derivative equals the full tendencies") {
    const auto& disc = small_disc();
    const SimState s = small_perturbation(disc, 1e-3);
    const Tendencies a = ft0(disc, s, ModelParams{});
    const Tendencies b = rhs_full(disc, s, ModelParams{});
    CHECK((a.df - b.df).norm() == 0.0);
    CHECK((a.drho - b.drho).norm() == 0.0);
    CHECK((a.du - b.du).norm() == 0.0);
  }

  TEST_CASE("a spatially uniform micro mode relaxes by the implicit factor") {
    const auto& disc = small_disc();
    SimState s = disc.zero_state();
    const Eigen::Index k2 = disc.velocity().index(MultiIndex{2, 0, 0});
    s.f.col(k2).setConstant(1e-3);
    const double dt = 0.05;
    const SimState next = step_imex(disc, s, dt, ModelParams{}).first;
    CHECK(max_abs(next.f.col(k2).array() - 1e-3 / (1 + 2 * dt)) <= 1e-17);
    Mat others = next.f;
    others.col(k2).setZero();
    CHECK(max_abs(others) <= 1e-18);
  }

  TEST_CASE("steps are first order against the tendencies") {
    const auto& disc = small_disc();
    const ModelParams params;
    const SimState s0 = small_perturbation(disc, 1e-3);
    const Tendencies d0 = rhs_full(disc, s0, params);
    for (Scheme scheme : {Scheme::imex1, Scheme::picard}) {
      std::vector<double> err;
      for (double h : {4e-3, 2e-3, 1e-3}) {
        const SimState s1 = step(disc, s0, h, scheme, PicardOptions{}, params).first;
        err.push_back(((s1.rho - s0.rho) / h - d0.drho).norm() + ((s1.u - s0.u) / h - d0.du).norm() +
                      ((s1.f - s0.f) / h - d0.df).norm());
      }
      CHECK(err[0] / err[1] == doctest::Approx(2.0).epsilon(0.15));
      CHECK(err[1] / err[2] == doctest::Approx(2.0).epsilon(0.15));
    }
  }

  TEST_CASE("imex conserves mass and momentum to roundoff") {
    const Discretization disc(Grid{1, 32, 2 * kPi}, BasisSpec{1, 8, 10});
    const ModelParams params;
    SimState cur = preset_initial("conservation-audit", 1e-2, 3, disc, params);
    const Conserved c0 = conserved(disc, cur);
    for (int k = 0; k < 50; ++k) cur = step_imex(disc, cur, 5e-3, params).first;
    const Conserved c = conserved(disc, cur);
    CHECK(std::abs(c.mass_f - c0.mass_f) <= 1e-15);
    CHECK(std::abs(c.mass_rho - c0.mass_rho) <= 1e-15);
    CHECK(std::abs(c.momentum(0) - c0.momentum(0)) <= 1e-15);
  }

  TEST_CASE("picard conserves mass exactly and momentum to first order") {
    const Discretization disc(Grid{1, 32, 2 * kPi}, BasisSpec{1, 8, 10});
    const ModelParams params;
    const SimState s0 = preset_initial("conservation-audit", 1e-2, 3, disc, params);
    const Conserved c0 = conserved(disc, s0);
    std::vector<double> drift;
    for (int level = 0; level < 3; ++level) {
      SimState cur = s0;
      const int steps = 25 << level;
      for (int k = 0; k < steps; ++k) cur = step_picard(disc, cur, 1e-2 / (1 << level), PicardOptions{}, params).first;
      const Conserved c = conserved(disc, cur);
      CHECK(std::abs(c.mass_f - c0.mass_f) <= 1e-15);
      CHECK(std::abs(c.mass_rho - c0.mass_rho) <= 1e-15);
      drift.push_back(std::abs(c.momentum(0) - c0.momentum(0)));
    }
    CHECK(drift[0] / drift[1] == doctest::Approx(2.0).epsilon(0.15));
    CHECK(drift[1] / drift[2] == doctest::Approx(2.0).epsilon(0.15));
  }

  TEST_CASE("picard contracts for a small perturbation") {
    const auto& disc = small_disc();
    const SimState s = small_perturbation(disc, 1e-3);
    const auto [next, st] = step_picard(disc, s, 1e-2, PicardOptions{}, ModelParams{});
    REQUIRE(st.residuals.size() >= 2);
    for (std::size_t i = 1; i < st.residuals.size(); ++i) CHECK(st.residuals[i] < st.residuals[i - 1]);
    for (double q : st.contraction_ratios) CHECK(q < 1.0);
    CHECK(st.picard_iterations <= 20);
  }

  TEST_CASE("picard reports non-convergence with the residual history") {
    const auto& disc = small_disc();
    const SimState s = small_perturbation(disc, 0.1);
    try {
      step_picard(disc, s, 10.0, PicardOptions{}, ModelParams{});
      FAIL("expected IterationError");
    } catch (const IterationError& e) {
      REQUIRE(e.residuals().size() >= 2);
      CHECK(e.exit_code() == kExitNonConvergence);
      CHECK(e.residuals()[1] > e.residuals()[0]);
    }
  }

  TEST_CASE("positivity minimum") {
    const auto& disc = small_disc();
    const auto& quad = disc.velocity().quadrature();
    CHECK(positivity_min(disc, disc.zero_state()) == doctest::Approx(quad.maxwellian.minCoeff()));
    CHECK(positivity_min(disc, disc.zero_state()) > 0.0);
    SimState s = disc.zero_state();
    s.f.col(0).setConstant(-2.0);
    // F = M - 2 sqrt(M) psi_0 = -M on every node.
    CHECK(positivity_min(disc, s) == doctest::Approx(-quad.maxwellian.maxCoeff()).epsilon(1e-14));
  }

  TEST_CASE("integrate: zero steps, equilibrium, determinism") {
    const auto& disc = small_disc();
    FunctionalContext ctx(disc, ModelParams{}, FunctionalWeights{});
    Schedule sch;
    sch.dt = 1e-2;
    sch.n_steps = 0;
    CHECK(integrate(ctx, disc.zero_state(), sch).reports.size() == 1);

    sch.n_steps = 100;
    sch.report_every = 10;
    const Trajectory eq = integrate(ctx, disc.zero_state(), sch);
    CHECK(eq.reports.size() == 11);
    for (const auto& r : eq.reports) {
      CHECK(std::abs(r.energy.E) <= 1e-12);
      CHECK(std::abs(r.conserved.mass_f) <= 1e-12);
      CHECK(r.F_min == eq.reports.front().F_min);
    }

    const SimState s = small_perturbation(disc, 1e-3);
    sch.n_steps = 30;
    const Trajectory a = integrate(ctx, s, sch);
    const Trajectory b = integrate(ctx, s, sch);
    CHECK((a.final_state.f - b.final_state.f).norm() == 0.0);
    CHECK(a.reports.back().energy.E == b.reports.back().energy.E);
    CHECK(std::isnan(a.reports.front().entropy.residual));
    CHECK(std::isfinite(a.reports.back().entropy.residual));
    CHECK(a.reports.back().entropy.rhs <= 0.0);
  }

  TEST_CASE("scheme names") {
    CHECK(parse_scheme("imex1") == Scheme::imex1);
    CHECK(parse_scheme("picard") == Scheme::picard);
    CHECK(scheme_name(Scheme::picard) == "picard");
    CHECK_THROWS_AS(parse_scheme("rk4"), ConfigError);
  }
}
