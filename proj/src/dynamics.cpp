#include "kfvp/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace kfvp {

namespace {

using Complex = std::complex<double>;

std::string point_name(const Discretization& disc, Eigen::Index p) {
  std::ostringstream os;
  os << "grid point " << p << " (x = ";
  for (int a = 0; a < disc.dim(); ++a) os << (a ? ", " : "") << disc.space().coordinate(a)(p);
  os << ")";
  return os.str();
}

// Finite check that names the first offending entry.
void check_finite(const SimState& s, const char* where) {
  const auto bad = [&](const auto& m, const char* name) {
    if (!m.allFinite()) {
      std::ostringstream os;
      os << "nonfinite " << name << " " << where << " at step " << s.step << " (t = " << s.t << ")";
      throw DivergenceError(os.str());
    }
  };
  bad(s.f, "kinetic coefficients");
  bad(s.rho, "density");
  bad(s.u, "velocity");
}

// Squared mass the exact operators would push into the first unresolved Hermite mode.
double raise_leakage(const Discretization& disc, const Mat& f, const Vec& coeff2, int axis) {
  const Vec& w = disc.velocity().leak_weights(Ladder::raise_neg, axis);
  double s = 0.0;
  for (Eigen::Index j = 0; j < f.cols(); ++j)
    if (w(j) != 0.0) s += w(j) * coeff2.dot(f.col(j).cwiseAbs2());
  return s * disc.space().cell();
}

double transport_leakage(const Discretization& disc, const CMat& fhat, double dt) {
  const auto& vel = disc.velocity();
  double s = 0.0;
  for (int a = 0; a < disc.dim(); ++a) {
    const Vec& w = vel.leak_weights(Ladder::mult_v, a);
    const Vec xi2 = disc.xi_odd(a).cwiseAbs2();
    for (Eigen::Index j = 0; j < fhat.cols(); ++j)
      if (w(j) != 0.0) s += w(j) * xi2.dot(fhat.col(j).cwiseAbs2());
  }
  return dt * dt * s * disc.space().spectral_scale();
}

// Local tendency without transport or the diagonal relaxation:
// (1 + rho) [ -u . raise_neg f + u . v sqrt(M) ], before dealiasing.
Mat coupling_source(const Discretization& disc, const Mat& f, const Vec& n1, const Mat& u) {
  const auto& vel = disc.velocity();
  Mat x = Mat::Zero(f.rows(), f.cols());
  for (int a = 0; a < disc.dim(); ++a) {
    const Vec ca = n1.cwiseProduct(u.col(a));
    x.noalias() -= ca.asDiagonal() * disc.apply_velocity(f, vel.ladder(Ladder::raise_neg, a));
    x.col(vel.unit(a)) += ca;
  }
  return x;
}

Mat streaming(const Discretization& disc, const Mat& f) {
  Mat out = Mat::Zero(f.rows(), f.cols());
  for (int a = 0; a < disc.dim(); ++a)
    out += disc.apply_velocity(disc.dx(f, a), disc.velocity().ladder(Ladder::mult_v, a));
  return out;
}

Vec divergence(const Discretization& disc, const Mat& v) {
  Vec d = Vec::Zero(v.rows());
  for (int a = 0; a < disc.dim(); ++a) d += disc.dx(v.col(a), a);
  return d;
}

void check_vacuum(const Discretization& disc, const Vec& rho, const ModelParams& params, double t,
                  std::uint64_t step) {
  Eigen::Index p = 0;
  const double m = (1.0 + rho.array()).minCoeff(&p);
  if (!(m >= params.vacuum_floor)) {
    std::ostringstream os;
    os << "vacuum breach: 1 + rho = " << m << " at " << point_name(disc, p) << ", step " << step << " (t = " << t
       << ")";
    throw StateError(os.str());
  }
}

double cfl_number(const Discretization& disc, double dt) {
  double xi = 0.0;
  for (int a = 0; a < disc.dim(); ++a) xi = std::max(xi, disc.xi_odd(a).cwiseAbs().maxCoeff());
  return dt * xi * disc.max_speed() * disc.dim();
}

// Implicit diagonal relaxation (1 + dt (1 + rho) |k|)^{-1} applied at every point.
Mat relax(const Discretization& disc, const Mat& rhs, const Vec& n1, double dt) {
  const Vec& k = disc.velocity().abs_k();
  Mat den = (dt * n1) * k.transpose();
  den.array() += 1.0;
  return rhs.cwiseQuotient(den);
}

}  // namespace

void check_state(const Discretization& disc, const SimState& s, const ModelParams& params) {
  disc.check_shape(s);
  check_finite(s, "in state");
  check_vacuum(disc, s.rho, params, s.t, s.step);
}

Tendencies rhs_full(const Discretization& disc, const SimState& s, const ModelParams& params) {
  check_state(disc, s, params);
  const auto& vel = disc.velocity();
  const Vec n1 = (1.0 + s.rho.array()).matrix();

  Tendencies t;
  Mat local = apply_L(vel, Vec::Ones(vel.size())).transpose().replicate(s.f.rows(), 1).cwiseProduct(s.f);
  local += coupling_source(disc, s.f, Vec::Ones(n1.size()), s.u);
  t.df = -streaming(disc, s.f) + disc.dealias(n1.asDiagonal() * local);

  Vec mixed = Vec::Zero(s.rho.size());
  for (int a = 0; a < disc.dim(); ++a) {
    mixed += s.u.col(a).cwiseProduct(disc.dx(s.rho, a));
  }
  t.drho = -disc.dealias(mixed) - disc.dealias(n1.cwiseProduct(divergence(disc, s.u)));

  const Vec a_mom = s.f.col(0);
  Vec pgrad_coeff(n1.size());
  for (Eigen::Index p = 0; p < n1.size(); ++p) pgrad_coeff(p) = params.pressure_slope(n1(p)) / n1(p);
  t.du.resize(s.u.rows(), s.u.cols());
  for (int a = 0; a < disc.dim(); ++a) {
    Vec adv = Vec::Zero(n1.size());
    for (int c = 0; c < disc.dim(); ++c) adv += s.u.col(c).cwiseProduct(disc.dx(s.u.col(a), c));
    const Vec lap = disc.laplace(s.u.col(a));
    Vec du = -disc.dealias(adv) - disc.dealias(pgrad_coeff.cwiseProduct(disc.dx(s.rho, a))) +
             disc.dealias(lap.cwiseQuotient(n1)) -
             disc.dealias(s.u.col(a).cwiseProduct((1.0 + a_mom.array()).matrix())) + s.f.col(vel.unit(a));
    t.du.col(a) = du;
  }
  return t;
}

std::pair<SimState, StepStats> step_imex(const Discretization& disc, const SimState& s, double dt,
                                         const ModelParams& params) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  check_state(disc, s, params);
  const auto& vel = disc.velocity();
  const auto& space = disc.space();
  const int dim = disc.dim();
  const Vec n1 = (1.0 + s.rho.array()).matrix();

  StepStats st;
  st.dt_used = dt;
  st.cfl = cfl_number(disc, dt);

  // Local relaxation and coupling.
  const Mat x = disc.dealias(coupling_source(disc, s.f, n1, s.u));
  const Mat fstar = relax(disc, s.f + dt * x, n1, dt);
  const Mat dloc = disc.dealias(fstar - s.f);
  for (int a = 0; a < dim; ++a) {
    const Vec c2 = (dt * n1.cwiseProduct(s.u.col(a))).cwiseAbs2();
    st.truncation_leakage += raise_leakage(disc, s.f, c2, a);
  }

  // Crank-Nicolson transport with the local increment as source.
  const Mat& q = disc.transport_vectors();
  const Mat& lam = disc.transport_velocities();
  const CMat fhat = space.forward(s.f);
  st.truncation_leakage += transport_leakage(disc, fhat, dt);
  CMat g = fhat * q;
  const CMat gl = space.forward(dloc) * q;
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index p = 0; p < g.rows(); ++p) {
      double theta = 0.0;
      for (int a = 0; a < dim; ++a) theta += disc.xi_odd(a)(p) * lam(j, a);
      theta *= dt;
      const Complex half(1.0, 0.5 * theta);
      g(p, j) = (Complex(1.0, -0.5 * theta) * g(p, j) + gl(p, j)) / half;
    }
  }
  SimState out;
  out.f = space.inverse(CMat(g * q.transpose()));

  // Fluid in conservative variables; the exchange force is the exact negative
  // of the particle momentum change so total momentum is preserved.
  Mat mom(s.u.rows(), dim);
  for (int a = 0; a < dim; ++a) mom.col(a) = n1.cwiseProduct(s.u.col(a));
  const Mat mflux = disc.dealias(mom);
  out.rho = s.rho - dt * divergence(disc, mflux);
  check_vacuum(disc, out.rho, params, s.t + dt, s.step + 1);
  const Vec n1_new = (1.0 + out.rho.array()).matrix();
  const double nbar_old = n1.mean();
  const double nbar = n1_new.mean();

  Vec pres(n1.size());
  const double p_ref = params.pressure(1.0);
  for (Eigen::Index p = 0; p < n1.size(); ++p) pres(p) = params.pressure(n1(p)) - p_ref;
  pres = disc.dealias(pres);

  Mat y(s.u.rows(), dim);
  for (int a = 0; a < dim; ++a) {
    Vec flux_div = Vec::Zero(n1.size());
    for (int c = 0; c < dim; ++c)
      flux_div += disc.dx(disc.dealias(mom.col(a).cwiseProduct(s.u.col(c))), c);
    const Vec exchange = -dloc.col(vel.unit(a)) / dt;
    const Vec fluct = s.u.col(a) - mom.col(a) / nbar_old;
    y.col(a) = mom.col(a) + dt * (-flux_div - disc.dx(pres, a) + exchange + disc.laplace(fluct));
  }
  CMat yhat = space.forward(y);
  const Vec lap = disc.laplace_symbol();
  for (Eigen::Index p = 0; p < yhat.rows(); ++p) yhat.row(p) *= nbar / (nbar - dt * lap(p));
  const Mat mom_new = space.inverse(yhat);
  out.u.resize(s.u.rows(), dim);
  for (int a = 0; a < dim; ++a) out.u.col(a) = mom_new.col(a).cwiseQuotient(n1_new);

  out.t = s.t + dt;
  out.step = s.step + 1;
  check_finite(out, "after IMEX step");
  return {std::move(out), st};
}

double state_norm(const Discretization& disc, const Mat& f, const Vec& rho, const Mat& u, int order) {
  const auto& space = disc.space();
  const int s = std::min(order, space.derivative_cap());
  return std::sqrt(space.sobolev_norm_sq(f, s) + space.sobolev_norm_sq(rho, s) + space.sobolev_norm_sq(u, s));
}

std::pair<SimState, StepStats> step_picard(const Discretization& disc, const SimState& s, double dt,
                                           const PicardOptions& opts, const ModelParams& params) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (!(opts.tol > 0.0)) throw ConfigError("picard: tol must be positive");
  if (opts.max_iter < 2) throw ConfigError("picard: max_iter must be >= 2");
  check_state(disc, s, params);
  const auto& vel = disc.velocity();
  const auto& space = disc.space();
  const int dim = disc.dim();

  StepStats st;
  st.dt_used = dt;
  st.cfl = cfl_number(disc, dt);

  Mat f = s.f;
  Vec rho = s.rho;
  Mat u = s.u;
  const Vec lap = disc.laplace_symbol();

  for (int it = 1; it <= opts.max_iter; ++it) {
    const Vec n1 = (1.0 + rho.array()).matrix();
    const double nbar = n1.mean();
    double leak = 0.0;

    // Kinetic update: relaxation implicit with frozen density, everything else lagged.
    const Mat src = disc.dealias(coupling_source(disc, f, n1, u));
    const Mat f_new = disc.dealias(relax(disc, s.f + dt * (src - streaming(disc, f)), n1, dt));
    for (int a = 0; a < dim; ++a) leak += raise_leakage(disc, f, (dt * n1.cwiseProduct(u.col(a))).cwiseAbs2(), a);
    leak += transport_leakage(disc, space.forward(f), dt);

    // Momentum equation with mean-coefficient implicit viscosity.
    Vec pcoef(n1.size());
    for (Eigen::Index p = 0; p < n1.size(); ++p) pcoef(p) = params.pressure_slope(n1(p)) / n1(p);
    const Vec am = f.col(0);
    Mat rhs(u.rows(), dim);
    for (int a = 0; a < dim; ++a) {
      Vec adv = Vec::Zero(n1.size());
      for (int c = 0; c < dim; ++c) adv += u.col(c).cwiseProduct(disc.dx(u.col(a), c));
      const Vec lap_u = disc.laplace(u.col(a));
      rhs.col(a) = -disc.dealias(adv) - disc.dealias(pcoef.cwiseProduct(disc.dx(rho, a))) +
                   disc.dealias(lap_u.cwiseProduct((1.0 / n1.array() - 1.0 / nbar).matrix())) -
                   disc.dealias(u.col(a).cwiseProduct((1.0 + am.array()).matrix())) + f.col(vel.unit(a));
    }
    CMat uhat = space.forward(Mat(s.u + dt * rhs));
    for (Eigen::Index p = 0; p < uhat.rows(); ++p) uhat.row(p) /= 1.0 - dt * lap(p) / nbar;
    const Mat u_new = space.inverse(uhat);

    // Continuity with the new velocity in the compression term.
    Vec adv = Vec::Zero(n1.size());
    for (int a = 0; a < dim; ++a) adv += u.col(a).cwiseProduct(disc.dx(rho, a));
    const Vec rho_new = s.rho - dt * (disc.dealias(adv) + disc.dealias(n1.cwiseProduct(divergence(disc, u_new))));

    const double res = state_norm(disc, f_new - f, rho_new - rho, u_new - u, opts.norm_order);
    const double scale = state_norm(disc, f_new, rho_new, u_new, opts.norm_order);
    f = f_new;
    rho = rho_new;
    u = u_new;
    st.truncation_leakage = leak;
    st.picard_iterations = it;
    if (!st.residuals.empty() && st.residuals.back() > 0.0) st.contraction_ratios.push_back(res / st.residuals.back());
    st.residuals.push_back(res);
    st.last_residual = res;
    if (!std::isfinite(res)) break;
    if (res <= opts.tol * scale) {
      SimState out{std::move(f), std::move(rho), std::move(u), s.t + dt, s.step + 1};
      check_finite(out, "after Picard step");
      check_vacuum(disc, out.rho, params, out.t, out.step);
      return {std::move(out), st};
    }
  }
  std::ostringstream os;
  os << "Picard iteration did not converge in " << st.picard_iterations << " iterations at step " << s.step
     << " (t = " << s.t << ", dt = " << dt << "); last residual " << st.last_residual;
  throw IterationError(os.str(), st.residuals);
}

std::pair<SimState, StepStats> step(const Discretization& disc, const SimState& s, double dt, Scheme scheme,
                                    const PicardOptions& opts, const ModelParams& params) {
  return scheme == Scheme::picard ? step_picard(disc, s, dt, opts, params) : step_imex(disc, s, dt, params);
}

double positivity_min(const Discretization& disc, const SimState& s) {
  const auto& quad = disc.velocity().quadrature();
  // F = M + sqrt(M) f = M (1 + g) with g = f / sqrt(M) at the nodes.
  Mat g = s.f * quad.hermite.transpose();
  g.array() += 1.0;
  return (g * quad.maxwellian.asDiagonal()).minCoeff();
}

Scheme parse_scheme(const std::string& name) {
  if (name == "imex1") return Scheme::imex1;
  if (name == "picard") return Scheme::picard;
  throw ConfigError("unknown scheme '" + name + "' (expected imex1 or picard)");
}

std::string scheme_name(Scheme s) { return s == Scheme::picard ? "picard" : "imex1"; }

}  // namespace kfvp
