#include "kfvp/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace kfvp {

namespace {

using Complex = std::complex<double>;

// Per-Fourier-mode quadratic form Re(g_hat^* G g_hat) for each row.
Vec modal_energy(const CMat& ghat, const Mat& gram) {
  const CMat h = ghat * gram.cast<Complex>();
  return (h.array() * ghat.array().conjugate()).real().rowwise().sum().matrix();
}

Vec modal_power(const CMat& hat) { return hat.cwiseAbs2().rowwise().sum(); }

// Re(p_hat^* q_hat) per mode, summed over columns.
Vec modal_cross(const CMat& p, const CMat& q) {
  return (p.array().conjugate() * q.array()).real().rowwise().sum().matrix();
}

Vec grad_weight(const Discretization& disc) {
  Vec w = Vec::Zero(disc.points());
  for (int a = 0; a < disc.dim(); ++a) w += disc.xi_odd(a).cwiseAbs2();
  return w;
}

Mat micro_part(const VelocityBasis<double>& vel, const Mat& f) {
  Mat g = f;
  g.col(0).setZero();
  for (int a = 0; a < vel.dim(); ++a) g.col(vel.unit(a)).setZero();
  return g;
}

Mat b_field(const VelocityBasis<double>& vel, const Mat& f) {
  Mat b(f.rows(), vel.dim());
  for (int a = 0; a < vel.dim(); ++a) b.col(a) = f.col(vel.unit(a));
  return b;
}

Mat streaming(const Discretization& disc, const Mat& f) {
  Mat out = Mat::Zero(f.rows(), f.cols());
  for (int a = 0; a < disc.dim(); ++a)
    out += disc.apply_velocity(disc.dx(f, a), disc.velocity().ladder(Ladder::mult_v, a));
  return out;
}

std::string node_name(const Discretization& disc, Eigen::Index p, Eigen::Index q) {
  std::ostringstream os;
  os << "grid point " << p << " (x =";
  for (int a = 0; a < disc.dim(); ++a) os << " " << disc.space().coordinate(a)(p);
  os << "), velocity node " << q << " (v =";
  for (int a = 0; a < disc.dim(); ++a) os << " " << disc.velocity().quadrature().nodes(q, a);
  os << ")";
  return os.str();
}

}  // namespace

void FunctionalWeights::validate() const {
  for (double v : {tau1, tau2, tau3, tau4, tau5})
    if (!(v > 0.0)) throw ConfigError("weights: tau1..tau5 must be positive");
  for (double v : ck)
    if (!(v > 0.0)) throw ConfigError("weights: ck entries must be positive");
  if (s_cap < 1 || s_cap > 4) throw ConfigError("weights: s_cap must be in 1..4");
}

int effective_s_cap(const FunctionalWeights& w, const Grid& grid, std::string* warning) {
  if (grid.n < 32 && w.s_cap > 3) {
    if (warning)
      *warning = "grid n = " + std::to_string(grid.n) + " < 32 cannot resolve fourth derivatives; s_cap lowered to 3";
    return 3;
  }
  return w.s_cap;
}

Mat velocity_derivative(int dim, int order, const MultiIndex& beta) {
  const Eigen::Index m = BasisSpec::ipow(order, dim);
  Mat d = Mat::Identity(m, m);
  int o = order;
  for (int a = 0; a < dim; ++a) {
    for (int r = 0; r < beta[a]; ++r) {
      d = ladder_matrix<double>(Ladder::d_v, a, dim, o, o + 1) * d;
      ++o;
    }
  }
  return d;
}

FunctionalContext::FunctionalContext(const Discretization& disc, const ModelParams& params,
                                     const FunctionalWeights& weights)
    : disc_(&disc), params_(params), weights_(weights) {
  weights.validate();
  s_cap_ = std::min(effective_s_cap(weights, disc.grid()), disc.space().derivative_cap());
  const int dim = disc.dim();
  const int order = disc.basis_spec().order;
  for (int k = 0; k <= s_cap_; ++k) {
    const Eigen::Index m = disc.modes();
    Mat l2 = Mat::Zero(m, m);
    Mat nu = Mat::Zero(m, m);
    const Mat gnu = Mat(nu_gram_matrix<double>(dim, order + k));
    for (const MultiIndex& beta : multi_indices(dim, k, k)) {
      const Mat d = velocity_derivative(dim, order, beta);
      l2.noalias() += d.transpose() * d;
      nu.noalias() += d.transpose() * gnu * d;
    }
    l2_gram_.push_back(l2);
    nu_gram_.push_back(nu);
  }
}

double mixed_sobolev_norm(const Discretization& disc, const Mat& f, int s) {
  const auto& space = disc.space();
  space.check_cap(s);
  const CMat fhat = space.forward(f);
  const int dim = disc.dim();
  const int order = disc.basis_spec().order;
  double total = 0.0;
  for (const MultiIndex& beta : multi_indices(dim, 0, s)) {
    const Mat d = velocity_derivative(dim, order, beta);
    const Vec e = modal_energy(fhat, d.transpose() * d);
    for (const MultiIndex& alpha : multi_indices(dim, 0, s - total_order(beta)))
      total += std::sqrt(std::max(0.0, space.spectral_scale() * space.derivative_weight(alpha).dot(e)));
  }
  return total;
}

double mixed_sobolev_norm_sq(const Discretization& disc, const Mat& f, int s) {
  const auto& space = disc.space();
  space.check_cap(s);
  const CMat fhat = space.forward(f);
  const int dim = disc.dim();
  const int order = disc.basis_spec().order;
  double total = 0.0;
  for (int k = 0; k <= s; ++k) {
    Mat gram = Mat::Zero(f.cols(), f.cols());
    for (const MultiIndex& beta : multi_indices(dim, k, k)) {
      const Mat d = velocity_derivative(dim, order, beta);
      gram.noalias() += d.transpose() * d;
    }
    total += space.spectral_scale() * space.sobolev_weight(s - k).dot(modal_energy(fhat, gram));
  }
  return total;
}

Vec gamma_field(const VelocityBasis<double>& vel, const Mat& g, int i, int j, GammaConvention conv) {
  vel.check_axis(i);
  vel.check_axis(j);
  if (i == j) return std::sqrt(2.0) * g.col(vel.index(unit_index(i) + unit_index(i)));
  Vec out = g.col(vel.pair(i, j));
  if (conv == GammaConvention::literal) out -= g.col(0);
  return out;
}

double energy_E0(const FunctionalContext& ctx, const SimState& s) {
  const auto& disc = ctx.disc();
  const auto& space = disc.space();
  const auto& vel = disc.velocity();
  const int dim = disc.dim();
  const int smax = std::min(3, ctx.s_cap() - 1);
  if (smax < 0) return 0.0;
  const Vec w = space.sobolev_weight(smax);
  const Mat g = micro_part(vel, s.f);
  const Mat b = b_field(vel, s.f);
  const CMat bhat = space.forward(b);
  const CMat ahat = space.forward(s.f.col(0));
  const Complex I(0.0, 1.0);

  CMat divb = CMat::Zero(disc.points(), 1);
  for (int a = 0; a < dim; ++a) divb.col(0) += (I * disc.xi_odd(a).cast<Complex>()).cwiseProduct(bhat.col(a));
  double total = -space.spectral_scale() * w.dot(modal_cross(ahat, divb));
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const Eigen::VectorXcd sym = (I * disc.xi_odd(j).cast<Complex>()).cwiseProduct(bhat.col(i)) +
                                   (I * disc.xi_odd(i).cast<Complex>()).cwiseProduct(bhat.col(j));
      const CMat gam = space.forward(gamma_field(vel, g, i, j, ctx.params().gamma_convention));
      total += space.spectral_scale() * w.dot(modal_cross(sym, gam));
    }
  }
  return total;
}

double energy_E1(const FunctionalContext& ctx, const SimState& s) {
  const auto& disc = ctx.disc();
  const auto& space = disc.space();
  const auto& params = ctx.params();
  const int sc = ctx.s_cap();
  const int dim = disc.dim();
  double e = space.sobolev_norm_sq(s.f, sc) + space.sobolev_norm_sq(s.u, sc) + space.l2_sq(s.rho);

  Vec weight2(s.rho.size());
  for (Eigen::Index p = 0; p < weight2.size(); ++p) {
    const double n = 1.0 + s.rho(p);
    if (!(n > 0.0)) throw StateError("energy: 1 + rho <= 0 in density weight");
    weight2(p) = params.pressure_slope(n) / (n * n);
  }
  const CMat rhat = space.forward(s.rho);
  for (const MultiIndex& alpha : multi_indices(dim, 1, sc)) {
    const Vec d = space.inverse(CMat(space.derivative_symbol(alpha).asDiagonal() * rhat));
    e += space.integral(weight2.cwiseProduct(d.cwiseAbs2()));
  }
  e += ctx.weights().tau1 * energy_E0(ctx, s);

  if (sc >= 1) {
    const Vec w = space.sobolev_weight(sc - 1);
    const CMat uhat = space.forward(s.u);
    const Complex I(0.0, 1.0);
    double cross = 0.0;
    for (int a = 0; a < dim; ++a) {
      const CMat grad = (I * disc.xi_odd(a).cast<Complex>()).cwiseProduct(rhat.col(0));
      cross += space.spectral_scale() * w.dot(modal_cross(uhat.col(a), grad));
    }
    e += ctx.weights().tau2 * cross;
  }
  return e;
}

double dissipation_D1(const FunctionalContext& ctx, const SimState& s) {
  const auto& disc = ctx.disc();
  const auto& space = disc.space();
  const auto& vel = disc.velocity();
  const int sc = ctx.s_cap();
  const double scale = space.spectral_scale();
  const Vec grad = grad_weight(disc);
  const Vec w_lo = space.sobolev_weight(sc - 1);
  const Vec w_hi = space.sobolev_weight(sc);

  const Mat b = b_field(vel, s.f);
  Mat macro(s.f.rows(), 2 + 2 * disc.dim());
  macro << s.f.col(0), b, s.rho, s.u;
  double d = scale * w_lo.cwiseProduct(grad).dot(modal_power(space.forward(macro)));
  d += scale * w_hi.dot(modal_power(space.forward(Mat(b - s.u))));
  d += scale * w_hi.dot(modal_energy(space.forward(micro_part(vel, s.f)), ctx.nu_gram(0)));
  d += scale * w_hi.cwiseProduct(grad).dot(modal_power(space.forward(s.u)));
  return d;
}

std::pair<double, double> energy_E2_D2(const FunctionalContext& ctx, const SimState& s) {
  const auto& disc = ctx.disc();
  const auto& space = disc.space();
  const int sc = ctx.s_cap();
  const CMat ghat = space.forward(micro_part(disc.velocity(), s.f));
  double e2 = 0.0, d2 = 0.0;
  for (int k = 1; k <= sc; ++k) {
    const Vec w = space.sobolev_weight(sc - k);
    e2 += ctx.weights().ck[k - 1] * space.spectral_scale() * w.dot(modal_energy(ghat, ctx.l2_gram(k)));
    d2 += space.spectral_scale() * w.dot(modal_energy(ghat, ctx.nu_gram(k)));
  }
  return {e2, d2};
}

EnergyTerms energy_total(const FunctionalContext& ctx, const SimState& s) {
  const auto& disc = ctx.disc();
  const auto& space = disc.space();
  const auto& w = ctx.weights();
  EnergyTerms t;
  t.E0 = energy_E0(ctx, s);
  t.E1 = energy_E1(ctx, s);
  t.D1 = dissipation_D1(ctx, s);
  std::tie(t.E2, t.D2) = energy_E2_D2(ctx, s);
  t.E = t.E1 + w.tau3 * t.E2;
  t.D = t.D1 + w.tau3 * t.D2;
  const Mat b = b_field(disc.velocity(), s.f);
  t.DT1 = t.D1 + w.tau4 * (space.l2_sq(s.f.col(0)) + space.l2_sq(s.rho)) + w.tau5 * space.l2_sq(Mat(b + s.u));
  t.DT = t.DT1 + w.tau3 * t.D2;
  return t;
}

double plain_norm(const FunctionalContext& ctx, const SimState& s) {
  const auto& disc = ctx.disc();
  const int sc = ctx.s_cap();
  return mixed_sobolev_norm_sq(disc, s.f, sc) + disc.space().sobolev_norm_sq(s.rho, sc) +
         disc.space().sobolev_norm_sq(s.u, sc);
}

Conserved conserved(const Discretization& disc, const SimState& s) {
  const auto& space = disc.space();
  Conserved c;
  c.mass_f = space.integral(s.f.col(0));
  c.mass_rho = space.integral(s.rho);
  c.momentum.resize(disc.dim());
  for (int a = 0; a < disc.dim(); ++a)
    c.momentum(a) = space.integral(Vec((1.0 + s.rho.array()) * s.u.col(a).array() +
                                       s.f.col(disc.velocity().unit(a)).array()));
  return c;
}

double ZeroMean::max_abs() const {
  double m = std::max(std::abs(a), std::abs(rho));
  if (momentum.size()) m = std::max(m, momentum.cwiseAbs().maxCoeff());
  return m;
}

ZeroMean zero_mean_check(const Discretization& disc, const SimState& s) {
  const Conserved c = conserved(disc, s);
  return {c.mass_f, c.mass_rho, c.momentum};
}

double entropy(const Discretization& disc, const SimState& s, const ModelParams& params) {
  const auto& quad = disc.velocity().quadrature();
  const auto& space = disc.space();
  const Mat g = s.f * quad.hermite.transpose();  // f / sqrt(M) at every node
  const double cd = 0.5 * disc.dim() * std::log(2.0 * std::numbers::pi);
  Vec density(s.rho.size());
  for (Eigen::Index p = 0; p < g.rows(); ++p) {
    double kin = 0.0;
    for (Eigen::Index q = 0; q < g.cols(); ++q) {
      const double one_g = 1.0 + g(p, q);
      if (!(one_g > 0.0)) throw DomainError("entropy: F <= 0 at " + node_name(disc, p, q));
      kin += quad.gauss_weights(q) * one_g * std::log1p(g(p, q));
    }
    kin -= cd * s.f(p, 0);
    const double n = 1.0 + s.rho(p);
    density(p) = n * (0.5 * s.u.row(p).squaredNorm() + params.potential(n)) + kin;
  }
  return space.integral(density);
}

double entropy_dissipation(const Discretization& disc, const SimState& s) {
  const auto& vel = disc.velocity();
  const auto& quad = vel.quadrature();
  const Mat g = s.f * quad.hermite.transpose();
  std::vector<Mat> grad;
  for (int a = 0; a < disc.dim(); ++a)
    grad.push_back(disc.apply_velocity(s.f, vel.ladder(Ladder::lower, a)) * quad.hermite.transpose());
  Vec density(s.rho.size());
  for (Eigen::Index p = 0; p < g.rows(); ++p) {
    double sum = 0.0;
    for (Eigen::Index q = 0; q < g.cols(); ++q) {
      const double one_g = 1.0 + g(p, q);
      if (!(one_g > 0.0)) throw DomainError("entropy dissipation: F <= 0 at " + node_name(disc, p, q));
      double j2 = 0.0;
      for (int a = 0; a < disc.dim(); ++a) {
        const double j = grad[a](p, q) - s.u(p, a) * one_g;
        j2 += j * j;
      }
      sum += quad.gauss_weights(q) * j2 / one_g;
    }
    density(p) = (1.0 + s.rho(p)) * sum;
  }
  return -disc.space().integral(density);
}

EntropyBalance entropy_balance(const Discretization& disc, const SimState& s, const SimState& prev, double dt,
                               const ModelParams& params) {
  if (!(dt > 0.0)) throw ConfigError("entropy_balance: dt must be positive");
  SimState mid;
  mid.f = 0.5 * (s.f + prev.f);
  mid.rho = 0.5 * (s.rho + prev.rho);
  mid.u = 0.5 * (s.u + prev.u);
  const auto& space = disc.space();
  EntropyBalance eb;
  double visc = 0.0;
  const Vec gw = grad_weight(disc);
  visc = space.spectral_scale() * gw.dot(modal_power(space.forward(mid.u)));
  eb.lhs_rate = (entropy(disc, s, params) - entropy(disc, prev, params)) / dt + visc;
  eb.rhs = entropy_dissipation(disc, mid);
  eb.residual = eb.lhs_rate - eb.rhs;
  return eb;
}

namespace {

struct MomentParts {
  Vec a;
  Mat b;
  Mat g;
};

MomentParts parts(const VelocityBasis<double>& vel, const SimState& s) {
  return {s.f.col(0), b_field(vel, s.f), micro_part(vel, s.f)};
}

MomentResiduals moment_residuals_impl(const Discretization& disc, const SimState& s0, const SimState& s1,
                                      const SimState& s2, double span, const ModelParams& params) {
  const auto& vel = disc.velocity();
  const auto& space = disc.space();
  const int dim = disc.dim();
  const auto conv = params.gamma_convention;
  const MomentParts p0 = parts(vel, s0), p1 = parts(vel, s1), p2 = parts(vel, s2);
  const Vec n1 = (1.0 + s1.rho.array()).matrix();

  MomentResiduals r;
  Vec ra = (p2.a - p0.a) / span;
  for (int a = 0; a < dim; ++a) ra += disc.dx(p1.b.col(a), a);
  r.a = space.l2(ra);

  double rb2 = 0.0;
  for (int i = 0; i < dim; ++i) {
    Vec rb = (p2.b.col(i) - p0.b.col(i)) / span + disc.dx(p1.a, i);
    for (int j = 0; j < dim; ++j) rb += disc.dx(gamma_field(vel, p1.g, i, j, conv), j);
    rb += disc.dealias(n1.cwiseProduct(p1.b.col(i))) -
          disc.dealias(Vec(n1.array() * s1.u.col(i).array() * (1.0 + p1.a.array())));
    rb2 += space.l2_sq(rb);
  }
  r.b = std::sqrt(rb2);

  // l + r + s = -v . grad_x g + (1 + rho) (L g - u . raise_neg g)
  Mat local = p1.g.cwiseProduct(apply_L(vel, Vec::Ones(vel.size())).transpose().replicate(p1.g.rows(), 1));
  for (int a = 0; a < dim; ++a)
    local -= s1.u.col(a).asDiagonal() * disc.apply_velocity(p1.g, vel.ladder(Ladder::raise_neg, a));
  const Mat lrs = -streaming(disc, p1.g) + disc.dealias(n1.asDiagonal() * local);

  double rg2 = 0.0;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      Vec rg = disc.dx(p1.b.col(i), j) + disc.dx(p1.b.col(j), i) -
               disc.dealias(Vec(n1.array() * (s1.u.col(i).array() * p1.b.col(j).array() +
                                              s1.u.col(j).array() * p1.b.col(i).array()))) +
               (gamma_field(vel, p2.g, i, j, conv) - gamma_field(vel, p0.g, i, j, conv)) / span -
               gamma_field(vel, lrs, i, j, conv);
      rg2 += space.l2_sq(rg);
    }
  }
  r.gamma = std::sqrt(rg2);
  return r;
}

}  // namespace

MomentResiduals moment_residuals(const Discretization& disc, const SimState& before, const SimState& mid,
                                 const SimState& after, double dt, const ModelParams& params) {
  if (!(dt > 0.0)) throw ConfigError("moment_residuals: dt must be positive");
  return moment_residuals_impl(disc, before, mid, after, 2.0 * dt, params);
}

std::vector<MomentResiduals> moment_residuals(const Discretization& disc, const std::vector<SimState>& series,
                                              double dt, const ModelParams& params) {
  if (series.size() < 2) throw ConfigError("moment_residuals: need at least two consecutive states");
  if (!(dt > 0.0)) throw ConfigError("moment_residuals: dt must be positive");
  std::vector<MomentResiduals> out;
  const std::size_t n = series.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0)
      out.push_back(moment_residuals_impl(disc, series[0], series[0], series[1], dt, params));
    else if (i + 1 == n)
      out.push_back(moment_residuals_impl(disc, series[n - 2], series[n - 1], series[n - 1], dt, params));
    else
      out.push_back(moment_residuals_impl(disc, series[i - 1], series[i], series[i + 1], 2.0 * dt, params));
  }
  return out;
}

DecayModel parse_decay_model(const std::string& name) {
  if (name == "exp" || name == "exponential") return DecayModel::exponential;
  if (name == "alg" || name == "algebraic") return DecayModel::algebraic;
  throw ConfigError("unknown decay model '" + name + "' (expected exp or alg)");
}

DecayFit fit_decay(const std::vector<double>& times, const std::vector<double>& values, DecayModel model,
                   double t0, double t1) {
  if (times.size() != values.size()) throw ShapeError("fit_decay: times and values differ in length");
  if (!(t1 > t0)) throw ConfigError("fit_decay: window must satisfy t0 < t1");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t0 || times[i] > t1) continue;
    if (!(values[i] > 0.0)) {
      std::ostringstream os;
      os << "fit_decay: nonpositive value " << values[i] << " at t = " << times[i];
      throw DomainError(os.str());
    }
    xs.push_back(model == DecayModel::exponential ? times[i] : std::log1p(times[i]));
    ys.push_back(std::log(values[i]));
  }
  if (xs.size() < 2) throw ConfigError("fit_decay: fewer than two samples inside the window");
  if (times.empty() || t0 < times.front() - 1e-12 || t1 > times.back() + 1e-12)
    throw ConfigError("fit_decay: window extends beyond the series");
  const Eigen::Index n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixX2d a(n, 2);
  Vec y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = xs[static_cast<std::size_t>(i)];
    y(i) = ys[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector2d c = a.colPivHouseholderQr().solve(y);
  const Vec resid = y - a * c;
  const double ss_tot = (y.array() - y.mean()).square().sum();
  DecayFit fit;
  fit.points = static_cast<int>(n);
  fit.amplitude = std::exp(c(0));
  fit.rate = model == DecayModel::exponential ? -c(1) : c(1);
  fit.r_squared = ss_tot > 0.0 ? 1.0 - resid.squaredNorm() / ss_tot : 1.0;
  return fit;
}

namespace {

Vec random_band_field(const Discretization& disc, Rng& rng, int kmax) {
  const auto& space = disc.space();
  const int dim = disc.dim();
  Vec out = Vec::Zero(disc.points());
  const double k0 = 2.0 * std::numbers::pi / disc.grid().box;
  for (const MultiIndex& k : multi_indices(dim, 1, kmax * dim)) {
    bool ok = true;
    for (int a = 0; a < dim; ++a) ok = ok && k[a] <= kmax;
    if (!ok) continue;
    // Both sign patterns for each nonzero component beyond the first.
    const int patterns = 1 << std::max(0, dim - 1);
    for (int sgn = 0; sgn < patterns; ++sgn) {
      const double c = rng.normal(), sn = rng.normal();
      Vec phase = Vec::Zero(disc.points());
      for (int a = 0; a < dim; ++a) {
        const int sign = (a > 0 && ((sgn >> (a - 1)) & 1)) ? -1 : 1;
        phase += (sign * k[a] * k0) * space.coordinate(a);
      }
      out += c * phase.array().cos().matrix() + sn * phase.array().sin().matrix();
    }
  }
  return out;
}

Vec normalized(Vec v) {
  const double m = v.cwiseAbs().maxCoeff();
  return m > 0.0 ? Vec(v / m) : v;
}

}  // namespace

SimState random_smooth_state(const Discretization& disc, Rng& rng, double amplitude) {
  const auto& vel = disc.velocity();
  SimState s = disc.zero_state();
  s.rho = amplitude * normalized(random_band_field(disc, rng, 2));
  for (int a = 0; a < disc.dim(); ++a) s.u.col(a) = amplitude * normalized(random_band_field(disc, rng, 2));
  s.f.col(0) = normalized(random_band_field(disc, rng, 2));
  for (int a = 0; a < disc.dim(); ++a) s.f.col(vel.unit(a)) = normalized(random_band_field(disc, rng, 2));
  for (Eigen::Index j = 0; j < vel.size(); ++j) {
    const int k = total_order(vel.modes()[j]);
    if (k == 2 || k == 3) s.f.col(j) = 0.1 * normalized(random_band_field(disc, rng, 2));
  }
  s.f *= amplitude / s.f.cwiseAbs().maxCoeff();
  return s;
}

EquivalenceResult norm_equivalence_battery(const FunctionalContext& ctx, int count, double amplitude,
                                           std::uint64_t seed) {
  Rng rng(seed);
  EquivalenceResult res;
  res.min_ratio = std::numeric_limits<double>::infinity();
  res.max_ratio = 0.0;
  for (int i = 0; i < count; ++i) {
    const double amp = amplitude * (0.05 + 0.95 * rng.uniform());
    const SimState s = random_smooth_state(ctx.disc(), rng, amp);
    const double e = energy_total(ctx, s).E;
    const double p = plain_norm(ctx, s);
    const double r = e / p;
    res.min_ratio = std::min(res.min_ratio, r);
    res.max_ratio = std::max(res.max_ratio, r);
  }
  res.states = count;
  res.passed = res.min_ratio >= 0.5 && res.max_ratio <= 2.0;
  return res;
}

EnergyReport make_report(const FunctionalContext& ctx, const SimState& s) {
  const auto& disc = ctx.disc();
  EnergyReport r;
  r.t = s.t;
  r.energy = energy_total(ctx, s);
  r.conserved = conserved(disc, s);
  const ZeroMean z = zero_mean_check(disc, s);
  r.zero_mean_a = z.a;
  r.zero_mean_rho = z.rho;
  r.zero_mean_momentum = z.momentum;
  r.F_min = positivity_min(disc, s);
  r.plain_norm = plain_norm(ctx, s);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.entropy = {nan, nan, nan};
  r.moments = {nan, nan, nan};
  return r;
}

}  // namespace kfvp
