#include "kfvp/presets.hpp"

#include <sstream>

#include "kfvp/dynamics.hpp"
#include "kfvp/functionals.hpp"

namespace kfvp {

namespace {

// Largest integer wave index per axis. Only the slowest band is excited so the
// decay is dominated by a single rate.
constexpr int kMaxWave = 1;

// Sum of cos/sin modes with integer wave indices 1..kMaxWave along each axis.
Vec band_field(const Discretization& disc, Rng& rng) {
  const auto& space = disc.space();
  const int dim = disc.dim();
  const double k0 = 2.0 * std::numbers::pi / disc.grid().box;
  Vec out = Vec::Zero(disc.points());
  for (const MultiIndex& k : multi_indices(dim, 1, kMaxWave * dim)) {
    bool ok = true;
    for (int a = 0; a < dim; ++a) ok = ok && k[a] <= kMaxWave;
    if (!ok) continue;
    const int patterns = 1 << std::max(0, dim - 1);
    for (int sgn = 0; sgn < patterns; ++sgn) {
      const double c = rng.normal(), s = rng.normal();
      Vec phase = Vec::Zero(disc.points());
      for (int a = 0; a < dim; ++a) {
        const int sign = (a > 0 && ((sgn >> (a - 1)) & 1)) ? -1 : 1;
        phase += (sign * k[a] * k0) * space.coordinate(a);
      }
      out += c * phase.array().cos().matrix() + s * phase.array().sin().matrix();
    }
  }
  const double m = out.cwiseAbs().maxCoeff();
  return m > 0.0 ? Vec(out / m) : out;
}

void fill_micro(const Discretization& disc, Rng& rng, double amp, SimState& s) {
  const auto& vel = disc.velocity();
  for (Eigen::Index j = 0; j < vel.size(); ++j) {
    const int k = total_order(vel.modes()[j]);
    if (k == 2 || k == 3) s.f.col(j) = amp * band_field(disc, rng);
  }
}

void balance_momentum(const Discretization& disc, SimState& s) {
  const auto& space = disc.space();
  const Vec n1 = (1.0 + s.rho.array()).matrix();
  const double mass = space.integral(n1);
  for (int a = 0; a < disc.dim(); ++a) {
    const double total = space.integral(Vec(s.f.col(disc.velocity().unit(a)) + n1.cwiseProduct(s.u.col(a))));
    s.u.col(a).array() -= total / mass;
  }
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"equilibrium", "decay-torus", "conservation-audit",
                                              "manufactured-moment"};
  return names;
}

SimState preset_initial(const std::string& name, double amplitude, std::uint64_t seed, const Discretization& disc,
                        const ModelParams& params) {
  if (!(amplitude >= 0.0)) throw ConfigError("initial: amplitude must be >= 0");
  const auto& vel = disc.velocity();
  SimState s = disc.zero_state();
  Rng rng(seed);
  if (name == "equilibrium") return s;

  const auto macro = [&] {
    s.f.col(0) = amplitude * band_field(disc, rng);
    s.rho = amplitude * band_field(disc, rng);
    for (int a = 0; a < disc.dim(); ++a) s.f.col(vel.unit(a)) = amplitude * band_field(disc, rng);
    for (int a = 0; a < disc.dim(); ++a) s.u.col(a) = amplitude * band_field(disc, rng);
  };

  if (name == "decay-torus") {
    macro();
    fill_micro(disc, rng, 0.1 * amplitude, s);
    balance_momentum(disc, s);
  } else if (name == "conservation-audit") {
    macro();
    fill_micro(disc, rng, 0.1 * amplitude, s);
    s.f.col(0).array() += 0.5 * amplitude;
    s.rho.array() += 0.5 * amplitude;
    s.u.array() += 0.5 * amplitude;
  } else if (name == "manufactured-moment") {
    macro();
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
  }

  if ((1.0 + s.rho.array()).minCoeff() < params.vacuum_floor)
    throw PresetError("preset " + name + ": density leaves the admissible range at amplitude " +
                      std::to_string(amplitude) + "; use a smaller amplitude");
  const double fmin = positivity_min(disc, s);
  if (!(fmin > 0.0)) {
    std::ostringstream os;
    os << "preset " << name << ": M + sqrt(M) f has minimum " << fmin << " at amplitude " << amplitude
       << "; use a smaller amplitude";
    throw PresetError(os.str());
  }
  return s;
}

}  // namespace kfvp
