#include "kfvp/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "kfvp/presets.hpp"

namespace kfvp {

using nlohmann::json;

namespace {

// Typed access into a JSON object that reports failures by JSON path.
class Section {
 public:
  Section(const json& j, std::string path, std::string origin, std::set<std::string> allowed)
      : j_(j), path_(std::move(path)), origin_(std::move(origin)) {
    if (!j_.is_object()) fail(path_, "expected an object");
    for (const auto& [k, v] : j_.items())
      if (!allowed.count(k)) fail(path_ + "/" + k, "unknown key");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json* sub(const std::string& key) const { return j_.contains(key) ? &j_.at(key) : nullptr; }
  std::string path(const std::string& key) const { return path_ + "/" + key; }

  void get(const std::string& key, double& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number()) fail(path(key), "expected a number");
    out = v.get<double>();
  }
  void get(const std::string& key, int& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) fail(path(key), "expected an integer");
    out = v.get<int>();
  }
  void get(const std::string& key, long& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) fail(path(key), "expected an integer");
    out = v.get<long>();
  }
  void get(const std::string& key, std::uint64_t& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
      fail(path(key), "expected a nonnegative integer");
    out = v.get<std::uint64_t>();
  }
  void get(const std::string& key, bool& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail(path(key), "expected true or false");
    out = v.get<bool>();
  }
  void get(const std::string& key, std::string& out) const {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_string()) fail(path(key), "expected a string");
    out = v.get<std::string>();
  }

  [[noreturn]] void fail(const std::string& where, const std::string& what) const {
    throw ConfigError(origin_ + ": " + where + ": " + what);
  }

 private:
  const json& j_;
  std::string path_;
  std::string origin_;
};

// Re-run a validator and prefix its message with a JSON path.
template <typename F>
void at_path(const std::string& origin, const std::string& path, F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + path + ": " + e.what());
  }
}

std::string gamma_conv_name(GammaConvention c) { return c == GammaConvention::literal ? "literal" : "kronecker"; }

}  // namespace

void RunConfig::validate() const {
  grid.validate();
  basis.validate();
  model.validate();
  schedule.validate();
  weights.validate();
  if (grid.dim != basis.dim) throw ConfigError("grid.dim must equal basis.dim");
  if (!(amplitude >= 0.0)) throw ConfigError("initial.amplitude must be >= 0");
  if (!(fit_t1 > fit_t0)) throw ConfigError("fit window must satisfy t0 < t1");
  bool known = false;
  for (const auto& n : preset_names()) known = known || n == preset;
  if (!known) throw ConfigError("unknown preset '" + preset + "'");
}

json to_json(const RunConfig& c) {
  json j;
  j["grid"] = {{"dim", c.grid.dim}, {"n", c.grid.n}, {"box", c.grid.box}};
  j["basis"] = {{"dim", c.basis.dim}, {"order", c.basis.order}, {"quad_size", c.basis.quad_size}};
  j["model"] = {{"gamma", c.model.gamma},
                {"c0", c.model.c0},
                {"normalize_pressure", c.model.normalize_pressure},
                {"gamma_convention", gamma_conv_name(c.model.gamma_convention)}};
  j["scheme"] = {{"name", scheme_name(c.schedule.scheme)},
                 {"tol", c.schedule.picard.tol},
                 {"max_iter", c.schedule.picard.max_iter},
                 {"norm_order", c.schedule.picard.norm_order}};
  j["schedule"] = {{"dt", c.schedule.dt},
                   {"n_steps", c.schedule.n_steps},
                   {"report_every", c.schedule.report_every},
                   {"checkpoint_every", c.schedule.checkpoint_every}};
  j["initial"] = {{"preset", c.preset}, {"amplitude", c.amplitude}, {"seed", c.seed}};
  j["weights"] = {{"tau1", c.weights.tau1}, {"tau2", c.weights.tau2}, {"tau3", c.weights.tau3},
                  {"tau4", c.weights.tau4}, {"tau5", c.weights.tau5}, {"ck", c.weights.ck},
                  {"s_cap", c.weights.s_cap}, {"check_equivalence", c.check_equivalence}};
  j["fit"] = {{"t0", c.fit_t0}, {"t1", c.fit_t1}};
  j["output"] = {{"dir", c.output_dir}};
  return j;
}

RunConfig from_json(const json& j, const std::string& origin) {
  RunConfig c;
  const Section root(j, "", origin,
                     {"grid", "basis", "model", "scheme", "schedule", "initial", "weights", "fit", "output"});
  if (const json* s = root.sub("grid")) {
    const Section g(*s, "/grid", origin, {"dim", "n", "box"});
    g.get("dim", c.grid.dim);
    g.get("n", c.grid.n);
    g.get("box", c.grid.box);
    at_path(origin, "/grid", [&] { c.grid.validate(); });
  }
  if (const json* s = root.sub("basis")) {
    const Section b(*s, "/basis", origin, {"dim", "order", "quad_size"});
    b.get("dim", c.basis.dim);
    b.get("order", c.basis.order);
    if (b.has("order") && !b.has("quad_size")) c.basis.quad_size = c.basis.order + 2;
    b.get("quad_size", c.basis.quad_size);
    at_path(origin, "/basis", [&] { c.basis.validate(); });
  } else if (root.sub("grid")) {
    c.basis.dim = c.grid.dim;
  }
  if (const json* s = root.sub("model")) {
    const Section m(*s, "/model", origin, {"gamma", "c0", "normalize_pressure", "gamma_convention"});
    m.get("gamma", c.model.gamma);
    if (m.has("gamma") && !m.has("c0")) c.model.c0 = 1.0 / c.model.gamma;
    m.get("c0", c.model.c0);
    m.get("normalize_pressure", c.model.normalize_pressure);
    std::string conv = gamma_conv_name(c.model.gamma_convention);
    m.get("gamma_convention", conv);
    if (conv == "literal")
      c.model.gamma_convention = GammaConvention::literal;
    else if (conv == "kronecker")
      c.model.gamma_convention = GammaConvention::kronecker;
    else
      m.fail("/model/gamma_convention", "expected \"literal\" or \"kronecker\"");
    at_path(origin, "/model", [&] { c.model.validate(); });
  }
  if (const json* s = root.sub("scheme")) {
    const Section m(*s, "/scheme", origin, {"name", "tol", "max_iter", "norm_order"});
    std::string name = scheme_name(c.schedule.scheme);
    m.get("name", name);
    at_path(origin, "/scheme/name", [&] { c.schedule.scheme = parse_scheme(name); });
    m.get("tol", c.schedule.picard.tol);
    m.get("max_iter", c.schedule.picard.max_iter);
    m.get("norm_order", c.schedule.picard.norm_order);
    if (!(c.schedule.picard.tol > 0.0)) m.fail("/scheme/tol", "must be positive");
    if (c.schedule.picard.max_iter < 2) m.fail("/scheme/max_iter", "must be >= 2");
    if (c.schedule.picard.norm_order < 0) m.fail("/scheme/norm_order", "must be >= 0");
  }
  if (const json* s = root.sub("schedule")) {
    const Section m(*s, "/schedule", origin, {"dt", "n_steps", "report_every", "checkpoint_every"});
    m.get("dt", c.schedule.dt);
    m.get("n_steps", c.schedule.n_steps);
    m.get("report_every", c.schedule.report_every);
    m.get("checkpoint_every", c.schedule.checkpoint_every);
    if (!(c.schedule.dt > 0.0)) m.fail("/schedule/dt", "must be positive");
    if (c.schedule.n_steps < 0) m.fail("/schedule/n_steps", "must be >= 0");
    if (c.schedule.report_every < 1) m.fail("/schedule/report_every", "must be >= 1");
    if (c.schedule.checkpoint_every < 0) m.fail("/schedule/checkpoint_every", "must be >= 0");
  }
  if (const json* s = root.sub("initial")) {
    const Section m(*s, "/initial", origin, {"preset", "amplitude", "seed"});
    m.get("preset", c.preset);
    m.get("amplitude", c.amplitude);
    m.get("seed", c.seed);
    bool known = false;
    for (const auto& n : preset_names()) known = known || n == c.preset;
    if (!known) m.fail("/initial/preset", "unknown preset '" + c.preset + "'");
    if (!(c.amplitude >= 0.0)) m.fail("/initial/amplitude", "must be >= 0");
  }
  if (const json* s = root.sub("weights")) {
    const Section m(*s, "/weights", origin,
                    {"tau1", "tau2", "tau3", "tau4", "tau5", "ck", "s_cap", "check_equivalence"});
    m.get("tau1", c.weights.tau1);
    m.get("tau2", c.weights.tau2);
    m.get("tau3", c.weights.tau3);
    m.get("tau4", c.weights.tau4);
    m.get("tau5", c.weights.tau5);
    m.get("s_cap", c.weights.s_cap);
    m.get("check_equivalence", c.check_equivalence);
    if (const json* ck = m.sub("ck")) {
      if (!ck->is_array() || ck->size() != 4) m.fail("/weights/ck", "expected an array of four numbers");
      for (std::size_t i = 0; i < 4; ++i) {
        if (!(*ck)[i].is_number()) m.fail("/weights/ck/" + std::to_string(i), "expected a number");
        c.weights.ck[i] = (*ck)[i].get<double>();
      }
    }
    at_path(origin, "/weights", [&] { c.weights.validate(); });
  }
  if (const json* s = root.sub("fit")) {
    const Section m(*s, "/fit", origin, {"t0", "t1"});
    m.get("t0", c.fit_t0);
    m.get("t1", c.fit_t1);
    if (!(c.fit_t1 > c.fit_t0)) m.fail("/fit", "t0 must be smaller than t1");
  }
  if (const json* s = root.sub("output")) {
    const Section m(*s, "/output", origin, {"dir"});
    m.get("dir", c.output_dir);
  }
  if (c.grid.dim != c.basis.dim)
    throw ConfigError(origin + ": /basis/dim: velocity dimension " + std::to_string(c.basis.dim) +
                      " must equal grid dimension " + std::to_string(c.grid.dim));
  at_path(origin, "", [&] { c.validate(); });
  return c;
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line and column.
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << origin << ":" << line << ":" << col << ": syntax error: " << e.what();
    throw ConfigError(os.str());
  }
  return from_json(j, origin);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

void save_config(const RunConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config: " + path);
  out << to_json(cfg).dump(2) << "\n";
  if (!out) throw IoError("failed writing config: " + path);
}

void apply_overrides(json& j, const std::vector<std::string>& assignments) {
  for (const std::string& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + a + "': expected key=value");
    const std::string key = a.substr(0, eq);
    const std::string value = a.substr(eq + 1);
    json v;
    try {
      v = json::parse(value);
    } catch (const json::parse_error&) {
      v = value;
    }
    json* node = &j;
    std::string rest = key;
    while (true) {
      const auto dot = rest.find('.');
      const std::string part = rest.substr(0, dot);
      if (part.empty()) throw ConfigError("override '" + a + "': empty key component");
      if (dot == std::string::npos) {
        (*node)[part] = v;
        break;
      }
      if (!node->contains(part)) (*node)[part] = json::object();
      node = &(*node)[part];
      rest = rest.substr(dot + 1);
    }
  }
}

}  // namespace kfvp
