#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "pfmcl/harness.hpp"

namespace pfmcl {

namespace {

struct Preset {
  std::string name;
  std::string parent;  // empty for a root
  KeyValues values;
};

// Physics presets use the shear-flow parameter set (the ModelParams
// defaults); the iteration preset uses gamma = 500, lambda = 12.
const std::vector<Preset>& presets() {
  static const std::vector<Preset> p = {
      {"default", "", {}},
      {"relaxation", "default",
       {{"u_w_top", "0"}, {"u_w_bottom", "0"}, {"theta_s_deg", "64"}, {"t_max", "2.5"}}},
      {"case1", "default",
       {{"u_w_top", "0.7"},
        {"u_w_bottom", "-0.7"},
        {"theta_s_deg", "64"},
        {"scheme", "bdf2"},
        {"t_max", "5"},
        {"snapshot_every", "1"}}},
      {"case2", "case1",
       {{"u_w_top", "0.2"}, {"u_w_bottom", "-0.2"}, {"theta_s_deg", "77.6"}, {"t_max", "10"},
        {"wall_profile_at", "10"}}},
      {"convergence", "case2",
       {{"nx", "129"}, {"ny", "32"}, {"t_max", "0.4"}, {"snapshot_every", "0"},
        {"wall_profile_at", "-1"}}},
      {"iterations", "case1",
       {{"gamma", "500"}, {"lambda", "12"}, {"scheme", "cn"}, {"t_max", "0.2"},
        {"snapshot_every", "0"}}},
      {"drop", "default",
       {{"theta_s_deg", "30"},
        {"u_w_top", "2"},
        {"u_w_bottom", "-2"},
        {"initial", "drop"},
        {"drop_radius", "0.5"},
        {"drop_phase", "-1"},
        {"scheme", "bdf2"},
        {"t_max", "5"},
        {"snapshot_every", "1"}}},
      {"drop-obtuse", "drop", {{"theta_s_deg", "120"}}},
      {"steady", "default",
       {{"initial", "uniform"},
        {"velocity", "slip-couette"},
        {"u_w_top", "0.2"},
        {"u_w_bottom", "-0.2"},
        {"nx", "33"},
        {"ny", "16"},
        {"t_max", "1"}}},
  };
  return p;
}

const Preset* find_preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return &p;
  return nullptr;
}

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x))
    throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
  return x;
}

long to_long(const std::string& key, const std::string& v) {
  long x = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config: key '" + key + "' expects true/false, got '" + v + "'");
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt(bool b) { return b ? "true" : "false"; }

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> k = {
      {"preset", "built-in parameter set to start from"},
      {"lambda", "mixing energy strength"},
      {"epsilon", "interface width"},
      {"mobility", "Cahn-Hilliard mobility M"},
      {"nu", "viscosity"},
      {"gamma", "wall relaxation coefficient"},
      {"ell", "slip coefficient"},
      {"theta_s_deg", "static contact angle in degrees"},
      {"u_w_top", "top wall speed"},
      {"u_w_bottom", "bottom wall speed"},
      {"eta", "margin in C = sqrt(2)/3 + eta"},
      {"L_x", "channel length"},
      {"scheme", "cn | bdf2"},
      {"dt", "time step"},
      {"t_max", "final time"},
      {"solver_tol", "BiCGSTAB relative tolerance"},
      {"solver_maxit", "BiCGSTAB iteration cap"},
      {"rotational_pressure", "rotational pressure update"},
      {"dealias", "3/2-rule dealiasing of products in x"},
      {"warm_start", "start BiCGSTAB from extrapolated levels"},
      {"startup_reinit_aux", "reset U, W from phi after the startup step"},
      {"nx", "points in x (odd)"},
      {"ny", "Lobatto points in y"},
      {"initial", "stripe | drop | uniform"},
      {"velocity", "couette | zero | slip-couette"},
      {"drop_radius", "drop radius, in (0, 1)"},
      {"drop_center", "drop center x"},
      {"drop_phase", "phase value inside the drop (+1 or -1)"},
      {"uniform_phi", "value of the uniform initial phase"},
      {"out", "output directory (empty: none)"},
      {"snapshot_every", "time between snapshots (0: none)"},
      {"checkpoint_every", "steps between checkpoints (0: none)"},
      {"csv_every", "steps between time-series rows"},
      {"wall_profile_at", "time of the bottom-wall slip profile (< 0: none)"},
      {"seed", "random seed"},
      {"restart", "checkpoint file to resume from"},
  };
  return k;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> n;
  for (const auto& p : presets()) n.push_back(p.name);
  return n;
}

KeyValues preset_values(const std::string& name) {
  std::vector<const Preset*> chain;
  for (const Preset* p = find_preset(name); p; p = p->parent.empty() ? nullptr : find_preset(p->parent))
    chain.push_back(p);
  if (chain.empty()) throw ConfigError("config: unknown preset '" + name + "'");
  KeyValues kv;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it)
    for (const auto& [k, v] : (*it)->values) kv[k] = v;
  kv["preset"] = name;
  return kv;
}

KeyValues parse_config_text(const std::string& text, const std::string& origin) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (k.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    kv[k] = v;
  }
  return kv;
}

KeyValues parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), path);
}

void apply_key(RunConfig& c, const std::string& key, const std::string& v) {
  ModelParams& p = c.params;
  SchemeConfig& s = c.scheme;
  if (key == "preset") c.preset = v;
  else if (key == "lambda") p.lambda = to_double(key, v);
  else if (key == "epsilon") p.epsilon = to_double(key, v);
  else if (key == "mobility") p.mobility_M = to_double(key, v);
  else if (key == "nu") p.nu = to_double(key, v);
  else if (key == "gamma") p.gamma = to_double(key, v);
  else if (key == "ell") p.ell = to_double(key, v);
  else if (key == "theta_s_deg") p.theta_s = to_double(key, v) * std::numbers::pi / 180.0;
  else if (key == "u_w_top") p.u_w_top = to_double(key, v);
  else if (key == "u_w_bottom") p.u_w_bottom = to_double(key, v);
  else if (key == "eta") p.eta = to_double(key, v);
  else if (key == "L_x") p.L_x = to_double(key, v);
  else if (key == "scheme") {
    try {
      s.scheme = scheme_from_string(v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  } else if (key == "dt") s.dt = to_double(key, v);
  else if (key == "t_max") s.t_max = to_double(key, v);
  else if (key == "solver_tol") s.solver_tol = to_double(key, v);
  else if (key == "solver_maxit") s.solver_maxit = static_cast<int>(to_long(key, v));
  else if (key == "rotational_pressure") s.rotational_pressure = to_bool(key, v);
  else if (key == "dealias") s.dealias = to_bool(key, v);
  else if (key == "warm_start") s.warm_start = to_bool(key, v);
  else if (key == "startup_reinit_aux") s.startup_reinit_aux = to_bool(key, v);
  else if (key == "nx") c.nx = static_cast<int>(to_long(key, v));
  else if (key == "ny") c.ny = static_cast<int>(to_long(key, v));
  else if (key == "initial") c.initial = v;
  else if (key == "velocity") c.velocity = v;
  else if (key == "drop_radius") c.drop_radius = to_double(key, v);
  else if (key == "drop_center") c.drop_center = to_double(key, v);
  else if (key == "drop_phase") c.drop_phase = to_double(key, v);
  else if (key == "uniform_phi") c.uniform_phi = to_double(key, v);
  else if (key == "out") c.out_dir = v;
  else if (key == "snapshot_every") c.snapshot_every = to_double(key, v);
  else if (key == "checkpoint_every") c.checkpoint_every = static_cast<int>(to_long(key, v));
  else if (key == "csv_every") c.csv_every = static_cast<int>(to_long(key, v));
  else if (key == "wall_profile_at") c.wall_profile_at = to_double(key, v);
  else if (key == "seed") c.seed = static_cast<unsigned>(to_long(key, v));
  else if (key == "restart") c.restart = v;
  else throw ConfigError("config: unknown key '" + key + "'");
}

void RunConfig::validate() const {
  if (nx < 9 || nx % 2 == 0) throw ConfigError("config: nx must be odd and >= 9 (m >= 4)");
  if (ny < 5) throw ConfigError("config: ny must be >= 5 (n >= 4)");
  try {
    params.validate();
    scheme.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (initial != "stripe" && initial != "drop" && initial != "uniform")
    throw ConfigError("config: initial must be stripe, drop or uniform");
  if (velocity != "couette" && velocity != "zero" && velocity != "slip-couette")
    throw ConfigError("config: velocity must be couette, zero or slip-couette");
  if (!(drop_radius > 0.0 && drop_radius < 1.0)) throw ConfigError("config: drop_radius must lie in (0, 1)");
  if (std::abs(drop_phase) != 1.0) throw ConfigError("config: drop_phase must be +1 or -1");
  if (snapshot_every < 0.0) throw ConfigError("config: snapshot_every must be >= 0");
  if (checkpoint_every < 0) throw ConfigError("config: checkpoint_every must be >= 0");
  if (csv_every < 1) throw ConfigError("config: csv_every must be >= 1");
}

RunConfig resolve_config(const KeyValues& overrides) {
  RunConfig c;
  auto it = overrides.find("preset");
  const std::string name = it != overrides.end() ? it->second : c.preset;
  for (const auto& [k, v] : preset_values(name)) apply_key(c, k, v);
  for (const auto& [k, v] : overrides) apply_key(c, k, v);
  c.validate();
  return c;
}

KeyValues to_key_values(const RunConfig& c) {
  const ModelParams& p = c.params;
  const SchemeConfig& s = c.scheme;
  return {
      {"preset", c.preset},
      {"lambda", fmt(p.lambda)},
      {"epsilon", fmt(p.epsilon)},
      {"mobility", fmt(p.mobility_M)},
      {"nu", fmt(p.nu)},
      {"gamma", fmt(p.gamma)},
      {"ell", fmt(p.ell)},
      {"theta_s_deg", fmt(p.theta_s * 180.0 / std::numbers::pi)},
      {"u_w_top", fmt(p.u_w_top)},
      {"u_w_bottom", fmt(p.u_w_bottom)},
      {"eta", fmt(p.eta)},
      {"L_x", fmt(p.L_x)},
      {"scheme", to_string(s.scheme)},
      {"dt", fmt(s.dt)},
      {"t_max", fmt(s.t_max)},
      {"solver_tol", fmt(s.solver_tol)},
      {"solver_maxit", std::to_string(s.solver_maxit)},
      {"rotational_pressure", fmt(s.rotational_pressure)},
      {"dealias", fmt(s.dealias)},
      {"warm_start", fmt(s.warm_start)},
      {"startup_reinit_aux", fmt(s.startup_reinit_aux)},
      {"nx", std::to_string(c.nx)},
      {"ny", std::to_string(c.ny)},
      {"initial", c.initial},
      {"velocity", c.velocity},
      {"drop_radius", fmt(c.drop_radius)},
      {"drop_center", fmt(c.drop_center)},
      {"drop_phase", fmt(c.drop_phase)},
      {"uniform_phi", fmt(c.uniform_phi)},
      {"out", c.out_dir},
      {"snapshot_every", fmt(c.snapshot_every)},
      {"checkpoint_every", std::to_string(c.checkpoint_every)},
      {"csv_every", std::to_string(c.csv_every)},
      {"wall_profile_at", fmt(c.wall_profile_at)},
      {"seed", std::to_string(c.seed)},
      {"restart", c.restart},
  };
}

void log_config(std::ostream& os, const RunConfig& c) {
  const KeyValues kv = to_key_values(c);
  os << "# resolved parameters (preset " << c.preset << ")\n";
  for (const auto& k : config_keys()) os << k.name << " = " << kv.at(k.name) << "\n";
}

}  // namespace pfmcl
