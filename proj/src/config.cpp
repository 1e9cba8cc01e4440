#include "wbflux/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "wbflux/errors.hpp"
#include "wbflux/expr.hpp"

namespace wbflux {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      // problem selection
      "preset", "model", "scheme",
      // custom model
      "f_expr", "df_expr", "b_expr", "b_prime_sup", "d_expr", "d_inv_expr",
      "d_prime_lower_bound",
      // topography
      "z", "z_expr", "z_samples", "z_jumps", "sup_slope",
      // domain and data
      "x_l", "x_r", "T", "u0_expr", "ul_expr", "ur_expr", "u0_jumps",
      // discretization and time stepping
      "dx", "n_cells", "dt", "dt_mode", "cfl", "safety", "dt_max", "snapshot_times",
      "blowup_factor",
      // outputs and reproducibility
      "output_dir", "seed", "history", "cache_dir",
      // table / diagnostics drivers
      "rows", "expensive", "paper_dt", "tolerance", "threads",
      "entropy_samples", "entropy_tol", "cfl_factor", "weak_tol",
  };
  return keys;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  size_t b = s.find_last_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::from_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    cfg.apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

void Config::apply(const std::string& key, const std::string& raw_value) {
  if (known_keys().count(key) == 0) throw ConfigError("unknown config key: " + key);
  values_[key] = raw_value;
}

double Config::get_double(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key: " + key);
  try {
    size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": not a number: " + it->second);
  }
}

double Config::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long Config::get_long_or(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  const double v = get_double(key);
  const long l = static_cast<long>(std::llround(v));
  if (static_cast<double>(l) != v)
    throw ConfigError("config key " + key + ": expected an integer");
  return l;
}

bool Config::get_bool_or(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true") return true;
  if (it->second == "false") return false;
  throw ConfigError("config key " + key + ": expected true or false");
}

std::string Config::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key: " + key);
  const std::string& v = it->second;
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  throw ConfigError("config key " + key + ": strings must be quoted");
}

std::string Config::get_string_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

std::vector<double> Config::get_array_or(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return {};
  std::string v = it->second;
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    throw ConfigError("config key " + key + ": arrays use [a, b, ...]");
  v = v.substr(1, v.size() - 2);
  std::vector<double> out;
  std::istringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("config key " + key + ": bad array element: " + item);
    }
  }
  return out;
}

namespace {

FluxModel model_from_config(const Config& cfg) {
  const std::string name = cfg.get_string_or("model", "burgers_hopf");
  if (name == "burgers_hopf") return burgers_hopf_model();
  if (name == "linear_advection") return linear_advection_model();
  if (name != "custom") throw ConfigError("unknown model: " + name);

  FluxModel m;
  m.name = "custom";
  if (!cfg.has("f_expr") || !cfg.has("df_expr") || !cfg.has("b_expr"))
    throw ConfigError("custom model requires f_expr, df_expr and b_expr");
  m.f = compile_expression(cfg.get_string("f_expr"), "u");
  m.df = compile_expression(cfg.get_string("df_expr"), "u");
  m.b = compile_expression(cfg.get_string("b_expr"), "u");
  m.b_prime_sup = cfg.get_double_or("b_prime_sup", 0.0);
  m.d_prime_lower_bound = cfg.get_double_or("d_prime_lower_bound", 1.0);
  if (cfg.has("d_expr")) m.d_eval = compile_expression(cfg.get_string("d_expr"), "u");
  if (cfg.has("d_inv_expr")) m.d_inverse = compile_expression(cfg.get_string("d_inv_expr"), "y");
  if (!m.d_eval) m.d_cache = make_d_cache();
  return m;
}

Topography topo_from_config(const Config& cfg, const Topography& fallback) {
  Topography t = fallback;
  if (cfg.has("z")) {
    const std::string name = cfg.get_string("z");
    if (name == "table") {
      const auto samples = cfg.get_array_or("z_samples");
      if (samples.size() < 4 || samples.size() % 2 != 0)
        throw ConfigError("z = \"table\" requires z_samples = [x0, z0, x1, z1, ...]");
      std::vector<double> xs, zs;
      for (size_t i = 0; i < samples.size(); i += 2) {
        xs.push_back(samples[i]);
        zs.push_back(samples[i + 1]);
      }
      if (!std::is_sorted(xs.begin(), xs.end()))
        throw ConfigError("z_samples abscissas must be increasing");
      t = Topography{};
      t.z = [xs, zs](double x) {
        if (x <= xs.front()) return zs.front();
        if (x >= xs.back()) return zs.back();
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const size_t i = static_cast<size_t>(it - xs.begin());
        const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return zs[i - 1] + w * (zs[i] - zs[i - 1]);
      };
      double slope = 0.0;
      for (size_t i = 1; i < xs.size(); ++i)
        slope = std::max(slope, std::abs((zs[i] - zs[i - 1]) / (xs[i] - xs[i - 1])));
      t.sup_slope = slope;
      t.breakpoints = xs;
    } else if (name == "expr") {
      t = Topography{};
      t.z = compile_expression(cfg.get_string("z_expr"), "x");
      t.sup_slope = 0.0;  // estimated at projection time unless declared
    } else {
      t = topography_by_name(name);
    }
  }
  if (cfg.has("z_jumps")) {
    t.jumps = cfg.get_array_or("z_jumps");
    t.nonconforming = !t.jumps.empty();
    t.breakpoints.insert(t.breakpoints.end(), t.jumps.begin(), t.jumps.end());
  }
  if (cfg.has("sup_slope")) t.sup_slope = cfg.get_double("sup_slope");
  if (t.nonconforming && !cfg.has("sup_slope") && t.sup_slope == 0.0)
    throw ConfigError("discontinuous z requires an explicit sup_slope");
  return t;
}

}  // namespace

RunSetup build_run_setup(const Config& cfg) {
  RunSetup s;

  if (cfg.has("preset")) {
    const std::string name = cfg.get_string("preset");
    const auto id = preset_from_name(name);
    if (!id) throw ConfigError("unknown preset: " + name);
    s.preset = preset(*id);
    s.problem = s.preset->problem;
    s.snapshot_times = s.preset->snapshot_times;
  } else {
    s.problem.model = burgers_hopf_model();
    s.problem.topo = topography_by_name("zero");
  }

  if (cfg.has("model") || cfg.has("f_expr")) s.problem.model = model_from_config(cfg);
  s.problem.topo = topo_from_config(cfg, s.problem.topo);

  s.problem.x_l = cfg.get_double_or("x_l", s.problem.x_l);
  s.problem.x_r = cfg.get_double_or("x_r", s.problem.x_r);
  s.problem.horizon = cfg.get_double_or("T", s.problem.horizon);
  if (cfg.has("u0_expr"))
    s.problem.initial = compile_expression(cfg.get_string("u0_expr"), "x");
  if (cfg.has("ul_expr"))
    s.problem.left_bc = compile_expression(cfg.get_string("ul_expr"), "t");
  if (cfg.has("ur_expr"))
    s.problem.right_bc = compile_expression(cfg.get_string("ur_expr"), "t");
  if (cfg.has("u0_jumps")) s.problem.initial_breakpoints = cfg.get_array_or("u0_jumps");
  if (!s.problem.initial) throw ConfigError("no initial data: set u0_expr or a preset");
  if (!s.problem.left_bc) s.problem.left_bc = [](double) { return 0.0; };
  if (!s.problem.right_bc) s.problem.right_bc = [](double) { return 0.0; };

  // Discretization: dx wins over n_cells; preset default otherwise.
  std::optional<double> explicit_dt;
  const std::string dt_mode = cfg.get_string_or("dt_mode", cfg.has("dt") ? "explicit" : "adaptive");
  if (dt_mode == "explicit") {
    if (!cfg.has("dt")) throw ConfigError("dt_mode = \"explicit\" requires dt");
    explicit_dt = cfg.get_double("dt");
    s.policy = StepPolicy::explicit_dt_policy(*explicit_dt);
  } else if (dt_mode == "paper_bound") {
    s.policy = StepPolicy::paper_bound_policy(cfg.get_double_or("cfl", 1.0));
  } else if (dt_mode == "adaptive") {
    s.policy = StepPolicy::adaptive_policy(cfg.get_double_or("safety", 0.9),
                                           cfg.get_double_or("dt_max", 1e9));
  } else {
    throw ConfigError("unknown dt_mode: " + dt_mode);
  }

  if (cfg.has("dx")) {
    s.disc = Discretization::uniform(s.problem.x_l, s.problem.x_r, cfg.get_double("dx"),
                                     explicit_dt);
  } else {
    const long n = cfg.get_long_or("n_cells", s.preset ? s.preset->default_cells : 100);
    s.disc = Discretization::with_cells(s.problem.x_l, s.problem.x_r, n, explicit_dt);
  }

  const std::string scheme = cfg.get_string_or("scheme", "well_balanced");
  if (scheme == "well_balanced") s.scheme = SchemeKind::well_balanced;
  else if (scheme == "standard") s.scheme = SchemeKind::standard;
  else throw ConfigError("unknown scheme: " + scheme);

  if (cfg.has("snapshot_times")) s.snapshot_times = cfg.get_array_or("snapshot_times");
  s.history = cfg.get_bool_or("history", false);
  s.blowup_factor = cfg.get_double_or("blowup_factor", 10.0);
  s.output_dir = cfg.get_string_or("output_dir", "out");
  s.seed = cfg.get_long_or("seed", 12345);
  return s;
}

}  // namespace wbflux
