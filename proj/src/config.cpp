#include "cwl/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cwl {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

// Shortest text that reads back to the same double.
std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  // a/b fractions, handy for multiplicities
  const auto slash = t.find('/');
  if (slash != std::string::npos) {
    const double q = parse_double(t.substr(0, slash)) / parse_double(t.substr(slash + 1));
    if (!std::isfinite(q)) throw DomainError("not a finite fraction: '" + t + "'");
    return q;
  }
  double v = 0.0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v))
    throw DomainError("not a number: '" + t + "'");
  return v;
}

long long parse_integer(const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw DomainError("not an integer: '" + t + "'");
  return v;
}

int parse_int(const std::string& text) {
  const long long v = parse_integer(text);
  if (v < -1000000000LL || v > 1000000000LL) throw DomainError("integer out of range: " + text);
  return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const auto& part : split(text, ',')) out.push_back(parse_double(part));
  return out;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

struct Field {
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <class T>
Field number(std::string key, T ExperimentConfig::*m) {
  return {std::move(key),
          [m](ExperimentConfig& c, const std::string& v) {
            if constexpr (std::is_same_v<T, int>)
              c.*m = parse_int(v);
            else
              c.*m = parse_double(v);
          },
          [m](const ExperimentConfig& c) {
            if constexpr (std::is_same_v<T, int>)
              return std::to_string(c.*m);
            else
              return fmt(c.*m);
          }};
}

Field list(std::string key, std::vector<double> ExperimentConfig::*m) {
  return {std::move(key), [m](ExperimentConfig& c, const std::string& v) { c.*m = parse_list(v); },
          [m](const ExperimentConfig& c) { return fmt_list(c.*m); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    using C = ExperimentConfig;
    std::vector<Field> f;
    f.push_back({"family",
                 [](C& c, const std::string& v) {
                   c.family = family_name(parse_family(trim(v)));
                 },
                 [](const C& c) { return c.family; }});
    f.push_back(list("k", &C::k));
    f.push_back({"mode", [](C& c, const std::string& v) { c.mode = parse_mode(trim(v)); },
                 [](const C& c) { return mode_name(c.mode); }});
    f.push_back(number("radius", &C::radius));
    f.push_back(number("profile_order", &C::profile_order));
    f.push_back(number("cutoff", &C::cutoff));
    f.push_back(number("cutoff_tolerance", &C::cutoff_tolerance));
    f.push_back(number("order_a", &C::order_a));
    f.push_back(number("order_b", &C::order_b));
    f.push_back(number("sphere_resolution", &C::sphere_resolution));
    f.push_back({"times", [](C& c, const std::string& v) { c.times = TimeGrid::parse(v); },
                 [](const C& c) { return c.times.str(); }});
    f.push_back(number("conservation_tol", &C::conservation_tol));
    f.push_back(number("equipartition_tol", &C::equipartition_tol));
    f.push_back(number("equipartition_margin", &C::equipartition_margin));
    f.push_back(number("rate_factor", &C::rate_factor));
    f.push_back(number("min_r_squared", &C::min_r_squared));
    f.push_back(number("slope_slack", &C::slope_slack));
    f.push_back(number("plancherel_tol", &C::plancherel_tol));
    f.push_back(number("skew_tol", &C::skew_tol));
    f.push_back(number("diagonalization_tol", &C::diagonalization_tol));
    f.push_back(number("spectral_panel", &C::spectral_panel));
    f.push_back(number("kernel_lambdas", &C::kernel_lambdas));
    f.push_back(number("kernel_points", &C::kernel_points));
    f.push_back(number("kernel_x_max", &C::kernel_x_max));
    f.push_back(number("kernel_lambda_box", &C::kernel_lambda_box));
    f.push_back(number("kernel_tol", &C::kernel_tol));
    f.push_back(number("jacobi_tol", &C::jacobi_tol));
    f.push_back(number("density_points", &C::density_points));
    f.push_back(number("density_tol", &C::density_tol));
    f.push_back(number("table_directions", &C::table_directions));
    f.push_back(number("table_points", &C::table_points));
    f.push_back(number("table_r_max", &C::table_r_max));
    f.push_back(list("propagation_times", &C::propagation_times));
    f.push_back(number("propagation_dx", &C::propagation_dx));
    f.push_back(number("propagation_tol", &C::propagation_tol));
    f.push_back({"out", [](C& c, const std::string& v) { c.out = trim(v); }, [](const C& c) { return c.out; }});
    f.push_back({"seed",
                 [](C& c, const std::string& v) {
                   const std::string t = trim(v);
                   std::uint64_t s = 0;
                   auto res = std::from_chars(t.data(), t.data() + t.size(), s);
                   if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
                     throw DomainError("seed must be an unsigned 64-bit integer: '" + t + "'");
                   c.seed = s;
                 },
                 [](const C& c) { return std::to_string(c.seed); }});
    return f;
  }();
  return table;
}

const Field* find_field(const std::string& key) {
  for (const auto& f : fields())
    if (f.key == key) return &f;
  return nullptr;
}

std::string where(int line) { return line > 0 ? "line " + std::to_string(line) + ": " : ""; }

}  // namespace

TimeGrid TimeGrid::parse(const std::string& text) {
  const auto parts = split(trim(text), ':');
  if (parts.size() != 4) throw DomainError("time grid must be kind:t0:t1:n, got '" + trim(text) + "'");
  TimeGrid g;
  if (parts[0] == "linear")
    g.kind = Kind::linear;
  else if (parts[0] == "geometric")
    g.kind = Kind::geometric;
  else
    throw DomainError("time grid kind must be linear or geometric, got '" + parts[0] + "'");
  g.t0 = parse_double(parts[1]);
  g.t1 = parse_double(parts[2]);
  if (g.kind == Kind::linear) {
    g.step = static_cast<double>(parse_int(parts[3]));
    if (g.step < 2) throw DomainError("linear time grid needs at least two points");
  } else {
    g.step = parse_double(parts[3]);
    if (!(g.step > 1.0)) throw DomainError("geometric ratio must exceed 1");
    if (!(g.t0 > 0.0)) throw DomainError("geometric time grid must start above 0");
  }
  if (g.t1 < g.t0) throw DomainError("time grid end precedes its start");
  return g;
}

std::string TimeGrid::str() const {
  if (kind == Kind::linear)
    return "linear:" + fmt(t0) + ":" + fmt(t1) + ":" + std::to_string(static_cast<int>(step));
  return "geometric:" + fmt(t0) + ":" + fmt(t1) + ":" + fmt(step);
}

std::vector<double> TimeGrid::times() const {
  if (kind == Kind::linear) return linear_times(t0, t1, static_cast<int>(step));
  return geometric_times(t0, t1, step);
}

double TimeGrid::t_max() const { return std::max(std::abs(t0), std::abs(t1)); }

RootSystem ExperimentConfig::root_system() const { return RootSystem::build(parse_family(family), k); }

PipelineSpec ExperimentConfig::pipeline() const {
  PipelineSpec s;
  s.mode = mode;
  s.radius = radius;
  s.profile_order = profile_order;
  s.cutoff = cutoff;
  s.cutoff_tolerance = cutoff_tolerance;
  s.t_max = times.t_max();
  for (double t : propagation_times) s.t_max = std::max(s.t_max, std::abs(t));
  s.order_a = order_a;
  s.order_b = order_b;
  s.sphere_resolution = sphere_resolution;
  return s;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : fields()) out.emplace_back(f.key, f.get(cfg));
  return out;
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value, int line) {
  const Field* f = find_field(key);
  if (!f) throw ConfigError(where(line) + "unknown key '" + key + "'", line);
  try {
    f->set(cfg, value);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(where(line) + key + ": " + e.what(), line);
  }
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(where(line) + "expected key = value", line);
    const std::string key = trim(text.substr(0, eq));
    if (key.empty()) throw ConfigError(where(line) + "missing key", line);
    set_config_value(base, key, text.substr(eq + 1), line);
  }
  return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return parse_config(in, std::move(base));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what(), e.line());
  }
}

void apply_env_overrides(ExperimentConfig& cfg,
                         const std::function<std::optional<std::string>(const std::string&)>& lookup) {
  auto get = [&](const std::string& name) -> std::optional<std::string> {
    if (lookup) return lookup(name);
    const char* v = std::getenv(name.c_str());
    if (!v) return std::nullopt;
    return std::string(v);
  };
  for (const auto& f : fields()) {
    std::string name = "CWL_" + f.key;
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::toupper(c); });
    if (auto v = get(name)) {
      try {
        set_config_value(cfg, f.key, *v);
      } catch (const ConfigError& e) {
        throw ConfigError(name + ": " + e.what());
      }
    }
  }
}

void validate(const ExperimentConfig& cfg) {
  auto positive = [](const char* name, double v) {
    if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be positive");
  };
  positive("radius", cfg.radius);
  positive("cutoff_tolerance", cfg.cutoff_tolerance);
  positive("conservation_tol", cfg.conservation_tol);
  positive("equipartition_tol", cfg.equipartition_tol);
  positive("equipartition_margin", cfg.equipartition_margin);
  positive("rate_factor", cfg.rate_factor);
  positive("min_r_squared", cfg.min_r_squared);
  positive("slope_slack", cfg.slope_slack);
  positive("plancherel_tol", cfg.plancherel_tol);
  positive("skew_tol", cfg.skew_tol);
  positive("diagonalization_tol", cfg.diagonalization_tol);
  positive("spectral_panel", cfg.spectral_panel);
  positive("kernel_x_max", cfg.kernel_x_max);
  positive("kernel_lambda_box", cfg.kernel_lambda_box);
  positive("kernel_tol", cfg.kernel_tol);
  positive("jacobi_tol", cfg.jacobi_tol);
  positive("density_tol", cfg.density_tol);
  positive("table_r_max", cfg.table_r_max);
  positive("propagation_dx", cfg.propagation_dx);
  positive("propagation_tol", cfg.propagation_tol);
  if (cfg.cutoff < 0.0) throw ConfigError("cutoff must be 0 (automatic) or positive");
  if (cfg.profile_order < 1) throw ConfigError("profile_order must be at least 1");
  if (cfg.order_a < 2 || cfg.order_b < 2) throw ConfigError("Gauss orders must be at least 2");
  if (cfg.sphere_resolution < 4) throw ConfigError("sphere_resolution must be at least 4");
  if (cfg.kernel_lambdas < 1 || cfg.kernel_points < 1) throw ConfigError("kernel table needs points");
  if (cfg.density_points < 1 || cfg.table_points < 2 || cfg.table_directions < 1)
    throw ConfigError("density sampling needs points");
  if (cfg.out.empty()) throw ConfigError("out must name a directory");
  for (double v : cfg.k)
    if (v < 0.0) throw ConfigError("multiplicities must be nonnegative");
  const FamilySpec spec = parse_family(cfg.family);
  const int orbits = orbit_count(spec);
  const bool broadcast = spec.family == Family::A1Product && cfg.k.size() == 1;
  if (static_cast<int>(cfg.k.size()) != orbits && !broadcast)
    throw ConfigError(cfg.family + " takes " + std::to_string(orbits) + " multiplicities, got " +
                      std::to_string(cfg.k.size()));
  const RootSystem rs = cfg.root_system();
  if (cfg.mode == DataMode::rank_one_transform && rs.dim() != 1)
    throw ConfigError("mode rank-one-transform needs a rank-one family, " + cfg.family + " has rank " +
                      std::to_string(rs.dim()));
  if (rs.dim() > 3) throw ConfigError("families of rank above 3 are not supported");
}

std::string render_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  for (const auto& [k, v] : config_entries(cfg)) os << k << " = " << v << '\n';
  return os.str();
}

}  // namespace cwl
