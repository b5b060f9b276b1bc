#include "ladder/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ladder/errors.hpp"

namespace ladder {

int ModelConfig::occupation_cap() const { return max_occupation ? *max_occupation : std::min(particles, 4); }

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Shortest text that parses back to the same double.
std::string format_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double parse_double(const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

long long parse_integer(const std::string& raw) {
  const std::string s = trim(raw);
  long long v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size()) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

bool parse_bool(const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("not a boolean: '" + s + "'");
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& raw, Parse parse) {
  std::vector<T> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(static_cast<T>(parse(item)));
  }
  return out;
}

template <typename T, typename Format>
std::string format_list(const std::vector<T>& v, Format format) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format(v[i]);
  }
  return out;
}

std::string format_int(long long v) { return std::to_string(v); }
std::string format_bool(bool v) { return v ? "true" : "false"; }

struct Field {
  std::string section;
  std::string key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;  // empty string: unset
};

// Helpers binding a member reached through `ref`, a generic accessor usable
// on both const and mutable configs.
template <typename Ref>
Field real(std::string section, std::string key, Ref ref) {
  return {section, key, [ref](RunConfig& c, const std::string& s) { ref(c) = parse_double(s); },
          [ref](const RunConfig& c) { return format_double(ref(c)); }};
}

template <typename Ref>
Field optional_real(std::string section, std::string key, Ref ref) {
  return {section, key,
          [ref](RunConfig& c, const std::string& s) {
            if (trim(s).empty()) ref(c).reset();
            else ref(c) = parse_double(s);
          },
          [ref](const RunConfig& c) {
            const auto& v = ref(c);
            return v ? format_double(*v) : std::string();
          }};
}

template <typename Ref>
Field integer(std::string section, std::string key, Ref ref) {
  return {section, key,
          [ref](RunConfig& c, const std::string& s) {
            using T = std::remove_reference_t<decltype(ref(c))>;
            ref(c) = static_cast<T>(parse_integer(s));
          },
          [ref](const RunConfig& c) { return format_int(static_cast<long long>(ref(c))); }};
}

template <typename Ref>
Field boolean(std::string section, std::string key, Ref ref) {
  return {section, key, [ref](RunConfig& c, const std::string& s) { ref(c) = parse_bool(s); },
          [ref](const RunConfig& c) { return format_bool(ref(c)); }};
}

template <typename Ref>
Field real_list(std::string section, std::string key, Ref ref) {
  return {section, key, [ref](RunConfig& c, const std::string& s) { ref(c) = parse_list<double>(s, parse_double); },
          [ref](const RunConfig& c) { return format_list(ref(c), format_double); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(integer("model", "L_s", [](auto& c) -> auto& { return c.model.rungs; }));
    f.push_back(integer("model", "N", [](auto& c) -> auto& { return c.model.particles; }));
    f.push_back({"model", "n_max",
                 [](RunConfig& c, const std::string& s) {
                   if (trim(s).empty()) c.model.max_occupation.reset();
                   else c.model.max_occupation = static_cast<int>(parse_integer(s));
                 },
                 [](const RunConfig& c) {
                   return c.model.max_occupation ? format_int(*c.model.max_occupation) : std::string();
                 }});
    f.push_back(real("model", "J_par", [](auto& c) -> auto& { return c.model.hamiltonian.leg_hopping; }));
    f.push_back(real("model", "U", [](auto& c) -> auto& { return c.model.hamiltonian.interaction; }));
    f.push_back({"model", "boundary",
                 [](RunConfig& c, const std::string& s) { c.model.hamiltonian.boundary = boundary_from_string(trim(s)); },
                 [](const RunConfig& c) { return to_string(c.model.hamiltonian.boundary); }});
    f.push_back(integer("model", "points_per_site", [](auto& c) -> auto& { return c.model.points_per_site; }));

    f.push_back(real("propagation", "dt", [](auto& c) -> auto& { return c.propagation.dt; }));
    f.push_back(integer("propagation", "krylov_dim", [](auto& c) -> auto& { return c.propagation.krylov_dim; }));
    f.push_back(real("propagation", "step_tol", [](auto& c) -> auto& { return c.propagation.step_tol; }));
    f.push_back(real("propagation", "dt_min", [](auto& c) -> auto& { return c.propagation.dt_min; }));
    f.push_back(
        real("propagation", "max_bias_step", [](auto& c) -> auto& { return c.propagation.max_bias_step; }));
    f.push_back(
        integer("propagation", "sample_stride", [](auto& c) -> auto& { return c.propagation.sample_stride; }));
    f.push_back(real("propagation", "max_time", [](auto& c) -> auto& { return c.propagation.max_time; }));

    f.push_back({"sweep", "direction",
                 [](RunConfig& c, const std::string& s) { c.sweep.direction = direction_from_string(trim(s)); },
                 [](const RunConfig& c) { return to_string(c.sweep.direction); }});
    f.push_back(real("sweep", "delta0", [](auto& c) -> auto& { return c.sweep.bias_magnitude; }));
    f.push_back(optional_real("sweep", "alpha", [](auto& c) -> auto& { return c.sweep.alpha; }));
    f.push_back(
        real_list("sweep", "alpha_grid", [](auto& c) -> auto& { return c.sweep.alpha_grid; }));
    f.push_back(optional_real("sweep", "r", [](auto& c) -> auto& { return c.sweep.rescale; }));
    f.push_back(integer("sweep", "hold_periods", [](auto& c) -> auto& { return c.sweep.hold_periods; }));
    f.push_back(
        integer("sweep", "samples_per_period", [](auto& c) -> auto& { return c.sweep.samples_per_period; }));
    f.push_back(real("sweep", "prominence", [](auto& c) -> auto& { return c.sweep.prominence; }));
    f.push_back(boolean("sweep", "momentum", [](auto& c) -> auto& { return c.sweep.momentum; }));
    f.push_back(boolean("sweep", "entropy", [](auto& c) -> auto& { return c.sweep.entropy; }));

    f.push_back(
        optional_real("quench", "delta_f", [](auto& c) -> auto& { return c.quench.final_bias; }));
    f.push_back(real_list("quench", "delta_f_grid",
                          [](auto& c) -> auto& { return c.quench.final_bias_grid; }));
    f.push_back(real("quench", "t_max", [](auto& c) -> auto& { return c.quench.duration; }));
    f.push_back(real("quench", "prominence", [](auto& c) -> auto& { return c.quench.prominence; }));
    f.push_back(real("quench", "low_density_threshold",
                     [](auto& c) -> auto& { return c.quench.low_density_threshold; }));
    f.push_back(boolean("quench", "momentum", [](auto& c) -> auto& { return c.quench.momentum; }));
    f.push_back(boolean("quench", "entropy", [](auto& c) -> auto& { return c.quench.entropy; }));

    f.push_back({"doublewell", "n",
                 [](RunConfig& c, const std::string& s) { c.doublewell.particles = parse_list<int>(s, parse_integer); },
                 [](const RunConfig& c) { return format_list(c.doublewell.particles, format_int); }});
    f.push_back(real("doublewell", "U", [](auto& c) -> auto& { return c.doublewell.interaction; }));
    f.push_back(real("doublewell", "delta0", [](auto& c) -> auto& { return c.doublewell.bias_magnitude; }));
    f.push_back(real_list("doublewell", "inverse_rate_grid",
                          [](auto& c) -> auto& { return c.doublewell.inverse_rate_grid; }));
    f.push_back(boolean("doublewell", "integrate", [](auto& c) -> auto& { return c.doublewell.integrate; }));

    f.push_back(real_list("thermal", "delta_f_grid",
                          [](auto& c) -> auto& { return c.thermal.final_bias_grid; }));
    f.push_back({"thermal", "energies_from",
                 [](RunConfig& c, const std::string& s) {
                   if (trim(s).empty()) c.thermal.energies_from.reset();
                   else c.thermal.energies_from = trim(s);
                 },
                 [](const RunConfig& c) {
                   return c.thermal.energies_from ? c.thermal.energies_from->string() : std::string();
                 }});
    f.push_back(integer("thermal", "dense_cap", [](auto& c) -> auto& { return c.thermal.dense_cap; }));
    f.push_back(real("thermal", "tol", [](auto& c) -> auto& { return c.thermal.tol; }));
    f.push_back(boolean("thermal", "ideal_gas", [](auto& c) -> auto& { return c.thermal.ideal_gas; }));

    f.push_back(integer("run", "seed", [](auto& c) -> auto& { return c.run.seed; }));
    f.push_back(integer("run", "threads", [](auto& c) -> auto& { return c.run.threads; }));
    f.push_back({"run", "out", [](RunConfig& c, const std::string& s) { c.run.out = trim(s); },
                 [](const RunConfig& c) { return c.run.out.string(); }});
    f.push_back(real("run", "initial_bias", [](auto& c) -> auto& { return c.run.initial_bias; }));
    f.push_back(real("run", "ground_state_tol", [](auto& c) -> auto& { return c.run.ground_state_tol; }));
    return f;
  }();
  return table;
}

const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : fields())
    if (f.section == section && f.key == key) return &f;
  return nullptr;
}

void check_sweep_rate(const RunConfig& c, double alpha, const std::string& name, std::vector<std::string>& errors) {
  if (!std::isfinite(alpha) || alpha == 0.0) {
    errors.push_back("sweep." + name + ": rate must be finite and nonzero");
    return;
  }
  // Inverse sweeps run from Delta0 < 0 with alpha > 0, ground-state sweeps
  // the other way round.
  const bool inverse = c.sweep.direction == SweepDirection::Inverse;
  if (inverse && alpha < 0.0) errors.push_back("sweep." + name + ": inverse sweeps need alpha > 0");
  if (!inverse && alpha > 0.0) errors.push_back("sweep." + name + ": ground-state sweeps need alpha < 0");
}

}  // namespace

bool operator==(const RunConfig& a, const RunConfig& b) { return serialize(a) == serialize(b); }

std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> e;
  const auto& m = c.model;
  if (m.rungs < 1) e.push_back("model.L_s: must be at least 1");
  if (m.particles < 1) e.push_back("model.N: must be at least 1");
  if (m.max_occupation && *m.max_occupation < 1) e.push_back("model.n_max: must be at least 1");
  if (m.rungs >= 1 && m.particles >= 1 && m.occupation_cap() >= 1 &&
      2LL * m.rungs * m.occupation_cap() < m.particles)
    e.push_back("model.n_max: 2 L_s n_max < N, no state fits");
  if (m.rungs >= 1) {
    try {
      m.hamiltonian.validate(LadderGeometry{m.rungs});
    } catch (const std::exception& ex) {
      e.push_back(std::string("model: ") + ex.what());
    }
  }
  if (m.points_per_site < 1) e.push_back("model.points_per_site: must be at least 1");

  try {
    c.propagation.validate();
  } catch (const std::exception& ex) {
    e.push_back(std::string("propagation: ") + ex.what());
  }

  const auto& s = c.sweep;
  if (!(s.bias_magnitude > 0.0) || !std::isfinite(s.bias_magnitude)) e.push_back("sweep.delta0: must be positive");
  if (s.alpha) check_sweep_rate(c, *s.alpha, "alpha", e);
  for (double a : s.alpha_grid) check_sweep_rate(c, a, "alpha_grid", e);
  {
    std::vector<double> mags;
    for (double a : s.alpha_grid) mags.push_back(std::abs(a));
    std::sort(mags.begin(), mags.end());
    if (std::adjacent_find(mags.begin(), mags.end()) != mags.end()) e.push_back("sweep.alpha_grid: repeated rate");
  }
  if (s.rescale && !(*s.rescale >= 1.0)) e.push_back("sweep.r: must be at least 1");
  if (s.hold_periods < 1) e.push_back("sweep.hold_periods: must be at least 1");
  if (s.samples_per_period < 4) e.push_back("sweep.samples_per_period: must be at least 4");
  if (!(s.prominence >= 0.0)) e.push_back("sweep.prominence: must be non-negative");

  const auto& q = c.quench;
  if (q.final_bias && !std::isfinite(*q.final_bias)) e.push_back("quench.delta_f: must be finite");
  for (double d : q.final_bias_grid)
    if (!std::isfinite(d)) e.push_back("quench.delta_f_grid: entries must be finite");
  if (!(q.duration > 0.0) || !std::isfinite(q.duration)) e.push_back("quench.t_max: must be positive");
  if (!(q.prominence >= 0.0)) e.push_back("quench.prominence: must be non-negative");

  const auto& d = c.doublewell;
  for (int n : d.particles)
    if (n < 1) e.push_back("doublewell.n: particle numbers must be at least 1");
  if (!(d.interaction > 0.0)) e.push_back("doublewell.U: must be positive");
  if (!(d.bias_magnitude > 0.0) || !std::isfinite(d.bias_magnitude)) e.push_back("doublewell.delta0: must be positive");
  for (double x : d.inverse_rate_grid)
    if (!(x > 0.0) || !std::isfinite(x)) e.push_back("doublewell.inverse_rate_grid: entries must be positive");

  const auto& t = c.thermal;
  for (double x : t.final_bias_grid)
    if (!std::isfinite(x)) e.push_back("thermal.delta_f_grid: entries must be finite");
  if (t.dense_cap < 1) e.push_back("thermal.dense_cap: must be positive");
  if (!(t.tol > 0.0)) e.push_back("thermal.tol: must be positive");

  const auto& r = c.run;
  if (r.threads < 0) e.push_back("run.threads: must be non-negative");
  if (r.out.empty()) e.push_back("run.out: must not be empty");
  if (!(r.initial_bias > 0.0)) e.push_back("run.initial_bias: must be positive (inf allowed)");
  if (!(r.ground_state_tol > 0.0)) e.push_back("run.ground_state_tol: must be positive");
  return e;
}

RunConfig parse_config_text(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& ex) {
    throw ConfigError(std::string("config: ") + ex.what());
  }

  RunConfig config;
  std::vector<std::string> errors;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      errors.push_back("'" + section + "': key outside any section");
      continue;
    }
    for (const auto& [key, value] : body) {
      const Field* f = find_field(section, key);
      if (!f) {
        errors.push_back(section + "." + key + ": unknown key");
        continue;
      }
      try {
        f->set(config, value.data());
      } catch (const std::exception& ex) {
        errors.push_back(section + "." + key + ": " + ex.what());
      }
    }
  }
  for (auto& v : validate(config)) errors.push_back(std::move(v));
  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& err : errors) msg += "\n  " + err;
    throw ConfigError(msg);
  }
  return config;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize(const RunConfig& config) {
  std::string out;
  std::string current;
  for (const auto& f : fields()) {
    if (f.section != current) {
      if (!current.empty()) out += "\n";
      out += "[" + f.section + "]\n";
      current = f.section;
    }
    out += f.key + " = " + f.get(config) + "\n";
  }
  return out;
}

}  // namespace ladder
