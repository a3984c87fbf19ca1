#include "kgl/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "kgl/error.hpp"

namespace kgl {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string s) {
  const auto notspace = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
  s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
  return s;
}

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double as_double(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) throw ConfigError(key + ": expected a number, got '" + text + "'");
  return v;
}

int as_int(const std::string& key, const std::string& text) {
  const double v = as_double(key, text);
  if (v != static_cast<int>(v)) throw ConfigError(key + ": expected an integer, got '" + text + "'");
  return static_cast<int>(v);
}

bool as_bool(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::vector<double> as_list(const std::string& key, const std::string& text) {
  std::string s = trim(text);
  if (!s.empty() && s.front() == '[') s.erase(s.begin());
  if (!s.empty() && s.back() == ']') s.pop_back();
  std::vector<double> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(as_double(key, item));
  }
  return out;
}

std::string list_text(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + g17(v[i]);
  return s;
}

template <class Fn>
auto named(const std::string& key, Fn parse) {
  try {
    return parse();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

struct Key {
  std::string name;
  std::function<void(SweepConfig&, const std::string&)> set;
  std::function<std::string(const SweepConfig&)> get;
};

#define KGL_DOUBLE(key, field)                                                              \
  Key {                                                                                     \
    key, [](SweepConfig& c, const std::string& v) { c.field = as_double(key, v); },         \
        [](const SweepConfig& c) { return g17(c.field); }                                   \
  }
#define KGL_INT(key, field)                                                                 \
  Key {                                                                                     \
    key, [](SweepConfig& c, const std::string& v) { c.field = as_int(key, v); },            \
        [](const SweepConfig& c) { return std::to_string(c.field); }                        \
  }
#define KGL_LIST(key, field)                                                                \
  Key {                                                                                     \
    key, [](SweepConfig& c, const std::string& v) { c.field = as_list(key, v); },           \
        [](const SweepConfig& c) { return list_text(c.field); }                             \
  }

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      {"run.study", [](SweepConfig& c, const std::string& v) { c.study = named("run.study", [&] { return parse_study(trim(v)); }); },
       [](const SweepConfig& c) { return to_string(c.study); }},
      KGL_LIST("run.epsilons", epsilons),
      KGL_DOUBLE("run.horizon", horizon),
      KGL_DOUBLE("run.samples_per_unit", samples_per_unit),
      KGL_DOUBLE("run.t_min", t_min),
      KGL_INT("run.t_count", t_count),
      KGL_DOUBLE("run.window_delta", window_delta),
      KGL_DOUBLE("run.dominance_factor", dominance_factor),
      {"run.pairing", [](SweepConfig& c, const std::string& v) { c.growth_pairing = named("run.pairing", [&] { return parse_pairing(trim(v)); }); },
       [](const SweepConfig& c) { return to_string(c.growth_pairing); }},
      KGL_DOUBLE("run.lambda_kg", lambda_kg),
      KGL_DOUBLE("run.lambda_profile", lambda_profile),
      {"run.scheme", [](SweepConfig& c, const std::string& v) { c.policy.scheme = named("run.scheme", [&] { return parse_scheme(trim(v)); }); },
       [](const SweepConfig& c) { return to_string(c.policy.scheme); }},
      KGL_DOUBLE("run.h0", policy.base_step),
      {"run.dealias", [](SweepConfig& c, const std::string& v) { c.policy.dealias = named("run.dealias", [&] { return parse_dealias(trim(v)); }); },
       [](const SweepConfig& c) {
         switch (c.policy.dealias) {
           case Dealias::automatic: return std::string("auto");
           case Dealias::none: return std::string("none");
           case Dealias::nyquist: return std::string("nyquist");
           case Dealias::two_thirds: return std::string("two-thirds");
         }
         return std::string("?");
       }},
      KGL_DOUBLE("run.nls_step", nls_step),
      KGL_LIST("run.gammas", gammas),
      KGL_DOUBLE("run.drift_tolerance", drift_tolerance),
      KGL_INT("run.jobs", jobs),
      {"run.equation", [](SweepConfig& c, const std::string& v) { c.solve_equation = named("run.equation", [&] { return parse_equation(trim(v)); }); },
       [](const SweepConfig& c) { return to_string(c.solve_equation); }},
      KGL_DOUBLE("run.epsilon", solve_epsilon),
      KGL_INT("grid.dim", dim),
      KGL_DOUBLE("grid.extent", extent),
      KGL_INT("grid.points", points),
      {"data.family", [](SweepConfig& c, const std::string& v) { c.data.family = named("data.family", [&] { return parse_family(trim(v)); }); },
       [](const SweepConfig& c) { return to_string(c.data.family); }},
      KGL_DOUBLE("data.amplitude", data.amplitude),
      KGL_DOUBLE("data.width", data.width),
      KGL_LIST("data.center", data.center),
      KGL_DOUBLE("data.velocity_amplitude", data.velocity_amplitude),
      KGL_LIST("data.velocity_center", data.velocity_center),
      KGL_DOUBLE("data.delta0", data.delta0),
      KGL_DOUBLE("data.a0", data.a0),
      KGL_DOUBLE("data.b0", data.b0),
      KGL_DOUBLE("data.mollify", data.mollify),
      KGL_DOUBLE("data.alpha", data.alpha),
      KGL_DOUBLE("data.cutoff", data.cutoff),
      {"data.v1", [](SweepConfig& c, const std::string& v) { c.data.v1 = trim(v); },
       [](const SweepConfig& c) { return c.data.v1; }},
      {"injection.enabled", [](SweepConfig& c, const std::string& v) { c.injection.enabled = as_bool("injection.enabled", v); },
       [](const SweepConfig& c) { return std::string(c.injection.enabled ? "true" : "false"); }},
      KGL_DOUBLE("injection.coefficient", injection.coefficient),
      KGL_DOUBLE("injection.exponent", injection.exponent),
  };
  return table;
}

#undef KGL_DOUBLE
#undef KGL_INT
#undef KGL_LIST

const Key* find_key(const std::string& name) {
  for (const auto& k : keys()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

SweepConfig materialize(const pt::ptree& tree, const std::vector<std::string>& overrides) {
  std::vector<std::pair<std::string, std::string>> values;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' must appear inside a [section]");
    for (const auto& [key, node] : body) {
      const std::string full = section + "." + key;
      if (!find_key(full)) throw ConfigError("unknown key '" + full + "'");
      values.emplace_back(full, node.data());
    }
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + o + "' is not key=value");
    const std::string key = trim(o.substr(0, eq));
    if (!find_key(key)) throw ConfigError("unknown key '" + key + "'");
    values.emplace_back(key, o.substr(eq + 1));
  }
  const bool has_study = std::any_of(values.begin(), values.end(), [](const auto& kv) { return kv.first == "run.study"; });
  if (!has_study) throw ConfigError("missing required key 'run.study'");

  SweepConfig c;
  for (const auto& [key, value] : values) find_key(key)->set(c, value);
  c.validate();
  return c;
}

}  // namespace

SweepConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return materialize(tree, overrides);
}

SweepConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), overrides);
}

std::vector<std::pair<std::string, std::string>> config_echo(const SweepConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : keys()) out.emplace_back(k.name, k.get(config));
  return out;
}

Study parse_study(const std::string& name) {
  for (Study s : {Study::rate_kg_vs_sw, Study::rate_sw_vs_nls, Study::growth_in_time, Study::sharpness_chirped,
                  Study::sharpness_rough, Study::wave_diagnostics, Study::solve}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown study '" + name + "'");
}

EquationKind parse_equation(const std::string& name) {
  for (EquationKind k : {EquationKind::unit_kg, EquationKind::kg_eps, EquationKind::schrodinger_wave, EquationKind::nls}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown equation '" + name + "'");
}

Scheme parse_scheme(const std::string& name) {
  for (Scheme s : {Scheme::strang_trig, Scheme::rescaled_frame, Scheme::rk4_oracle}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown scheme '" + name + "'");
}

Dealias parse_dealias(const std::string& name) {
  if (name == "auto") return Dealias::automatic;
  if (name == "none") return Dealias::none;
  if (name == "nyquist") return Dealias::nyquist;
  if (name == "two-thirds") return Dealias::two_thirds;
  throw ConfigError("unknown dealias mode '" + name + "'");
}

DataFamily parse_family(const std::string& name) {
  for (DataFamily f : {DataFamily::gaussian, DataFamily::chirped_annulus, DataFamily::rough_sobolev,
                       DataFamily::lowpass_of, DataFamily::preset_v1}) {
    if (to_string(f) == name) return f;
  }
  throw ConfigError("unknown data family '" + name + "'");
}

Pairing parse_pairing(const std::string& name) {
  for (Pairing p : {Pairing::kg_vs_sw, Pairing::kg_vs_nls, Pairing::sw_vs_nls}) {
    if (to_string(p) == name) return p;
  }
  throw ConfigError("unknown pairing '" + name + "'");
}

}  // namespace kgl
