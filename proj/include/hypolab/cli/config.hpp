#pragma once

#include "../decaylab.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <functional>
#include <set>
#include <sstream>

namespace hypolab::cli {

using decaylab::ExperimentSpec;

namespace detail {

inline std::string trim(std::string s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep)
{
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

inline double to_double(const std::string& key, const std::string& s)
{
  const auto t = trim(s);
  double v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) throw ConfigError(key + ": '" + s + "' is not a number");
  return v;
}

inline long to_long(const std::string& key, const std::string& s)
{
  const auto t = trim(s);
  long v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) throw ConfigError(key + ": '" + s + "' is not an integer");
  return v;
}

inline std::uint64_t to_u64(const std::string& key, const std::string& s)
{
  const auto t = trim(s);
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) throw ConfigError(key + ": '" + s + "' is not a nonnegative integer");
  return v;
}

inline bool to_bool(const std::string& key, const std::string& s)
{
  const auto t = trim(s);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(key + ": '" + s + "' is not a boolean");
}

inline std::vector<double> to_doubles(const std::string& key, const std::string& s)
{
  std::vector<double> out;
  for (const auto& p : split(s, ',')) out.push_back(to_double(key, p));
  return out;
}

inline std::vector<int> to_ints(const std::string& key, const std::string& s)
{
  std::vector<int> out;
  for (const auto& p : split(s, ',')) out.push_back(static_cast<int>(to_long(key, p)));
  return out;
}

inline std::string num(double v) { return decaylab::csv_number(v); }

template <class T>
std::string join(const std::vector<T>& v)
{
  std::string out;
  for (const auto& x : v) {
    if (!out.empty()) out += ", ";
    if constexpr (std::is_floating_point_v<T>)
      out += num(x);
    else
      out += std::to_string(x);
  }
  return out;
}

inline std::string tanh_str(const std::vector<models::TanhCoupling>& ts)
{
  std::string out;
  for (const auto& t : ts) {
    if (!out.empty()) out += ", ";
    out += t.field + ":" + num(t.amplitude) + ":" + num(t.scale) + ":" + std::to_string(t.range) + ":" + std::to_string(t.arg_coord);
  }
  return out;
}

/// field:amplitude[:scale[:range[:arg_coord]]], comma separated.
inline std::vector<models::TanhCoupling> parse_tanh(const std::string& s)
{
  std::vector<models::TanhCoupling> out;
  for (const auto& item : split(s, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() < 2 || parts.size() > 5) throw ConfigError("interaction.tanh: expected field:amplitude[:scale[:range[:arg_coord]]], got '" + item + "'");
    models::TanhCoupling t;
    t.field = parts[0];
    t.amplitude = to_double("interaction.tanh", parts[1]);
    if (parts.size() > 2) t.scale = to_double("interaction.tanh", parts[2]);
    if (parts.size() > 3) t.range = static_cast<int>(to_long("interaction.tanh", parts[3]));
    if (parts.size() > 4) t.arg_coord = static_cast<int>(to_long("interaction.tanh", parts[4]));
    out.push_back(t);
  }
  return out;
}

/// x:y:value triples, comma separated.
inline std::map<std::pair<int, int>, double> parse_G(const std::string& s)
{
  std::map<std::pair<int, int>, double> out;
  for (const auto& item : split(s, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 3) throw ConfigError("interaction.G: expected x:y:value, got '" + item + "'");
    out[{static_cast<int>(to_long("interaction.G", parts[0])), static_cast<int>(to_long("interaction.G", parts[1]))}] =
        to_double("interaction.G", parts[2]);
  }
  return out;
}

inline std::string G_str(const std::map<std::pair<int, int>, double>& g)
{
  std::string out;
  for (const auto& [k, v] : g) {
    if (!out.empty()) out += ", ";
    out += std::to_string(k.first) + ":" + std::to_string(k.second) + ":" + num(v);
  }
  return out;
}

}  // namespace detail

enum class Command { simulate, experiment };

/// A config key: where it lives, how it is parsed into the spec and how it is written back.
struct Key
{
  std::string section;
  std::string name;
  bool experiment_only;
  std::function<void(ExperimentSpec&, const std::string&)> set;
  std::function<std::string(const ExperimentSpec&)> get;  // empty: never written to the resolved config
};

inline const std::vector<Key>& keys()
{
  using namespace detail;
  using S = ExperimentSpec;
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    auto dbl = [&](std::string sec, std::string name, bool exp, double S::*field) {
      const std::string full = sec + "." + name;
      k.push_back({sec, name, exp, [=](S& s, const std::string& v) { s.*field = to_double(full, v); },
                   [=](const S& s) { return num(s.*field); }});
    };
    auto integer = [&](std::string sec, std::string name, bool exp, int S::*field) {
      const std::string full = sec + "." + name;
      k.push_back({sec, name, exp, [=](S& s, const std::string& v) { s.*field = static_cast<int>(to_long(full, v)); },
                   [=](const S& s) { return std::to_string(s.*field); }});
    };
    auto ints = [&](std::string sec, std::string name, bool exp, std::vector<int> S::*field) {
      const std::string full = sec + "." + name;
      k.push_back({sec, name, exp, [=](S& s, const std::string& v) { s.*field = to_ints(full, v); },
                   [=](const S& s) { return join(s.*field); }});
    };
    auto dbls = [&](std::string sec, std::string name, bool exp, std::vector<double> S::*field) {
      const std::string full = sec + "." + name;
      k.push_back({sec, name, exp, [=](S& s, const std::string& v) { s.*field = to_doubles(full, v); },
                   [=](const S& s) { return join(s.*field); }});
    };

    integer("lattice", "sites", false, &S::sites);
    integer("lattice", "dim", false, &S::lattice_dim);
    k.push_back({"lattice", "boundary", false,
                 [](S& s, const std::string& v) {
                   const auto t = trim(v);
                   if (t == "free")
                     s.boundary = models::Boundary::free;
                   else if (t == "periodic")
                     s.boundary = models::Boundary::periodic;
                   else
                     throw ConfigError("lattice.boundary must be free or periodic");
                 },
                 [](const S& s) { return models::to_string(s.boundary); }});
    k.push_back({"interaction", "gamma", false, [](S& s, const std::string& v) { s.interaction.gamma = to_double("interaction.gamma", v); },
                 [](const S& s) { return num(s.interaction.gamma); }});
    k.push_back({"interaction", "G", false,
                 [](S& s, const std::string& v) {
                   if (trim(v).empty())
                     s.interaction.G_explicit.reset();
                   else
                     s.interaction.G_explicit = parse_G(v);
                 },
                 [](const S& s) { return s.interaction.G_explicit ? G_str(*s.interaction.G_explicit) : std::string(); }});
    k.push_back({"interaction", "tanh", false, [](S& s, const std::string& v) { s.interaction.tanh = parse_tanh(v); },
                 [](const S& s) { return tanh_str(s.interaction.tanh); }});

    k.push_back({"ensemble", "n_paths", false,
                 [](S& s, const std::string& v) { s.ensemble.n_paths = static_cast<std::size_t>(to_u64("ensemble.n_paths", v)); },
                 [](const S& s) { return std::to_string(s.ensemble.n_paths); }});
    k.push_back({"ensemble", "dt", false, [](S& s, const std::string& v) { s.ensemble.dt = to_double("ensemble.dt", v); },
                 [](const S& s) { return num(s.ensemble.dt); }});
    k.push_back({"ensemble", "t_max", false, [](S& s, const std::string& v) { s.ensemble.t_max = to_double("ensemble.t_max", v); },
                 [](const S& s) { return num(s.ensemble.t_max); }});
    k.push_back({"ensemble", "checkpoints", false,
                 [](S& s, const std::string& v) { s.ensemble.checkpoints = to_doubles("ensemble.checkpoints", v); },
                 [](const S& s) { return join(s.ensemble.checkpoints); }});
    k.push_back({"ensemble", "seed", false, [](S& s, const std::string& v) { s.ensemble.seed = to_u64("ensemble.seed", v); },
                 [](const S& s) { return std::to_string(s.ensemble.seed); }});
    k.push_back({"ensemble", "scheme", false, [](S& s, const std::string& v) { s.ensemble.scheme = simulate::parse_scheme(trim(v)); },
                 [](const S& s) { return simulate::scheme_name(s.ensemble.scheme); }});
    k.push_back({"ensemble", "cap", false, [](S& s, const std::string& v) { s.ensemble.cap = to_double("ensemble.cap", v); },
                 [](const S& s) { return num(s.ensemble.cap); }});
    k.push_back({"ensemble", "common_noise", false,
                 [](S& s, const std::string& v) { s.ensemble.common_noise = to_bool("ensemble.common_noise", v); },
                 [](const S& s) { return std::string(s.ensemble.common_noise ? "true" : "false"); }});
    // execution only: results do not depend on it, so it stays out of the resolved config
    k.push_back({"ensemble", "workers", false,
                 [](S& s, const std::string& v) { s.ensemble.workers = static_cast<unsigned>(to_u64("ensemble.workers", v)); }, {}});

    dbls("initial", "x0", false, &S::x0);
    dbl("initial", "h", false, &S::h);

    k.push_back({"experiment", "test_function", true,
                 [](S& s, const std::string& v) {
                   decaylab::TestFunction::parse(trim(v));
                   s.test_function = trim(v);
                 },
                 [](const S& s) { return s.test_function; }});
    ints("experiment", "f_coords", true, &S::f_coords);
    dbls("experiment", "f_weights", true, &S::f_weights);
    ints("experiment", "f_sites", true, &S::f_sites);
    k.push_back({"experiment", "claimed_m", true,
                 [](S& s, const std::string& v) {
                   if (trim(v).empty())
                     s.claimed_m.reset();
                   else
                     s.claimed_m = to_double("experiment.claimed_m", v);
                 },
                 [](const S& s) { return s.claimed_m ? num(*s.claimed_m) : std::string(); }});
    k.push_back({"experiment", "fit_rate", true, [](S& s, const std::string& v) { s.fit_rate = to_bool("experiment.fit_rate", v); },
                 [](const S& s) { return std::string(s.fit_rate ? "true" : "false"); }});
    dbl("experiment", "t_min", true, &S::t_min);
    dbl("experiment", "bound_factor", true, &S::bound_factor);
    dbl("experiment", "ladder_ratio", true, &S::ladder_ratio);
    integer("experiment", "max_j", true, &S::max_j);
    k.push_back({"experiment", "part", true, [](S& s, const std::string& v) { s.part = trim(v); }, [](const S& s) { return s.part; }});
    dbl("experiment", "bs_a", true, &S::bs_a);
    dbl("experiment", "bs_b", true, &S::bs_b);
    dbl("experiment", "bs_c", true, &S::bs_c);
    dbl("experiment", "bs_d", true, &S::bs_d);
    dbl("experiment", "bs_scale", true, &S::bs_scale);
    dbl("experiment", "bs_delta", true, &S::bs_delta);
    integer("experiment", "order", true, &S::order);
    dbls("experiment", "m_weights", true, &S::m_weights);
    integer("experiment", "k_fold", true, &S::k_fold);
    dbl("experiment", "window1_lo", true, &S::window1_lo);
    dbl("experiment", "window1_hi", true, &S::window1_hi);
    dbl("experiment", "window2_lo", true, &S::window2_lo);
    dbl("experiment", "window2_hi", true, &S::window2_hi);
    return k;
  }();
  return table;
}

/// Everything a run needs after merging the config file and flag overrides.
struct RunConfig
{
  Command command = Command::experiment;
  ExperimentSpec spec;
  std::string out_dir = "results";
  std::string run_id;  // empty: generated
};

/// Overrides are "section.key=value" strings applied after the file, so flags win.
/// The seed is mandatory: it must come from the file or an override.
inline RunConfig resolve(Command command, const std::string& experiment_id, const boost::property_tree::ptree& file,
                         const std::vector<std::string>& overrides)
{
  RunConfig rc;
  rc.command = command;

  // flatten into section.key -> value, overrides last
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& [sec, tree] : file) {
    if (tree.empty() && !tree.data().empty()) throw ConfigError("key '" + sec + "' outside a section");
    for (const auto& [key, val] : tree) entries.emplace_back(sec + "." + key, val.data());
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || o.find('.') > eq) throw ConfigError("override '" + o + "' is not section.key=value");
    entries.emplace_back(detail::trim(o.substr(0, eq)), o.substr(eq + 1));
  }

  std::string id = experiment_id;
  std::string model;
  for (const auto& [k, v] : entries) {
    if (k == "run.experiment") {
      if (command != Command::experiment) throw ConfigError("run.experiment is only valid for the experiment command");
      if (!id.empty() && detail::trim(v) != id) throw ConfigError("config is for experiment '" + detail::trim(v) + "', not '" + id + "'");
      id = detail::trim(v);
    }
    if (k == "model.name") model = detail::trim(v);
  }
  if (command == Command::experiment) {
    if (id.empty()) throw ConfigError("no experiment id");
    rc.spec = decaylab::default_spec(id);
  } else {
    rc.spec = ExperimentSpec{};
    rc.spec.id = "simulate";
    if (model.empty()) throw ConfigError("simulate needs model.name");
  }
  if (!model.empty() && model != rc.spec.model) {
    rc.spec.model = model;
    rc.spec.params.clear();
  }
  models::default_params(rc.spec.model);  // unknown model names fail here

  bool seed_given = false, t_max_given = false;
  for (const auto& [k, v] : entries) {
    const auto dot = k.find('.');
    const std::string sec = k.substr(0, dot), name = k.substr(dot + 1);
    if (sec == "run") {
      if (name == "experiment") continue;
      if (name == "command") {
        const char* expected = command == Command::experiment ? "experiment" : "simulate";
        if (detail::trim(v) != expected) throw ConfigError("config was resolved for the " + detail::trim(v) + " command");
        continue;
      }
      if (name == "out") rc.out_dir = detail::trim(v);
      else if (name == "run_id") rc.run_id = detail::trim(v);
      else throw ConfigError("unknown key '" + k + "'");
      continue;
    }
    if (sec == "model") {
      if (name == "name") continue;
      const auto defaults = models::default_params(rc.spec.model);
      if (!defaults.count(name)) throw ConfigError("unknown key '" + k + "': model '" + rc.spec.model + "' has no parameter '" + name + "'");
      rc.spec.params[name] = detail::to_double(k, v);
      continue;
    }
    const auto it = std::find_if(keys().begin(), keys().end(), [&](const Key& key) { return key.section == sec && key.name == name; });
    if (it == keys().end()) throw ConfigError("unknown key '" + k + "'");
    if (it->experiment_only && command != Command::experiment) throw ConfigError("key '" + k + "' is only valid for experiments");
    it->set(rc.spec, v);
    seed_given = seed_given || k == "ensemble.seed";
    t_max_given = t_max_given || k == "ensemble.t_max";
  }
  if (!seed_given) throw ConfigError("ensemble.seed is mandatory (config file or --seed)");
  if (!t_max_given && !rc.spec.ensemble.checkpoints.empty()) rc.spec.ensemble.t_max = rc.spec.ensemble.checkpoints.back();
  simulate::validate(rc.spec.ensemble);
  return rc;
}

inline boost::property_tree::ptree read_ini(const std::string& path)
{
  boost::property_tree::ptree pt;
  try {
    boost::property_tree::read_ini(path, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return pt;
}

/// Fully resolved config as INI text: every key with its effective value, model parameters included.
inline std::string resolved_text(const RunConfig& rc)
{
  std::ostringstream os;
  os << "[run]\n";
  os << "command = " << (rc.command == Command::experiment ? "experiment" : "simulate") << "\n";
  if (rc.command == Command::experiment) os << "experiment = " << rc.spec.id << "\n";
  os << "out = " << rc.out_dir << "\n";
  os << "\n[model]\nname = " << rc.spec.model << "\n";
  auto params = models::default_params(rc.spec.model);
  for (const auto& [k, v] : rc.spec.params) params[k] = v;
  for (const auto& [k, v] : params) os << k << " = " << detail::num(v) << "\n";
  std::string section;
  for (const auto& key : keys()) {
    if (!key.get) continue;
    if (key.experiment_only && rc.command != Command::experiment) continue;
    if (key.section != section) {
      section = key.section;
      os << "\n[" << section << "]\n";
    }
    os << key.name << " = " << key.get(rc.spec) << "\n";
  }
  return os.str();
}

}  // namespace hypolab::cli
