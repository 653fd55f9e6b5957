#pragma once

#include "../lyapunov.hpp"
#include "config.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>

namespace hypolab::cli {

namespace fs = std::filesystem;

/// Exit-code contract.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitGate = 3;

/// "--name value" / "--name=value" pairs into numeric parameters.
inline models::ParamMap parse_param_args(const std::vector<std::string>& args)
{
  models::ParamMap out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a.rfind("--", 0) != 0 || a.size() < 3) throw ConfigError("unexpected argument '" + a + "'");
    std::string name = a.substr(2), value;
    if (const auto eq = name.find('='); eq != std::string::npos) {
      value = name.substr(eq + 1);
      name = name.substr(0, eq);
    } else {
      if (i + 1 >= args.size()) throw ConfigError("--" + name + " needs a value");
      value = args[++i];
    }
    if (out.count(name)) throw ConfigError("--" + name + " given twice");
    out[name] = detail::to_double("--" + name, value);
  }
  return out;
}

inline std::string utc_timestamp()
{
  const auto now = std::chrono::system_clock::now();
  const auto t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%S") << '.' << std::setw(3) << std::setfill('0') << ms << 'Z';
  return os.str();
}

inline int cmd_models(std::ostream& out)
{
  for (const auto& name : models::model_names()) {
    out << name << ":";
    for (const auto& [k, v] : models::default_params(name)) out << " " << k << "=" << detail::num(v);
    out << "\n";
  }
  return kExitPass;
}

inline int cmd_algebra_verify(const std::string& model, const models::ParamMap& params, std::ostream& out, std::ostream& err)
{
  models::SiteModel m;
  try {
    m = models::make_site_model(model, params);
  } catch (const RealizationFailure& e) {
    out << "FAIL " << e.what() << "\n";
    return kExitFail;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  out << "model " << m.family << " (dim " << m.dim << ")\n";
  for (const auto& [name, f] : m.fields) out << "  " << name << " = " << f.str() << "\n";
  int failed = 0;
  for (const auto& id : m.identities) {
    out << (id.holds ? "PASS " : "FAIL ") << id.label;
    if (id.exact)
      out << "  [exact]";
    else
      out << "  [residual " << id.residual << " <= " << id.tolerance << "]";
    out << "\n";
    if (!id.holds) {
      out << "    lhs: " << id.lhs << "\n    rhs: " << id.rhs << "\n";
      ++failed;
    }
  }
  for (const auto& n : m.notes) out << "note: " << n << "\n";
  out << m.identities.size() - static_cast<std::size_t>(failed) << "/" << m.identities.size() << " identities hold\n";
  return failed == 0 ? kExitPass : kExitFail;
}

/// Targets: bs, langevin, htype, langevin-lattice (extra keys sites, gamma, periodic).
inline int cmd_lyapunov(const std::string& target, models::ParamMap params, std::ostream& out, std::ostream& err)
{
  try {
    lyapunov::DriftCertificate cert;
    if (target == "bs") {
      cert = lyapunov::named_drift(models::make_site_model("bs", params), "bracket_x");
    } else if (target == "htype") {
      cert = lyapunov::named_drift(models::make_site_model("htype", params), "gauge_W");
    } else if (target == "langevin") {
      const auto p = [&] {
        auto d = models::default_params("langevin");
        for (const auto& [k, v] : params) {
          if (!d.count(k)) throw ConfigError("langevin has no parameter '" + k + "'");
          d[k] = v;
        }
        return d;
      }();
      cert = lyapunov::langevin_rho(p.at("g"), p.at("lambda"));
    } else if (target == "langevin-lattice") {
      auto take = [&](const char* k, double def) {
        const auto it = params.find(k);
        if (it == params.end()) return def;
        const double v = it->second;
        params.erase(it);
        return v;
      };
      const int sites = static_cast<int>(take("sites", 5));
      const double gamma = take("gamma", 0.0);
      const bool periodic = take("periodic", 0.0) != 0.0;
      const auto site = models::make_site_model("langevin", params);
      models::InteractionSpec inter;
      inter.gamma = gamma;
      const auto lm = models::build_lattice(site, models::Box::chain(sites), periodic ? models::Boundary::periodic : models::Boundary::free, inter);
      const auto site_cert = lyapunov::langevin_rho(site.parameter("g"), site.parameter("lambda"));
      cert = lyapunov::lattice_drift(lm, *site_cert.rho);
    } else {
      throw ConfigError("unknown lyapunov target '" + target + "' (bs, langevin, htype, langevin-lattice)");
    }
    auto j = cert.to_json();
    j["schema_version"] = decaylab::kVerdictSchemaVersion;
    j["target"] = target;
    j["certified"] = true;
    out << j.dump(2) << "\n";
    return kExitPass;
  } catch (const SearchFailed& e) {
    err << "not certified: " << e.what() << "\n";
    return kExitFail;
  } catch (const SamplingViolation& e) {
    err << "not certified: " << e.what() << "\n";
    return kExitFail;
  } catch (const ConditionsFailed& e) {
    err << "condition gate: " << e.what() << "\n";
    return kExitGate;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

namespace detail {

/// Creates out_dir/run_id; an existing run directory is an error.
inline fs::path make_run_dir(RunConfig& rc, const std::string& stamp)
{
  if (rc.run_id.empty()) {
    std::string compact;
    for (char c : stamp)
      if (std::isalnum(static_cast<unsigned char>(c))) compact += c;
    rc.run_id = rc.spec.id + "-" + compact + "-s" + std::to_string(rc.spec.ensemble.seed);
  }
  if (rc.run_id.find_first_of("/\\") != std::string::npos || rc.run_id == "." || rc.run_id == "..")
    throw ConfigError("run id '" + rc.run_id + "' is not a plain name");
  const fs::path dir = fs::path(rc.out_dir) / rc.run_id;
  fs::create_directories(rc.out_dir);
  if (!fs::create_directory(dir)) throw ConfigError("run directory " + dir.string() + " already exists");
  return dir;
}

inline void write_text(const fs::path& p, const std::string& s)
{
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << s;
}

}  // namespace detail

struct RunLog
{
  std::ostringstream text;
  void line(const std::string& s) { text << s << "\n"; }
};

inline int cmd_simulate(RunConfig rc, const std::string& invocation, std::ostream& out, std::ostream& err)
{
  const auto stamp = utc_timestamp();
  fs::path dir;
  RunLog log;
  try {
    const auto lm = decaylab::build_model(rc.spec);
    const auto x0 = decaylab::initial_point(rc.spec, lm);
    const auto sys = simulate::to_sde(lm);
    dir = detail::make_run_dir(rc, stamp);
    detail::write_text(dir / "config.resolved", resolved_text(rc));
    log.line("invocation: " + invocation);
    log.line("started: " + stamp);
    log.line("workers: " + std::to_string(simulate::detail::worker_count(rc.spec.ensemble.workers)));
    const auto t0 = std::chrono::steady_clock::now();
    int code = kExitPass;
    try {
      const auto ens = simulate::integrate(sys, x0, rc.spec.ensemble);
      simulate::write_checkpoints_csv(ens, (dir / "checkpoints.csv").string());
      nlohmann::json meta;
      meta["schema_version"] = decaylab::kVerdictSchemaVersion;
      meta["run_id"] = rc.run_id;
      meta["model"] = rc.spec.model;
      meta["dim"] = ens.dim;
      meta["n_paths"] = ens.n_paths;
      meta["times"] = ens.times;
      meta["x0"] = x0;
      meta["dt"] = rc.spec.ensemble.dt;
      meta["seed"] = rc.spec.ensemble.seed;
      meta["scheme"] = simulate::scheme_name(rc.spec.ensemble.scheme);
      meta["timestamp"] = stamp;
      detail::write_text(dir / "ensemble.json", meta.dump(2) + "\n");
      log.line("status: ok");
    } catch (const Blowup& b) {
      nlohmann::json j{{"path", b.path()}, {"t", b.time()}, {"coordinate", b.coordinate()}, {"value", b.value()}, {"message", b.what()}};
      detail::write_text(dir / "blowup.json", j.dump(2) + "\n");
      log.line(std::string("status: blowup: ") + b.what());
      err << b.what() << "\n";
      code = kExitFail;
    }
    log.line("runtime_s: " + std::to_string(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()));
    detail::write_text(dir / "log.txt", log.text.str());
    out << dir.string() << "\n";
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (!dir.empty()) fs::remove_all(dir);
    return kExitUsage;
  }
}

inline int cmd_experiment(RunConfig rc, const std::string& invocation, std::ostream& out, std::ostream& err)
{
  const auto stamp = utc_timestamp();
  fs::path dir;
  try {
    dir = detail::make_run_dir(rc, stamp);
    detail::write_text(dir / "config.resolved", resolved_text(rc));
    RunLog log;
    log.line("invocation: " + invocation);
    log.line("started: " + stamp);
    log.line("workers: " + std::to_string(simulate::detail::worker_count(rc.spec.ensemble.workers)));

    decaylab::Verdict v;
    std::string status;
    int code = kExitPass;
    auto gated = [&](const std::string& what) {
      v = {};
      v.experiment = rc.spec.id;
      v.model = rc.spec.model;
      v.claim = "not_run";
      try {
        v.conditions = models::check_conditions(decaylab::build_model(rc.spec)).to_json();
      } catch (const Error&) {
      }
      v.add_check("conditions", false, what);
      status = "gate";
      code = kExitGate;
    };
    try {
      v = decaylab::run_experiment(rc.spec);
      status = v.pass() ? "pass" : "fail";
      code = v.pass() ? kExitPass : kExitFail;
    } catch (const ConditionsFailed& e) {
      gated(e.what());
    } catch (const LambdaTooSmall& e) {
      gated(std::string(e.what()) + " (offending index " + std::to_string(e.offending_index()) + ")");
    } catch (const Blowup& e) {
      v = {};
      v.experiment = rc.spec.id;
      v.model = rc.spec.model;
      v.add_check("no_blowup", false, e.what());
      status = "fail";
      code = kExitFail;
    }
    auto j = v.to_json();
    j["run_id"] = rc.run_id;
    j["timestamp"] = stamp;
    j["status"] = status;
    j["exit_code"] = code;
    detail::write_text(dir / "verdict.json", j.dump(2) + "\n");
    decaylab::write_series_csv(v, (dir / "series.csv").string());
    for (const auto& c : v.checks) log.line(std::string(c.pass ? "PASS " : "FAIL ") + c.name + (c.detail.empty() ? "" : ": " + c.detail));
    for (const auto& n : v.notes) log.line("note: " + n);
    log.line("status: " + status);
    log.line("runtime_s: " + std::to_string(v.runtime_s));
    detail::write_text(dir / "log.txt", log.text.str());
    out << rc.spec.id << ": " << status << " (" << dir.string() << ")\n";
    for (const auto& c : v.checks)
      if (!c.pass) out << "  FAIL " << c.name << ": " << c.detail << "\n";
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (!dir.empty()) fs::remove_all(dir);
    return kExitUsage;
  }
}

struct ReportRow
{
  std::string run_id, experiment, model, claim, status, timestamp;
  bool pass = false;
  std::optional<double> m;
  int failed_checks = 0;
};

/// Reads every run directory under `dir`; the latest verdict per experiment id wins.
inline int cmd_report(const std::string& dir, const std::string& csv_path, std::ostream& out, std::ostream& err)
{
  if (!fs::is_directory(dir)) {
    err << "error: " << dir << " is not a directory\n";
    return kExitUsage;
  }
  std::vector<fs::path> runs;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_directory()) runs.push_back(e.path());
  std::sort(runs.begin(), runs.end());

  std::map<std::string, ReportRow> latest;
  std::map<std::string, int> seen;
  for (const auto& r : runs) {
    const auto vpath = r / "verdict.json";
    if (!fs::exists(vpath)) {
      // simulate runs carry no verdict
      std::ifstream cfg(r / "config.resolved");
      std::string line;
      bool experiment = false;
      while (std::getline(cfg, line))
        if (detail::trim(line) == "command = experiment") experiment = true;
      if (experiment) {
        err << "error: missing verdict in " << r.string() << "\n";
        return kExitUsage;
      }
      continue;
    }
    ReportRow row;
    try {
      std::ifstream in(vpath);
      const auto j = nlohmann::json::parse(in);
      if (j.at("schema_version").get<int>() != decaylab::kVerdictSchemaVersion) throw std::runtime_error("unsupported schema_version");
      row.experiment = j.at("experiment").get<std::string>();
      row.pass = j.at("pass").get<bool>();
      row.run_id = j.value("run_id", r.filename().string());
      row.model = j.value("model", "");
      row.claim = j.value("claim", "");
      row.status = j.value("status", row.pass ? "pass" : "fail");
      row.timestamp = j.value("timestamp", "");
      if (j.contains("m") && j["m"].is_number()) row.m = j["m"].get<double>();
      for (const auto& c : j.at("checks"))
        if (!c.at("pass").get<bool>()) ++row.failed_checks;
    } catch (const std::exception& e) {
      err << "error: corrupt verdict " << vpath.string() << ": " << e.what() << "\n";
      return kExitUsage;
    }
    ++seen[row.experiment];
    auto it = latest.find(row.experiment);
    if (it == latest.end() || std::tie(row.timestamp, row.run_id) > std::tie(it->second.timestamp, it->second.run_id))
      latest[row.experiment] = row;
  }
  for (const auto& [id, n] : seen)
    if (n > 1) err << "warning: " << n << " runs of " << id << "; reporting the latest (" << latest[id].run_id << ")\n";

  const std::string csv = csv_path.empty() ? (fs::path(dir) / "summary.csv").string() : csv_path;
  std::ofstream f(csv, std::ios::binary);
  if (!f) {
    err << "error: cannot write " << csv << "\n";
    return kExitUsage;
  }
  using decaylab::csv_field;
  f << "experiment,run_id,model,claim,status,pass,m,failed_checks,timestamp\r\n";
  out << std::left << std::setw(26) << "experiment" << std::setw(8) << "status" << std::setw(10) << "m"
      << "run_id\n";
  for (const auto& [id, r] : latest) {
    f << csv_field(id) << ',' << csv_field(r.run_id) << ',' << csv_field(r.model) << ',' << csv_field(r.claim) << ',' << r.status << ','
      << (r.pass ? 1 : 0) << ',' << (r.m ? decaylab::csv_number(*r.m) : "") << ',' << r.failed_checks << ',' << csv_field(r.timestamp)
      << "\r\n";
    out << std::left << std::setw(26) << id << std::setw(8) << r.status << std::setw(10) << (r.m ? decaylab::csv_number(*r.m) : "-")
        << r.run_id << "\n";
  }
  out << latest.size() << " experiment(s); summary written to " << csv << "\n";
  return kExitPass;
}

}  // namespace hypolab::cli
