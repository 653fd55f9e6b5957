#pragma once

#include "../errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace hypolab::decaylab {

inline constexpr int kVerdictSchemaVersion = 1;

/// One measured quantity at one checkpoint. Bound rows compare lhs <= rhs within 3 combined stderr;
/// value rows (rhs NaN) only record a series.
struct Row
{
  std::string series;
  double t = 0.0;
  double lhs = 0.0;
  double lhs_stderr = 0.0;
  double rhs = std::nan("");
  double rhs_stderr = 0.0;
  bool ok = true;

  double margin() const { return 3 * std::sqrt(lhs_stderr * lhs_stderr + rhs_stderr * rhs_stderr); }
  bool is_bound() const { return !std::isnan(rhs); }
};

inline Row bound_row(std::string series, double t, double lhs, double lhs_se, double rhs, double rhs_se)
{
  Row r{std::move(series), t, lhs, lhs_se, rhs, rhs_se, true};
  r.ok = r.lhs <= r.rhs + r.margin();
  return r;
}

inline Row value_row(std::string series, double t, double v, double se) { return {std::move(series), t, v, se, std::nan(""), 0.0, true}; }

struct Check
{
  std::string name;
  bool pass = true;
  std::string detail;
};

struct RateFit
{
  std::string series;
  double rate = 0.0;
  double ci_half_width = 0.0;
  double claimed = 0.0;
  bool pass = true;
};

struct Verdict
{
  std::string experiment;
  std::string claim;
  std::string model;
  std::string test_function;
  /// Claimed rate, always recomputed from the model at run time.
  std::optional<double> m;
  std::string m_source;
  std::vector<Row> rows;
  std::vector<Row> oracle_rows;
  std::vector<RateFit> fits;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  nlohmann::json conditions;
  nlohmann::json parameters;
  double runtime_s = 0.0;

  bool pass() const
  {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  void add_check(std::string name, bool ok, std::string detail = {}) { checks.push_back({std::move(name), ok, std::move(detail)}); }

  /// Adds one check per bound series summarizing its rows.
  void check_bounds(const std::string& series, const std::string& what)
  {
    bool ok = true;
    int n = 0;
    for (const auto& r : rows)
      if (r.series == series && r.is_bound()) {
        ok = ok && r.ok;
        ++n;
      }
    add_check(series, ok && n > 0, what + (n == 0 ? " (no rows)" : ""));
  }

  nlohmann::json to_json() const
  {
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    auto rows_json = [&](const std::vector<Row>& rs) {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& r : rs)
        a.push_back({{"series", r.series},
                     {"t", r.t},
                     {"lhs", num(r.lhs)},
                     {"lhs_stderr", num(r.lhs_stderr)},
                     {"rhs", num(r.rhs)},
                     {"rhs_stderr", num(r.rhs_stderr)},
                     {"ok", r.ok}});
      return a;
    };
    nlohmann::json j;
    j["schema_version"] = kVerdictSchemaVersion;
    j["experiment"] = experiment;
    j["claim"] = claim;
    j["model"] = model;
    j["test_function"] = test_function;
    j["pass"] = pass();
    j["m"] = m ? num(*m) : nlohmann::json(nullptr);
    j["m_source"] = m_source;
    j["rows"] = rows_json(rows);
    j["oracle_rows"] = rows_json(oracle_rows);
    j["fits"] = nlohmann::json::array();
    for (const auto& f : fits)
      j["fits"].push_back({{"series", f.series}, {"rate", num(f.rate)}, {"ci_half_width", num(f.ci_half_width)}, {"claimed", num(f.claimed)}, {"pass", f.pass}});
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["notes"] = notes;
    j["conditions"] = conditions;
    j["parameters"] = parameters;
    j["runtime_s"] = runtime_s;
    return j;
  }
};

/// RFC 4180 field quoting.
inline std::string csv_field(const std::string& s)
{
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_number(double v)
{
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// series.csv: measured rows then oracle rows, with a source column.
inline void write_series_csv(const Verdict& v, const std::string& path)
{
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "source,series,t,lhs,lhs_stderr,rhs,rhs_stderr,ok\r\n";
  auto dump = [&](const char* source, const std::vector<Row>& rows) {
    for (const auto& r : rows)
      out << source << ',' << csv_field(r.series) << ',' << csv_number(r.t) << ',' << csv_number(r.lhs) << ','
          << csv_number(r.lhs_stderr) << ',' << csv_number(r.rhs) << ',' << csv_number(r.rhs_stderr) << ',' << (r.ok ? 1 : 0)
          << "\r\n";
  };
  dump("mc", v.rows);
  dump("oracle", v.oracle_rows);
}

}  // namespace hypolab::decaylab
