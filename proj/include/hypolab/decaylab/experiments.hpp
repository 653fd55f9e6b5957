#pragma once

#include "../lyapunov.hpp"
#include "probes.hpp"

#include <chrono>
#include <sstream>

namespace hypolab::decaylab {

namespace detail {

inline void require_model(const ExperimentSpec& s, std::initializer_list<const char*> allowed)
{
  for (const char* a : allowed)
    if (s.model == a) return;
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  throw ConfigError("experiment '" + s.id + "' needs model " + list + ", got '" + s.model + "'");
}

/// Raises ConditionsFailed listing the failing entries (except those named in `skip`).
inline void gate(const models::ConditionReport& r, std::initializer_list<const char*> skip = {})
{
  std::string failed;
  for (const auto& e : r.entries) {
    if (e.pass) continue;
    if (std::any_of(skip.begin(), skip.end(), [&](const char* s) { return e.name == s; })) continue;
    failed += (failed.empty() ? "" : "; ") + e.name + " = " + std::to_string(e.value) + " (" + e.detail + ")";
  }
  if (!failed.empty()) throw ConditionsFailed("hypothesis check failed: " + failed);
}

/// m is always recomputed; a configured value must agree with it.
inline double resolve_rate(const ExperimentSpec& s, double computed, const std::string& source, Verdict& v)
{
  if (s.claimed_m && std::abs(*s.claimed_m - computed) > 1e-12 * std::max(1.0, std::abs(computed)))
    throw ConfigError("claimed m = " + std::to_string(*s.claimed_m) + " differs from the computed " + std::to_string(computed) + " (" + source + ")");
  v.m = computed;
  v.m_source = source;
  return computed;
}

inline Verdict start(const ExperimentSpec& s, const models::LatticeModel& lm, const TestFunction& f, std::string claim)
{
  Verdict v;
  v.experiment = s.id;
  v.claim = std::move(claim);
  v.model = s.model;
  v.test_function = f.name() + " [" + kTestFunctionCatalog + "]";
  v.parameters = nlohmann::json(lm.site.parameters);
  v.parameters["sites"] = lm.n_sites();
  v.parameters["boundary"] = models::to_string(s.boundary);
  v.parameters["gamma"] = s.interaction.gamma;
  v.parameters["n_paths"] = s.ensemble.n_paths;
  v.parameters["dt"] = s.ensemble.dt;
  v.parameters["seed"] = s.ensemble.seed;
  v.parameters["scheme"] = simulate::scheme_name(s.ensemble.scheme);
  return v;
}

inline std::vector<int> iota(std::size_t n, int from = 0)
{
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = from + static_cast<int>(i);
  return out;
}

inline std::string fmt(double v)
{
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace detail

/// Lattice Langevin: Q(t) = sum_x (|V0 f_t|^2 + |V+ f_t|^2 + |V- f_t|^2)(x0) <= e^{-mt} P_t Q(0), m from the rate condition.
inline Verdict exp_langevin_decay(const ExperimentSpec& s)
{
  detail::require_model(s, {"langevin"});
  const auto lm = build_model(s);
  const auto f = build_test_function(s, lm);
  const auto report = models::check_conditions(lm);
  detail::gate(report);
  auto v = detail::start(s, lm, f, "upper_bound_decay");
  v.conditions = report.to_json();
  const double m = detail::resolve_rate(s, report.m_max, "check_conditions:assm", v);
  if (s.interaction.gamma != 0.0 || s.interaction.G_explicit)
    v.notes.push_back("linear coupling G is checked by the G entries but not included in the rate m");

  std::vector<Probe> probes;
  for (const char* name : {"V0", "Vp"})
    for (auto& p : all_sites(lm, name)) probes.push_back(std::move(p));
  const std::vector<BoundGroup> groups = {{"Q", detail::iota(probes.size()), detail::iota(probes.size()), m}};
  const auto x0 = initial_point(s, lm);
  const auto run = run_probes(simulate::to_sde(lm), x0, s.ensemble, probes, f, s.h);
  add_bound_rows(v, run, probes, groups, f);
  v.check_bounds("Q", "Q(t) <= e^{-mt} P_t Q(0) within 3 stderr");
  add_oracle_tier(v, lm, run, probes, groups, f, x0);
  if (s.fit_rate) add_rate_fit(v, "Q", m);
  return v;
}

namespace detail {

/// t^{2j+1} |Z_j f_t|^2 / |f|_inf^2 at site 0 for the listed fields; boundedness means max/min < factor.
inline void smoothing_products(Verdict& v, const ExperimentSpec& s, const models::LatticeModel& lm, const TestFunction& f,
                               const std::vector<std::string>& fields)
{
  const double sup = f.sup_norm();
  if (!std::isfinite(sup)) throw ConfigError("smoothing products need a bounded test function");
  std::vector<Probe> probes;
  for (const auto& name : fields)
    for (auto& p : site_probes(lm, name, 0)) probes.push_back(std::move(p));
  const auto x0 = initial_point(s, lm);
  const auto run = run_probes(simulate::to_sde(lm), x0, s.ensemble, probes, f, s.h);
  const double norm = sup > 0 ? sup * sup : 1.0;
  std::vector<double> gamma(run.ens.n_checkpoints(), 0.0), gamma_var(run.ens.n_checkpoints(), 0.0);
  for (std::size_t j = 0; j < probes.size(); ++j) {
    const std::string series = "t^" + std::to_string(2 * j + 1) + "|" + fields[j] + " f_t|^2";
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    int n = 0;
    const double c = std::pow(s.ladder_ratio, -static_cast<double>(j));
    for (std::size_t k = 0; k < run.ens.n_checkpoints(); ++k) {
      const double t = run.ens.times[k];
      if (t < s.t_min - 1e-12 || t > 1 + 1e-12) continue;
      const auto& e = run.derivative[j][k];
      const double w = std::pow(t, static_cast<double>(2 * j + 1)) / norm;
      const double p = w * e.value * e.value, se = w * 2 * std::abs(e.value) * e.stderr_;
      v.rows.push_back(value_row(series, t, p, se));
      gamma[k] += c * p;
      gamma_var[k] += c * c * se * se;
      lo = std::min(lo, p);
      hi = std::max(hi, p);
      ++n;
    }
    if (n == 0) {
      v.add_check(series, false, "no checkpoints in [t_min, 1]");
    } else if (hi <= 1e-24) {
      v.add_check(series, true, "identically zero: trivially bounded");
    } else {
      const double ratio = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
      v.add_check(series, ratio < s.bound_factor,
                  "max/min over [" + fmt(s.t_min) + ", 1] = " + fmt(ratio) + " (bounded if < " + fmt(s.bound_factor) + ")");
    }
  }
  for (std::size_t k = 0; k < run.ens.n_checkpoints(); ++k) {
    const double t = run.ens.times[k];
    if (t < s.t_min - 1e-12 || t > 1 + 1e-12) continue;
    v.rows.push_back(value_row("Gamma_diag", t, gamma[k], std::sqrt(gamma_var[k])));
  }
  v.notes.push_back("Gamma_diag = sum_j ratio^{-j} t^{2j+1}|Z_j f_t|^2 with ladder ratio " + fmt(s.ladder_ratio) +
                    "; cross terms are not monitored");
}

}  // namespace detail

inline Verdict exp_langevin_smoothing(const ExperimentSpec& s)
{
  detail::require_model(s, {"langevin"});
  const auto lm = build_model(s);
  const auto f = build_test_function(s, lm);
  auto v = detail::start(s, lm, f, "boundedness");
  const int jmax = s.max_j < 0 ? 2 : s.max_j;
  if (jmax > 2) throw ConfigError("langevin smoothing supports j <= 2");
  std::vector<std::string> fields;
  for (int j = 0; j <= jmax; ++j) fields.push_back("Z" + std::to_string(j));
  detail::smoothing_products(v, s, lm, f, fields);
  return v;
}

/// Filiform with full dilation, first-order multi-indices: |Y_k f_t|^2 <= e^{-m_k t} P_t sum_j |Y_j f|^2.
inline Verdict exp_filiform_full(const ExperimentSpec& s)
{
  detail::require_model(s, {"filiform_full"});
  if (s.order != 1) throw Unsupported("filiform-full: only first-order multi-indices (n = 1) are estimated");
  const auto lm = build_model(s);
  const auto f = build_test_function(s, lm);
  const auto report = models::check_conditions(lm);
  detail::gate(report);
  const int nf = lm.site.dim;  // Y_0 .. Y_{N+1}
  std::vector<double> m = s.m_weights.empty() ? std::vector<double>(static_cast<std::size_t>(nf), 1.0) : s.m_weights;
  if (static_cast<int>(m.size()) != nf) throw ConfigError("m_weights needs " + std::to_string(nf) + " entries");
  for (double w : m)
    if (!(w > 0)) throw ConfigError("m_weights must be positive");
  if (m[1] != 1.0 || (nf > 2 && m[0] != m[2])) throw ConfigError("m_weights must satisfy m_0 = m_2 and m_1 = 1");
  for (int j = 1; j + 1 < nf; ++j)
    if (m[static_cast<std::size_t>(j)] < m[static_cast<std::size_t>(j + 1)]) throw ConfigError("m_weights must be nonincreasing from index 1");
  std::vector<double> kappa;
  for (int i = 0; i < nf; ++i) kappa.push_back(lm.site.parameter("kappa" + std::to_string(i)));
  const double lambda = lm.site.parameter("lambda");
  const auto cond = models::filiform_full_condition(m, kappa, lambda, s.order);
  if (cond.margin > 0)
    throw LambdaTooSmall("lambda = " + detail::fmt(lambda) + " too small: m_k - 2 lambda kappa_k + 2n + n(n-1)(n-2) = " + detail::fmt(cond.margin) +
                             " > 0 at k = " + std::to_string(cond.worst_index),
                         cond.worst_index);

  auto v = detail::start(s, lm, f, "upper_bound_decay");
  v.conditions = report.to_json();
  v.conditions["sufficiency_margin"] = cond.margin;
  v.m = *std::min_element(m.begin(), m.end());
  v.m_source = "m_k weights; smallest shown";
  if (s.claimed_m) detail::resolve_rate(s, *v.m, v.m_source, v);
  if (lm.n_sites() != 1) throw Unsupported("filiform-full runs on a single site");

  std::vector<Probe> probes;
  for (int k = 0; k < nf; ++k)
    for (auto& p : site_probes(lm, "Y" + std::to_string(k), 0)) probes.push_back(std::move(p));
  std::vector<BoundGroup> groups;
  for (int k = 0; k < nf; ++k) groups.push_back({"Y" + std::to_string(k), {k}, detail::iota(probes.size()), m[static_cast<std::size_t>(k)]});
  const auto x0 = initial_point(s, lm);
  const auto run = run_probes(simulate::to_sde(lm), x0, s.ensemble, probes, f, s.h);
  add_bound_rows(v, run, probes, groups, f);
  for (const auto& g : groups) v.check_bounds(g.series, "|" + g.series + " f_t|^2 <= e^{-m_k t} P_t Gamma~_0(f)");
  add_oracle_tier(v, lm, run, probes, groups, f, x0);
  v.notes.push_back("right-hand side transported by P_t; second-order multi-indices are not estimated");
  return v;
}

/// Lattice filiform with partial dilation: sum_w |V_w f_t|^2 <= e^{2(eta-lambda)t} P_t sum_w |V_w f|^2.
inline Verdict exp_filiform_partial(const ExperimentSpec& s)
{
  detail::require_model(s, {"filiform_partial"});
  if (s.k_fold != 1) throw Unsupported("filiform-partial: k-fold products need higher-order derivative estimates");
  const auto lm = build_model(s);
  const auto f = build_test_function(s, lm);
  const auto report = models::check_conditions(lm);
  detail::gate(report, {"eta"});
  auto v = detail::start(s, lm, f, "upper_bound_decay");
  v.conditions = report.to_json();
  const auto probes = all_sites(lm, "V");
  const auto x0 = initial_point(s, lm);
  const auto sys = simulate::to_sde(lm);
  if (!report.entry("eta").pass) {
    v.claim = "non_explosion";
    v.notes.push_back("eta >= lambda: the bound is vacuous, only non-explosion is checked");
    try {
      const auto ens = simulate::integrate(sys, x0, s.ensemble);
      v.add_check("no_blowup", true, "all paths stayed below the cap");
    } catch (const Blowup& b) {
      v.add_check("no_blowup", false, b.what());
    }
    return v;
  }
  const double m = detail::resolve_rate(s, report.m_max, "check_conditions:eta", v);
  const std::vector<BoundGroup> groups = {{"sum|V f_t|^2", detail::iota(probes.size()), detail::iota(probes.size()), m}};
  const auto run = run_probes(sys, x0, s.ensemble, probes, f, s.h);
  add_bound_rows(v, run, probes, groups, f);
  v.check_bounds(groups[0].series, "sum_w |V_w f_t|^2 <= e^{-mt} P_t sum_w |V_w f|^2");
  add_oracle_tier(v, lm, run, probes, groups, f, x0);
  if (s.fit_rate) add_rate_fit(v, groups[0].series, m);
  return v;
}

/// Heisenberg group with partial dilation: sum_j |V_j f_t|^2 <= e^{-mt} P_t sum_j |V_j f|^2.
inline Verdict exp_heisenberg_concentration(const ExperimentSpec& s)
{
  detail::require_model(s, {"heisenberg_partial"});
  const auto lm = build_model(s);
  const auto f = build_test_function(s, lm);
  const auto report = models::check_conditions(lm);
  detail::gate(report);
  auto v = detail::start(s, lm, f, "inequality_pointwise");
  v.conditions = report.to_json();
  const double m = detail::resolve_rate(s, report.m_max, "check_conditions:m", v);
  const auto probes = all_sites(lm, "V");
  const std::vector<BoundGroup> groups = {{"sum(V f_t)^2", detail::iota(probes.size()), detail::iota(probes.size()), m}};
  const auto x0 = initial_point(s, lm);
  const auto run = run_probes(simulate::to_sde(lm), x0, s.ensemble, probes, f, s.h);
  add_bound_rows(v, run, probes, groups, f);
  v.check_bounds(groups[0].series, "(V f_t)^2 <= e^{-mt} P_t (V f)^2");
  add_oracle_tier(v, lm, run, probes, groups, f, x0);
  return v;
}

/// Largest t0 <= 1 on a 1e-3 grid where every coefficient of the B-S short-time functional estimate
/// is nonpositive; 0 if none.
inline double bs_smoothing_t0(double a, double b, double c, double d, double delta, double lambda)
{
  double t0 = 0.0;
  for (int k = 1; k <= 1000; ++k) {
    const double s = 1e-3 * k;
    const double c_z00 = -2 * a * s + c * c * s * s;
    const double c_z01 = (1 - 2 * b) * s * s * s;
    const double c_z1 = (3 * b + delta - c / 2) * s * s - lambda * (4 * b - delta / 2) * s * s * s;
    const double c_z0 = a + 4 * a / c + c * c / delta + (2 * c * c / b + lambda * c * c / (2 * delta)) * s - 2 * d;
    if (c_z00 > 0 || c_z01 > 0 || c_z1 > 0 || c_z0 > 0) break;
    t0 = s;
  }
  return t0;
}

inline Verdict exp_bs(const ExperimentSpec& s)
{
  detail::require_model(s, {"bs"});
  const auto lm = build_model(s);
  const auto f = build_test_function(s, lm);
  const auto x0 = initial_point(s, lm);
  const double lambda = lm.site.parameter("lambda"), eps = lm.site.parameter("eps");

  if (s.part == "gradient" || s.part == "lattice") {
    if (s.part == "gradient" && lm.n_sites() != 1) throw ConfigError("bs gradient part runs on one site; use part = lattice");
    const auto report = models::check_conditions(lm);
    detail::gate(report);
    auto v = detail::start(s, lm, f, "upper_bound_decay");
    v.conditions = report.to_json();
    const double m = detail::resolve_rate(s, report.m_max, "check_conditions:m", v);
    if (lambda <= 1) v.notes.push_back("lambda <= 1: no decay claimed, the envelope is e^0 or growing");
    const auto probes = all_sites(lm, "d");
    const std::vector<BoundGroup> groups = {{"sum|d f_t|^2", detail::iota(probes.size()), detail::iota(probes.size()), m}};
    const auto run = run_probes(simulate::to_sde(lm), x0, s.ensemble, probes, f, s.h);
    add_bound_rows(v, run, probes, groups, f);
    v.check_bounds(groups[0].series, "sum_k |d_k f_t|^2 <= e^{-mt} P_t sum_k |d_k f|^2");
    add_oracle_tier(v, lm, run, probes, groups, f, x0);
    if (s.part == "lattice" && s.fit_rate && m > 0) add_rate_fit(v, groups[0].series, m);
    return v;
  }
  if (s.part == "products") {
    auto v = detail::start(s, lm, f, "boundedness");
    const int jmax = s.max_j < 0 ? 1 : s.max_j;
    if (jmax > 1) throw ConfigError("bs smoothing products support j <= 1");
    std::vector<std::string> fields;
    for (int j = 0; j <= jmax; ++j) fields.push_back("Z" + std::to_string(j));
    detail::smoothing_products(v, s, lm, f, fields);
    return v;
  }
  if (s.part != "smoothing") throw ConfigError("bs part must be gradient, smoothing, lattice or products");

  // a t|Z0 f_t|^2 + b t^3 |Z1 f_t|^2 <= d (P_t f^2 - (P_t f)^2) for t in [t_min, t0]
  if (lm.n_sites() != 1) throw ConfigError("bs smoothing part runs on one site");
  const double a = s.bs_a * s.bs_scale, b = s.bs_b * s.bs_scale, c = s.bs_c * s.bs_scale, d = s.bs_d * s.bs_scale;
  std::string failed;
  if (!(6 * b < eps * c)) failed += "6b < eps c fails; ";
  if (!(c * c <= 2 * a * b)) failed += "c^2 <= 2ab fails; ";
  if (!failed.empty()) throw ConditionsFailed("smoothing constants: " + failed);
  const double t0 = bs_smoothing_t0(a, b, c, d, s.bs_delta, lambda);
  auto v = detail::start(s, lm, f, "inequality_pointwise");
  v.parameters["a"] = a;
  v.parameters["b"] = b;
  v.parameters["c"] = c;
  v.parameters["d"] = d;
  v.parameters["t0"] = t0;
  if (t0 < s.t_min) {
    v.add_check("t0", false, "no admissible short-time window: t0 = " + detail::fmt(t0));
    return v;
  }
  std::vector<Probe> probes;
  for (const char* z : {"Z0", "Z1"})
    for (auto& p : site_probes(lm, z, 0)) probes.push_back(std::move(p));
  const auto run = run_probes(simulate::to_sde(lm), x0, s.ensemble, probes, f, s.h);
  int n = 0;
  for (std::size_t k = 0; k < run.ens.n_checkpoints(); ++k) {
    const double t = run.ens.times[k];
    if (t < s.t_min - 1e-12 || t > t0 + 1e-12) continue;
    const auto& z0 = run.derivative[0][k];
    const auto& z1 = run.derivative[1][k];
    const double lhs = a * t * z0.value * z0.value + b * t * t * t * z1.value * z1.value;
    const double lhs_se = std::hypot(2 * a * t * z0.value * z0.stderr_, 2 * b * t * t * t * z1.value * z1.stderr_);
    std::vector<double> fx(run.ens.n_paths), dev(run.ens.n_paths);
    for (std::size_t p = 0; p < run.ens.n_paths; ++p) fx[p] = f(run.ens.state(k, p, 0));
    const auto mean = simulate::detail::mean_and_stderr(t, fx);
    for (std::size_t p = 0; p < run.ens.n_paths; ++p) dev[p] = (fx[p] - mean.value) * (fx[p] - mean.value);
    const auto var = simulate::detail::mean_and_stderr(t, dev);
    const double nn = static_cast<double>(run.ens.n_paths);
    v.rows.push_back(bound_row("Gamma_short", t, lhs, lhs_se, d * var.value * nn / (nn - 1), d * var.stderr_));
    ++n;
  }
  v.check_bounds("Gamma_short", "a t|Z0 f_t|^2 + b t^3|Z1 f_t|^2 <= d Var_t(f) on [t_min, t0]");
  if (n == 0) v.notes.push_back("no checkpoints in [t_min, t0]");
  return v;
}

/// Empirical E rho(X_t) stays below max(rho(x0), b/a) and is stationary between two late windows.
inline Verdict exp_invariant_measure_evidence(const ExperimentSpec& s)
{
  detail::require_model(s, {"langevin", "bs"});
  const auto lm = build_model(s);
  const auto f = build_test_function(s, lm);
  auto v = detail::start(s, lm, f, "boundedness");
  const auto report = models::check_conditions(lm);
  v.conditions = report.to_json();
  const auto x0 = initial_point(s, lm);

  std::function<double(std::span<const double>)> rho;
  std::optional<double> bound;
  try {
    if (s.model == "langevin") {
      const auto site_cert = lyapunov::langevin_rho(lm.site.parameter("g"), lm.site.parameter("lambda"));
      const auto cert = lm.n_sites() == 1 ? site_cert : lyapunov::lattice_drift(lm, *site_cert.rho);
      auto np = std::make_shared<symcalc::NumPoly>(*cert.rho);
      rho = [np](std::span<const double> x) { return (*np)(x); };
      bound = std::max(rho(x0), cert.b / cert.a);
      v.notes.push_back("certificate " + cert.rho_name + ": a = " + detail::fmt(cert.a) + ", b = " + detail::fmt(cert.b));
    } else {
      if (lm.n_sites() != 1 || !lm.interaction.empty()) throw Unsupported("invariant-evidence for bs runs on a single uncoupled site");
      rho = [](std::span<const double> x) { return std::sqrt(1 + x[0] * x[0]); };
      const auto cert = lyapunov::named_drift(lm.site, "bracket_x");
      bound = std::max(rho(x0), cert.b / cert.a);
      v.notes.push_back("certificate <x>: a = " + detail::fmt(cert.a) + ", b = " + detail::fmt(cert.b));
    }
    v.add_check("certificate", true, "drift certificate found");
  } catch (const SearchFailed& e) {
    v.add_check("certificate", false, e.what());
  } catch (const SamplingViolation& e) {
    v.add_check("certificate", false, e.what());
  } catch (const ConditionsFailed& e) {
    v.add_check("certificate", false, e.what());
  }
  if (!rho) {
    if (s.model == "langevin") return v;
    rho = [](std::span<const double> x) { return std::sqrt(1 + x[0] * x[0]); };
  }

  std::optional<simulate::Ensemble> ens;
  try {
    ens = simulate::integrate(simulate::to_sde(lm), x0, s.ensemble);
    v.add_check("no_blowup", true);
  } catch (const Blowup& b) {
    v.add_check("no_blowup", false, b.what());
    return v;
  }
  const simulate::ScalarFn fn = rho;
  const auto est = simulate::semigroup_estimate(*ens, fn);
  for (const auto& e : est) {
    if (bound)
      v.rows.push_back(bound_row("E rho", e.t, e.value, e.stderr_, *bound, 0.0));
    else
      v.rows.push_back(value_row("E rho", e.t, e.value, e.stderr_));
  }
  if (bound) v.check_bounds("E rho", "E rho(X_t) <= max(rho(x0), b/a) within 3 stderr");

  // per-path window averages make the difference's standard error honest about time correlation
  std::vector<double> diff(ens->n_paths, 0.0);
  int n1 = 0, n2 = 0;
  for (std::size_t c = 0; c < ens->n_checkpoints(); ++c) {
    const double t = ens->times[c];
    const bool in1 = t >= s.window1_lo - 1e-12 && t <= s.window1_hi + 1e-12;
    const bool in2 = t >= s.window2_lo - 1e-12 && t <= s.window2_hi + 1e-12;
    n1 += in1;
    n2 += in2;
  }
  if (n1 == 0 || n2 == 0) {
    v.add_check("stationarity", false, "a window holds no checkpoints");
    return v;
  }
  for (std::size_t c = 0; c < ens->n_checkpoints(); ++c) {
    const double t = ens->times[c];
    const bool in1 = t >= s.window1_lo - 1e-12 && t <= s.window1_hi + 1e-12;
    const bool in2 = t >= s.window2_lo - 1e-12 && t <= s.window2_hi + 1e-12;
    for (std::size_t p = 0; p < ens->n_paths; ++p) {
      const double r = rho(ens->state(c, p, 0));
      if (in1) diff[p] -= r / n1;
      if (in2) diff[p] += r / n2;
    }
  }
  const auto d = simulate::detail::mean_and_stderr(s.window2_hi, diff);
  v.rows.push_back(value_row("window difference", s.window2_hi, d.value, d.stderr_));
  v.add_check("stationarity", std::abs(d.value) < 3 * d.stderr_,
              "window means differ by " + detail::fmt(d.value) + " (3 stderr = " + detail::fmt(3 * d.stderr_) + ")");
  return v;
}

/// Dispatch by id; fills the runtime.
inline Verdict run_experiment(const ExperimentSpec& s)
{
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  if (s.id == "langevin-decay")
    v = exp_langevin_decay(s);
  else if (s.id == "langevin-smoothing")
    v = exp_langevin_smoothing(s);
  else if (s.id == "filiform-full")
    v = exp_filiform_full(s);
  else if (s.id == "filiform-partial")
    v = exp_filiform_partial(s);
  else if (s.id == "heisenberg-concentration")
    v = exp_heisenberg_concentration(s);
  else if (s.id == "bs")
    v = exp_bs(s);
  else if (s.id == "invariant-evidence")
    v = exp_invariant_measure_evidence(s);
  else
    throw ConfigError("unknown experiment '" + s.id + "'");
  v.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return v;
}

}  // namespace hypolab::decaylab
