#pragma once

#include "spec.hpp"
#include "verdict.hpp"

#include <cmath>

namespace hypolab::decaylab {

using simulate::Estimate;

/// A real direction field on the lattice state space used for V f_t. Complex eigen-directions
/// split into real and imaginary parts, each with weight 2 (|V f|^2 + |conj(V) f|^2 = 2 (Re^2 + Im^2)).
struct Probe
{
  std::string name;
  double weight = 1.0;
  std::optional<symcalc::VectorField> symbolic;
  std::optional<symcalc::NumField> compiled;
  std::vector<double> constant;

  std::vector<double> at(std::span<const double> x) const
  {
    if (compiled) return (*compiled)(x);
    return constant;
  }
};

inline std::vector<Probe> site_probes(const models::LatticeModel& lm, const std::string& name, int x, double weight = 1.0)
{
  const std::string tag = name + "@" + std::to_string(x);
  if (lm.site.has_field(name)) {
    Probe p{tag, weight, lm.site_field(name, x), std::nullopt, {}};
    p.compiled.emplace(*p.symbolic);
    return {p};
  }
  for (const auto& e : lm.site.eigen_directions) {
    if (e.name != name) continue;
    auto embed = [&](auto part) {
      std::vector<double> v(static_cast<std::size_t>(lm.dim()), 0.0);
      for (int k = 0; k < lm.site.dim; ++k) v[static_cast<std::size_t>(lm.index(x, k))] = part(e.coeffs[static_cast<std::size_t>(k)]);
      return v;
    };
    const bool complex = std::any_of(e.coeffs.begin(), e.coeffs.end(), [](auto c) { return std::abs(c.imag()) > 1e-12; });
    if (!complex) return {Probe{tag, weight, std::nullopt, std::nullopt, embed([](auto c) { return c.real(); })}};
    return {Probe{"Re " + tag, 2 * weight, std::nullopt, std::nullopt, embed([](auto c) { return c.real(); })},
            Probe{"Im " + tag, 2 * weight, std::nullopt, std::nullopt, embed([](auto c) { return c.imag(); })}};
  }
  throw ConfigError("model '" + lm.site.family + "' has no field '" + name + "'");
}

inline std::vector<Probe> all_sites(const models::LatticeModel& lm, const std::string& name)
{
  std::vector<Probe> out;
  for (int x = 0; x < lm.n_sites(); ++x)
    for (auto& p : site_probes(lm, name, x)) out.push_back(std::move(p));
  return out;
}

/// Ensemble with one replica pair per distinct nonzero probe direction at x0, plus (V f_t)(x0) per probe.
struct ProbeRun
{
  simulate::Ensemble ens;
  std::vector<std::vector<Estimate>> derivative;  // [probe][checkpoint]
};

inline ProbeRun run_probes(const simulate::SDESystem& sys, std::span<const double> x0, const simulate::EnsembleConfig& cfg,
                           const std::vector<Probe>& probes, const TestFunction& f, double h)
{
  simulate::ReplicaPlan plan;
  plan.h = h;
  std::vector<std::vector<double>> dirs;
  for (const auto& p : probes) {
    auto v = p.at(x0);
    if (std::all_of(v.begin(), v.end(), [](double c) { return c == 0.0; })) continue;
    if (std::find(plan.directions.begin(), plan.directions.end(), v) == plan.directions.end()) plan.directions.push_back(v);
  }
  ProbeRun run{simulate::integrate(sys, x0, cfg, plan), {}};
  const simulate::ScalarFn fn = [&f](std::span<const double> x) { return f(x); };
  for (const auto& p : probes) run.derivative.push_back(simulate::field_derivative_estimate(run.ens, fn, p.at(x0)));
  return run;
}

/// sum_p w_p (V_p f_t)(x0)^2 with a delta-method standard error.
inline Estimate squared_sum(const ProbeRun& run, const std::vector<Probe>& probes, const std::vector<int>& which, std::size_t c)
{
  double v = 0.0, var = 0.0;
  for (int i : which) {
    const auto& e = run.derivative[static_cast<std::size_t>(i)][c];
    const double w = probes[static_cast<std::size_t>(i)].weight;
    v += w * e.value * e.value;
    var += std::pow(2 * w * e.value * e.stderr_, 2);
  }
  return {run.ens.times[c], v, std::sqrt(var)};
}

/// P_t sum_p w_p (V_p f)^2 at x0 from the base replica.
inline Estimate transported_square_sum(const ProbeRun& run, const std::vector<Probe>& probes, const std::vector<int>& which,
                                       const TestFunction& f, std::size_t c)
{
  const auto& ens = run.ens;
  std::vector<double> s(ens.n_paths), grad(static_cast<std::size_t>(ens.dim));
  for (std::size_t p = 0; p < ens.n_paths; ++p) {
    const auto x = ens.state(c, p, 0);
    f.gradient(x, grad);
    double q = 0.0;
    for (int i : which) {
      const auto& pr = probes[static_cast<std::size_t>(i)];
      const auto v = pr.at(x);
      double d = 0.0;
      for (std::size_t k = 0; k < v.size(); ++k) d += v[k] * grad[k];
      q += pr.weight * d * d;
    }
    s[p] = q;
  }
  return simulate::detail::mean_and_stderr(ens.times[c], s);
}

/// A pointwise claim sum_{lhs} |V f_t|^2 (x0) <= e^{-m t} P_t sum_{rhs} |V f|^2 (x0).
struct BoundGroup
{
  std::string series;
  std::vector<int> lhs;
  std::vector<int> rhs;
  double m = 0.0;
};

inline void add_bound_rows(Verdict& v, const ProbeRun& run, const std::vector<Probe>& probes, const std::vector<BoundGroup>& groups,
                           const TestFunction& f)
{
  for (const auto& g : groups)
    for (std::size_t c = 0; c < run.ens.n_checkpoints(); ++c) {
      const double t = run.ens.times[c];
      const auto l = squared_sum(run, probes, g.lhs, c);
      const auto r = transported_square_sum(run, probes, g.rhs, f, c);
      const double env = std::exp(-g.m * t);
      v.rows.push_back(bound_row(g.series, t, l.value, l.stderr_, env * r.value, env * r.stderr_));
    }
}

/// Closed-form tier for polynomial models without tanh couplings and a polynomial f: the moment
/// oracle gives (V f_t)(x0) and P_t (V f)^2 exactly. Adds oracle rows plus agreement checks.
/// Agreement allows 3 stderr plus 5% of the series peak for the Euler O(dt) bias.
inline bool add_oracle_tier(Verdict& v, const models::LatticeModel& lm, const ProbeRun& run, const std::vector<Probe>& probes,
                            const std::vector<BoundGroup>& groups, const TestFunction& f, std::span<const double> x0)
{
  const auto fp = f.poly();
  if (!fp || lm.has_nonpolynomial_terms()) {
    v.notes.push_back("oracle tier not applicable (non-polynomial f or tanh couplings)");
    return false;
  }
  const int dim = lm.dim();
  std::vector<symcalc::Poly> vf;
  for (const auto& p : probes) {
    if (p.symbolic) {
      vf.push_back(p.symbolic->apply(*fp));
    } else {
      symcalc::Poly s;
      for (int i = 0; i < dim; ++i)
        if (p.constant[static_cast<std::size_t>(i)] != 0.0) s += symcalc::to_rational(p.constant[static_cast<std::size_t>(i)]) * fp->derivative(i);
      vf.push_back(s);
    }
  }
  unsigned deg = std::max(1u, fp->degree());
  for (const auto& q : vf) deg = std::max(deg, 2 * q.degree());
  std::optional<simulate::MomentOracle> oracle;
  try {
    oracle.emplace(lm.generator, deg);
  } catch (const NotClosed&) {
    v.notes.push_back("oracle tier not applicable (moments do not close at degree " + std::to_string(deg) + ")");
    return false;
  }
  bool bound_ok = true, agree = true;
  std::string worst;
  for (const auto& g : groups) {
    symcalc::Poly q0;
    for (int i : g.rhs) q0 += symcalc::to_rational(probes[static_cast<std::size_t>(i)].weight) * vf[static_cast<std::size_t>(i)] * vf[static_cast<std::size_t>(i)];
    std::vector<Row> rows;
    double peak = 0.0;
    for (std::size_t c = 0; c < run.ens.n_checkpoints(); ++c) {
      const double t = run.ens.times[c];
      double l = 0.0;
      for (int i : g.lhs) {
        const auto& p = probes[static_cast<std::size_t>(i)];
        const double d = oracle->derivative(*fp, p.at(x0), t, x0);
        l += p.weight * d * d;
      }
      const double r = std::exp(-g.m * t) * oracle->expectation(q0, t, x0);
      rows.push_back(bound_row(g.series, t, l, 0.0, r, 0.0));
      peak = std::max({peak, std::abs(l), std::abs(r)});
    }
    for (std::size_t c = 0; c < rows.size(); ++c) {
      bound_ok = bound_ok && rows[c].ok;
      const auto it = std::find_if(v.rows.begin(), v.rows.end(), [&](const Row& r) { return r.series == g.series && r.t == rows[c].t; });
      if (it == v.rows.end()) continue;
      const double allow = 0.05 * peak + 1e-12;
      if (std::abs(it->lhs - rows[c].lhs) > 3 * it->lhs_stderr + allow || std::abs(it->rhs - rows[c].rhs) > 3 * it->rhs_stderr + allow) {
        agree = false;
        worst = g.series + " t=" + std::to_string(rows[c].t);
      }
      v.oracle_rows.push_back(rows[c]);
    }
  }
  v.add_check("oracle_bound", bound_ok, "closed-form semigroup satisfies the bound");
  v.add_check("oracle_agreement", agree, agree ? "Monte-Carlo matches the matrix-exponential oracle" : "mismatch at " + worst);
  return true;
}

/// Fits the decay rate of a bound series' left-hand side and checks rate >= m - CI half-width.
inline void add_rate_fit(Verdict& v, const std::string& series, double m)
{
  std::vector<Estimate> s;
  for (const auto& r : v.rows)
    if (r.series == series && r.t > 0) s.push_back({r.t, r.lhs, r.lhs_stderr});
  if (s.size() < 4 || std::any_of(s.begin(), s.end(), [](const Estimate& e) { return !(e.value > 0); })) {
    v.notes.push_back("rate fit skipped for " + series + " (needs 4 positive points)");
    return;
  }
  const auto fit = simulate::fit_decay_rate(s);
  RateFit rf{series, fit.rate, fit.ci_half_width, m, fit.rate >= m - fit.ci_half_width};
  v.fits.push_back(rf);
  v.add_check("rate:" + series, rf.pass, "fitted rate " + std::to_string(fit.rate) + " +- " + std::to_string(fit.ci_half_width) + " vs m " + std::to_string(m));
}

}  // namespace hypolab::decaylab
