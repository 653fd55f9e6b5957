#pragma once

#include "../models.hpp"
#include "quadratic.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>
#include <optional>

namespace hypolab::lyapunov {

using models::LatticeModel;
using models::SiteModel;
using symcalc::Generator;

enum class Method { quadratic_form_exact, radial_sampling };

inline std::string to_string(Method m) { return m == Method::quadratic_form_exact ? "quadratic_form_exact" : "radial_sampling"; }

/// L rho <= -a rho + b, either exactly (polynomial rho) or by sampling plus asymptotics.
struct DriftCertificate
{
  std::string rho_name;
  std::optional<Poly> rho;
  int dim = 0;
  double a = 0.0;
  double b = 0.0;
  Rational a_exact = 0;
  Rational b_exact = 0;
  Method method = Method::quadratic_form_exact;
  /// Exact: -max eigenvalue of the quadratic part of the bound. Sampling: -max of L rho + a rho - b.
  double margin = 0.0;
  double max_quad_eigenvalue = 0.0;
  /// Smallest eigenvalue of rho's quadratic form (the c-bar in rho >= c-bar |w|^2).
  double rho_min_eigenvalue = 0.0;
  std::map<std::string, double> constants;
  /// Exact upper bound for L rho + a rho - b; NSD with nonpositive constant certifies.
  std::optional<QuadraticForm> bound;
  std::size_t samples = 0;
  double worst_radius = 0.0;
  bool asymptotic_ok = true;
  std::vector<std::string> notes;

  bool exact() const { return method == Method::quadratic_form_exact; }

  nlohmann::json to_json() const
  {
    nlohmann::json j;
    j["rho"] = rho_name;
    if (rho) j["rho_poly"] = rho->str();
    j["dim"] = dim;
    j["a"] = a;
    j["b"] = b;
    if (exact()) {
      j["a_exact"] = symcalc::to_string(a_exact);
      j["b_exact"] = symcalc::to_string(b_exact);
      j["max_quad_eigenvalue"] = max_quad_eigenvalue;
      j["rho_min_eigenvalue"] = rho_min_eigenvalue;
    } else {
      j["samples"] = samples;
      j["worst_radius"] = worst_radius;
      j["asymptotic_ok"] = asymptotic_ok;
    }
    j["method"] = to_string(method);
    j["margin"] = margin;
    j["constants"] = constants;
    j["notes"] = notes;
    return j;
  }
};

/// Re-verify an exact certificate from its stored bound.
inline bool verify_exact(const DriftCertificate& c)
{
  if (!c.exact() || !c.bound) return false;
  return is_nsd(*c.bound) && !c.bound->has_linear() && c.bound->constant <= 0 && c.bound->max_eigenvalue() <= 1e-12;
}

/// Re-derive L rho + a rho - b from a generator and check it (polynomial generators only).
inline bool verify_against(const DriftCertificate& c, const Generator& l, const Rational& a)
{
  if (!c.rho) return false;
  const Poly p = l.apply(*c.rho) + a * *c.rho - Poly(c.b_exact);
  const QuadraticForm q = quadratic_form(p, l.dim());
  return is_nsd(q) && !q.has_linear() && q.constant <= 0;
}

namespace detail {

/// Largest dyadic a in (0, a_hi] (to 2^-iters relative resolution) with Q_L + a Q_rho NSD, or nullopt.
inline std::optional<Rational> bisect_rate(const QuadraticForm& ql, const QuadraticForm& qrho, const Rational& a_hi, int iters = 48)
{
  auto ok = [&](const Rational& a) {
    QuadraticForm t = ql;
    QuadraticForm s = qrho;
    s *= a;
    t += s;
    return is_nsd(t);
  };
  if (ok(a_hi)) return a_hi;
  Rational lo = 0, hi = a_hi;
  const Rational tiny = a_hi / Rational(symcalc::Integer(1) << iters);
  if (!ok(tiny)) return std::nullopt;
  lo = tiny;
  for (int i = 0; i < iters; ++i) {
    const Rational mid = (lo + hi) / 2;
    if (ok(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

inline DriftCertificate finish_exact(std::string name, const Poly& rho, int dim, const QuadraticForm& ql, const QuadraticForm& qrho,
                                     const Rational& a)
{
  DriftCertificate c;
  c.rho_name = std::move(name);
  c.rho = rho;
  c.dim = dim;
  c.method = Method::quadratic_form_exact;
  c.a_exact = a;
  c.a = symcalc::to_double(a);
  QuadraticForm bound = ql;
  QuadraticForm s = qrho;
  s *= a;
  bound += s;
  // rho has no constant or linear part here, so b only has to absorb the constant of L rho
  c.b_exact = bound.constant > 0 ? bound.constant : Rational(0);
  c.b = symcalc::to_double(c.b_exact);
  bound.constant -= c.b_exact;
  c.max_quad_eigenvalue = bound.max_eigenvalue();
  c.margin = -c.max_quad_eigenvalue;
  c.rho_min_eigenvalue = qrho.min_eigenvalue();
  c.bound = std::move(bound);
  return c;
}

inline Rational decimal(double v) { return symcalc::from_decimal(v); }

}  // namespace detail

/// rho-bar = C (q^2 + p^2 + u^2) + R pq + g H pu.
inline Poly langevin_rho_poly(const Rational& g, const Rational& c, const Rational& h, const Rational& r)
{
  const Poly q = Poly::variable(0), p = Poly::variable(1), u = Poly::variable(2);
  return c * (q * q + p * p + u * u) + r * p * q + g * h * p * u;
}

/// Certificate for one fixed (C, H, R); SearchFailed if rho is not positive definite or no a > 0 works.
inline DriftCertificate langevin_rho_fixed(double g, double lambda, double c_in, double h_in, double r_in)
{
  const auto site = models::langevin_site(g, lambda);
  const Rational gr = detail::decimal(g), c = detail::decimal(c_in), h = detail::decimal(h_in), r = detail::decimal(r_in);
  const Poly rho = langevin_rho_poly(gr, c, h, r);
  const QuadraticForm qrho = quadratic_form(rho, 3);
  if (!is_pd(qrho)) throw SearchFailed("langevin_rho: rho is not positive definite for the given constants", qrho.min_eigenvalue());
  const QuadraticForm ql = quadratic_form(site.generator.apply(rho), 3);
  const auto a = detail::bisect_rate(ql, qrho, 2 * detail::decimal(lambda));
  if (!a) throw SearchFailed("langevin_rho: no positive drift rate for the given constants", -ql.max_eigenvalue());
  auto cert = detail::finish_exact("langevin_rho", rho, 3, ql, qrho, *a);
  cert.constants = {{"C", c_in}, {"H", h_in}, {"R", r_in}, {"g", g}, {"lambda", lambda}};
  return cert;
}

/// Ladder search over R << H << C = 1, maximizing the certified a; ties go to the lexicographically smallest (C, H, R).
inline DriftCertificate langevin_rho(double g, double lambda)
{
  if (g == 0.0) throw ZeroCoupling("langevin_rho: g must be nonzero");
  if (!(lambda > 0)) throw Error("langevin_rho: lambda must be positive");
  const std::vector<double> rs = {1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1};
  const std::vector<double> hs = {1e-2, 2e-2, 5e-2, 1e-1, 2e-1, 5e-1, 1.0};
  std::optional<DriftCertificate> best;
  double best_margin = -std::numeric_limits<double>::infinity();
  for (double h : hs)
    for (double r : rs) {
      if (!(r < h)) continue;
      try {
        auto c = langevin_rho_fixed(g, lambda, 1.0, h, r);
        if (!best || c.a > best->a) best = std::move(c);
      } catch (const SearchFailed& e) {
        best_margin = std::max(best_margin, e.best_margin());
      }
    }
  if (!best) throw SearchFailed("langevin_rho: ladder search found no certificate", best_margin);
  return *best;
}

/// Certificate for sum_x eps_x rho_x on a lattice; tanh couplings enter through |q l| <= |a| (l^2 + 1) / 2.
inline DriftCertificate lattice_drift(const LatticeModel& lm, const Poly& site_rho, std::vector<double> weights = {},
                                      const models::ConditionOptions& opt = {})
{
  const auto report = models::check_conditions(lm, opt);
  for (const char* key : {"G", "GG"})
    if (report.has_entry(key) && !report.entry(key).pass)
      throw ConditionsFailed("lattice_drift: condition " + std::string(key) + " fails: " + report.to_json().dump());
  if (weights.empty()) weights = lm.weights;
  if (static_cast<int>(weights.size()) != lm.n_sites()) throw DimensionMismatch(lm.n_sites(), static_cast<int>(weights.size()));

  const int n = lm.dim();
  Poly rho;
  std::vector<Poly> rho_x;
  for (int x = 0; x < lm.n_sites(); ++x) {
    rho_x.push_back(site_rho.relabel(lm.site_map(x)));
    rho += detail::decimal(weights[static_cast<std::size_t>(x)]) * rho_x.back();
  }
  const QuadraticForm qrho = quadratic_form(rho, n);
  if (!is_pd(qrho)) throw SearchFailed("lattice_drift: weighted rho is not positive definite", qrho.min_eigenvalue());
  QuadraticForm ql = quadratic_form(lm.generator.apply(rho), n);
  if (ql.has_linear()) throw Unsupported("lattice_drift: L rho has a linear part");

  for (const auto& t : lm.couplings) {
    const auto& f = lm.coupling_fields[static_cast<std::size_t>(t.field_id)];
    Poly ell;
    const Poly& rx = rho_x[static_cast<std::size_t>(t.site)];
    if (f.symbolic) {
      ell = f.symbolic->relabel(lm.site_map(t.site), n).apply(rx);
    } else {
      for (int k = 0; k < lm.site.dim; ++k)
        ell += detail::decimal(f.constant[static_cast<std::size_t>(k)]) * rx.derivative(lm.index(t.site, k));
    }
    const QuadraticForm lf = quadratic_form(ell, n);
    for (const auto& v : lf.m)
      if (v != 0) throw Unsupported("lattice_drift: coupling field applied to rho is not linear");
    const Rational w = detail::decimal(weights[static_cast<std::size_t>(t.site)]) * detail::decimal(std::abs(t.amplitude)) / 2;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        ql.at(i, j) += w * lf.linear[static_cast<std::size_t>(i)] * lf.linear[static_cast<std::size_t>(j)];
    ql.constant += w * (1 + lf.constant * lf.constant);
  }

  const double lambda = lm.site.parameters.count("lambda") ? lm.site.parameter("lambda") : 1.0;
  const auto a = detail::bisect_rate(ql, qrho, 2 * detail::decimal(lambda));
  if (!a) throw SearchFailed("lattice_drift: no positive drift rate on the lattice", -ql.max_eigenvalue());
  auto cert = detail::finish_exact("lattice_rho", rho, n, ql, qrho, *a);
  cert.constants = {{"sites", lm.n_sites()}, {"gamma", lm.interaction.gamma}};
  if (lm.has_nonpolynomial_terms()) cert.notes.push_back("tanh couplings bounded by |a l| <= |a| (l^2 + 1) / 2");
  return cert;
}

struct SamplingOptions
{
  int shells = 1000;
  int directions = 100;
  double r_min = 1e-3;
  double r_max = 1e6;
};

namespace detail {

inline std::vector<std::array<double, 3>> sphere_directions(int n)
{
  std::vector<std::array<double, 3>> out;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double r = std::sqrt(1.0 - z * z);
    out.push_back({r * std::cos(golden * i), r * std::sin(golden * i), z});
  }
  return out;
}

}  // namespace detail

/// <x> = (1 + x^2)^{1/2} for the B-S model: a = lambda, b = |eps| + lambda + 1.
inline DriftCertificate bracket_x_drift(const SiteModel& m, const SamplingOptions& opt = {})
{
  if (m.family != "bs") throw Error("bracket_x drift needs the bs model");
  const double eps = m.parameter("eps"), lambda = m.parameter("lambda");
  DriftCertificate c;
  c.rho_name = "bracket_x";
  c.dim = 1;
  c.method = Method::radial_sampling;
  // a positive rate is required; without restoring drift try a small one so the violation is reported
  c.a = lambda > 0 ? lambda : 1e-3;
  c.b = std::abs(eps) + c.a + 1;
  c.constants = {{"eps", eps}, {"lambda", lambda}};
  const symcalc::NumOp op(m.generator);
  double worst = -std::numeric_limits<double>::infinity(), worst_x = 0;
  auto check = [&](double x) {
    const double br = std::sqrt(1 + x * x);
    symcalc::Jet j;
    j.value = br;
    j.grad = {x / br};
    j.hess = {1 / (br * br * br)};
    const double xs[1] = {x};
    const double v = op(xs, j) + c.a * br - c.b;
    ++c.samples;
    if (v > worst) {
      worst = v;
      worst_x = x;
    }
  };
  check(0.0);
  for (int s = 0; s < opt.shells; ++s) {
    const double r = opt.r_min * std::pow(opt.r_max / opt.r_min, static_cast<double>(s) / (opt.shells - 1));
    // the unit sphere in one dimension has two points; repeat them to keep the grid size
    for (int k = 0; k < opt.directions; ++k) check(k % 2 == 0 ? r : -r);
  }
  c.margin = -worst;
  c.worst_radius = worst_x;
  // leading order at |x| -> infinity: L<x> = -lambda |x| + O(1)
  c.asymptotic_ok = c.a <= lambda;
  if (worst > 0 || !c.asymptotic_ok)
    throw SamplingViolation("bracket_x: L<x> + a<x> - b > 0 (value " + std::to_string(worst) + " at x = " + std::to_string(worst_x) + ")",
                            worst_x, worst);
  return c;
}

/// W = (1 + N^2)^{1/2} on H^1: C2 = delta, C1 = c1 + 2|p| + delta + c2.
inline DriftCertificate gauge_w_drift(const SiteModel& m, const SamplingOptions& opt = {})
{
  if (m.family != "htype") throw Error("gauge_W drift needs the htype model");
  const double delta = m.parameter("delta");
  double cmax = 0;
  for (const char* k : {"G11", "G12", "G21", "G22"}) {
    const bool diag = std::string(k) == "G11" || std::string(k) == "G22";
    cmax = std::max(cmax, (diag ? 1.0 : 0.0) + m.parameter(k));
  }
  const double pnorm = std::sqrt(std::pow(m.parameter("p1"), 2) + std::pow(m.parameter("p2"), 2) + std::pow(m.parameter("p3"), 2));
  const int mm = models::GaugeFunctions::m, rr = models::GaugeFunctions::r;
  const double c1 = cmax * (mm + 2.0 * rr * mm * mm + 5.0 * mm * mm);
  const double c2 = cmax;
  DriftCertificate c;
  c.rho_name = "gauge_W";
  c.dim = 3;
  c.method = Method::radial_sampling;
  c.a = delta;
  c.b = c1 + 2 * pnorm + delta + c2;
  c.constants = {{"c1", c1}, {"c2", c2}, {"C1", c.b}, {"C2", c.a}, {"delta", delta}};
  const symcalc::NumOp op(m.generator);
  double worst = -std::numeric_limits<double>::infinity(), worst_r = 0;
  const auto dirs = detail::sphere_directions(opt.directions);
  for (int s = 0; s < opt.shells; ++s) {
    const double r = opt.r_min * std::pow(opt.r_max / opt.r_min, static_cast<double>(s) / (opt.shells - 1));
    for (const auto& dir : dirs) {
      const auto w = models::GaugeFunctions::dilate(dir, r);
      const double v = op(w, models::GaugeFunctions::jet_W(w)) + c.a * models::GaugeFunctions::W(w) - c.b;
      ++c.samples;
      if (v > worst) {
        worst = v;
        worst_r = r;
      }
    }
  }
  c.margin = -worst;
  c.worst_radius = worst_r;
  // LW = -delta N^2 / W + O(1) as N -> infinity
  c.asymptotic_ok = delta > 0;
  if (worst > 0 || !c.asymptotic_ok)
    throw SamplingViolation("gauge_W: LW + C2 W - C1 > 0 (value " + std::to_string(worst) + ")", worst_r, worst);
  return c;
}

inline DriftCertificate named_drift(const SiteModel& m, const std::string& rho_name, const SamplingOptions& opt = {})
{
  if (rho_name == "bracket_x") return bracket_x_drift(m, opt);
  if (rho_name == "gauge_W") return gauge_w_drift(m, opt);
  throw Error("named_drift: unknown rho '" + rho_name + "'");
}

}  // namespace hypolab::lyapunov
