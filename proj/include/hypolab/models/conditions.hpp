#pragma once

#include "lattice.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hypolab::models {

struct ConditionEntry
{
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = true;
  std::string detail;
};

struct ConditionReport
{
  std::string family;
  std::vector<ConditionEntry> entries;
  /// Admissible decay rate for the family's decay statement; NaN when the family has none.
  double m_max = std::numeric_limits<double>::quiet_NaN();
  /// Interaction budget eta (filiform partial) or the subtracted sup-sum (other families).
  double budget = 0.0;
  bool pass = true;

  const ConditionEntry& entry(const std::string& name) const
  {
    for (const auto& e : entries)
      if (e.name == name) return e;
    throw Error("condition report has no entry '" + name + "'");
  }
  bool has_entry(const std::string& name) const
  {
    return std::any_of(entries.begin(), entries.end(), [&](const auto& e) { return e.name == name; });
  }

  void add(ConditionEntry e)
  {
    pass = pass && e.pass;
    entries.push_back(std::move(e));
  }

  nlohmann::json to_json() const
  {
    nlohmann::json j;
    j["family"] = family;
    j["pass"] = pass;
    j["m_max"] = std::isnan(m_max) ? nlohmann::json(nullptr) : nlohmann::json(m_max);
    j["budget"] = budget;
    auto& arr = j["conditions"] = nlohmann::json::array();
    for (const auto& e : entries) {
      auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(std::isnan(v) ? "nan" : v > 0 ? "inf" : "-inf"); };
      arr.push_back({{"name", e.name}, {"value", num(e.value)}, {"bound", num(e.bound)}, {"pass", e.pass}, {"detail", e.detail}});
    }
    return j;
  }
};

/// Optional thresholds for the "sufficiently small" interaction constants; infinite means report only.
struct ConditionOptions
{
  double G_max = std::numeric_limits<double>::infinity();
  double qtilde_max = std::numeric_limits<double>::infinity();
};

namespace detail {

/// Coupling terms grouped by site, restricted to the named carrying fields.
inline std::vector<std::vector<const CouplingTerm*>> terms_by_site(const LatticeModel& lm, const std::vector<std::string>& fields)
{
  std::vector<std::vector<const CouplingTerm*>> out(static_cast<std::size_t>(lm.n_sites()));
  for (const auto& t : lm.couplings) {
    const auto& name = lm.coupling_fields[static_cast<std::size_t>(t.field_id)].name;
    if (std::find(fields.begin(), fields.end(), name) != fields.end()) out[static_cast<std::size_t>(t.site)].push_back(&t);
  }
  return out;
}

/// ||V_z q_y||_inf bounded by the sum over the terms making up q_y.
inline double field_on_coupling(const LatticeModel& lm, const SiteFieldNum& v, int z, const std::vector<const CouplingTerm*>& qy)
{
  double s = 0.0;
  for (const auto* t : qy) s += coupling_derivative_sup(lm, v, z, *t);
  return s;
}

/// sup_z sum_y (||V_z q_y|| + ||V_y q_z||).
inline double symmetric_sup_sum(const LatticeModel& lm, const SiteFieldNum& v, const std::vector<std::vector<const CouplingTerm*>>& q)
{
  double best = 0.0;
  for (int z = 0; z < lm.n_sites(); ++z) {
    double s = 0.0;
    for (int y = 0; y < lm.n_sites(); ++y)
      s += field_on_coupling(lm, v, z, q[static_cast<std::size_t>(y)]) + field_on_coupling(lm, v, y, q[static_cast<std::size_t>(z)]);
    best = std::max(best, s);
  }
  return best;
}

inline void linear_coupling_entries(const LatticeModel& lm, ConditionReport& r, const ConditionOptions& opt)
{
  const int ns = lm.n_sites();
  double weighted = 0.0, rows = 0.0, total = 0.0;
  for (int y = 0; y < ns; ++y) {
    double s = 0.0;
    for (int x = 0; x < ns; ++x) s += lm.weights[static_cast<std::size_t>(x)] * std::abs(lm.G(x, y));
    weighted = std::max(weighted, s / lm.weights[static_cast<std::size_t>(y)]);
  }
  for (int x = 0; x < ns; ++x) rows = std::max(rows, lm.G.row(x).cwiseAbs().sum());
  total = lm.G.cwiseAbs().sum();
  const double gconst = std::max(weighted, rows);
  r.add({"G", gconst, opt.G_max, gconst <= opt.G_max,
         "smallest G with sum_x eps_x G_xy <= G eps_y and sup_x sum_y |G_xy| <= G"});
  r.add({"G_total", total, std::numeric_limits<double>::infinity(), std::isfinite(total), "sum_{x,y} |G_xy|"});
}

}  // namespace detail

inline ConditionReport check_conditions(const LatticeModel& lm, const ConditionOptions& opt = {})
{
  ConditionReport r;
  r.family = lm.site.family;
  detail::linear_coupling_entries(lm, r, opt);
  const auto& fam = lm.site.family;

  if (fam == "langevin") {
    const auto zq = detail::terms_by_site(lm, {"Z0", "Z1", "Z2"});
    double amp = 0.0;
    for (const auto& t : lm.couplings) {
      const auto& name = lm.coupling_fields[static_cast<std::size_t>(t.field_id)].name;
      if (name == "Z0" || name == "Z1" || name == "Z2") amp = std::max(amp, std::abs(t.amplitude));
    }
    // |tanh| <= 1 and each bracket term is >= 1, so q~ = |a|/3 works for every delta in [0, 1]
    const double qtilde = amp / 3.0;
    r.add({"GG", qtilde, opt.qtilde_max, qtilde <= opt.qtilde_max, "q~ with |q_{i,x}| <= q~ sum (1+w^2)^{delta/2}"});

    double psi = 0.0;
    bool z0q2 = true;
    for (const char* zj : {"Z0", "Z1", "Z2"}) {
      const auto v = resolve_site_field(lm.site, zj);
      for (const auto& t : lm.couplings) {
        const auto& name = lm.coupling_fields[static_cast<std::size_t>(t.field_id)].name;
        if (name != "Z0" && name != "Z1" && name != "Z2") continue;
        for (int y = 0; y < lm.n_sites(); ++y) {
          const double s = coupling_derivative_sup(lm, v, y, t);
          psi = std::max(psi, s);
          if (std::string(zj) == "Z0" && name == "Z2" && s > 0) z0q2 = false;
        }
      }
    }
    r.add({"asss1_Z0q2", z0q2 ? 0.0 : 1.0, 0.0, z0q2, "Z_{0,w} q_{2,y} = 0"});
    r.add({"asss1_psi", psi, 1.0, psi < 1.0, "sup |Z_{j,y} q_{i,w}| <= psi < 1"});

    if (lm.site.eigen_directions.size() == 3 && lm.site.eigen_directions[1].value.imag() != 0.0) {
      const double xi0 = lm.site.eigen_direction("V0").value.real();
      const double rexi = lm.site.eigen_direction("Vp").value.real();
      const auto eta = detail::terms_by_site(lm, {"V0"});
      const double sup = 0.5 * detail::symmetric_sup_sum(lm, resolve_site_field(lm.site, "V0"), eta);
      r.budget = sup;
      r.m_max = std::min(2 * xi0 - sup, 2 * rexi);
      r.add({"assm", r.m_max, 0.0, r.m_max > 0.0,
             "m <= min(2 xi0 - sup_z sum_y (|V0_z eta_y| + |V0_y eta_z|)/2, 2 Re xi+-); linear coupling G not included"});
    } else {
      r.add({"assm", 0.0, 0.0, false, "drift action has no conjugate eigen pair"});
    }
  } else if (fam == "filiform_partial") {
    const auto q = detail::terms_by_site(lm, {"V"});
    const double lambda = lm.site.parameter("lambda");
    const double eta = lm.site.has_field("V") ? 0.5 * detail::symmetric_sup_sum(lm, resolve_site_field(lm.site, "V"), q) : 0.0;
    r.budget = eta;
    r.m_max = 2 * (lambda - eta);
    r.add({"eta", eta, lambda, eta < lambda, "eta = sup_w sum_y (|V_w q_y| + |V_y q_w|)/2 < lambda"});
  } else if (fam == "heisenberg_partial") {
    const double lambda = lm.site.parameter("lambda");
    const auto q = detail::terms_by_site(lm, {"V"});
    double sup = 0.0;
    if (!q.empty() && std::any_of(q.begin(), q.end(), [](const auto& v) { return !v.empty(); }))
      sup = detail::symmetric_sup_sum(lm, resolve_site_field(lm.site, "V"), q);
    r.budget = sup;
    r.m_max = 2 * lambda - sup;
    r.add({"m", r.m_max, 0.0, r.m_max >= 0.0, "0 <= m <= 2 lambda - sup_k sum_j (|V_j q_k| + |V_k q_j|)"});
    const int ycoord = lm.site.var_index("y");
    bool y_only = true;
    for (const auto& t : lm.couplings) {
      const auto& name = lm.coupling_fields[static_cast<std::size_t>(t.field_id)].name;
      if (name != "V" && t.arg_coord != ycoord) y_only = false;
    }
    r.add({"gamma_eta_y_only", y_only ? 1.0 : 0.0, 1.0, y_only, "gamma_i and eta_i depend only on the y coordinates"});
  } else if (fam == "bs") {
    const double lambda = lm.site.parameter("lambda");
    const auto q = detail::terms_by_site(lm, {"d"});
    const auto d = resolve_site_field(lm.site, "d");
    double sup = 0.0;
    for (int i = 0; i < lm.n_sites(); ++i) {
      double s = 0.0;
      for (int k = 0; k < lm.n_sites(); ++k)
        s += std::abs(lm.G(i, k)) + std::abs(lm.G(k, i)) + detail::field_on_coupling(lm, d, k, q[static_cast<std::size_t>(i)]) +
             detail::field_on_coupling(lm, d, i, q[static_cast<std::size_t>(k)]);
      sup = std::max(sup, s);
    }
    r.budget = sup;
    r.m_max = 2 * (lambda - 1) - sup;
    r.add({"m", r.m_max, 0.0, r.m_max >= 0.0, "0 <= m <= 2(lambda-1) - sup_i sum_k (|G_ik| + |G_ki| + |d_k q_i| + |d_i q_k|)"});
  }
  return r;
}

}  // namespace hypolab::models
