#pragma once

#include "bs.hpp"
#include "filiform.hpp"
#include "heisenberg.hpp"
#include "langevin.hpp"

#include <cmath>

namespace hypolab::models {

using ParamMap = std::map<std::string, double>;

inline const std::vector<std::string>& model_names()
{
  static const std::vector<std::string> names = {"langevin", "bs", "heisenberg_partial", "filiform_full", "filiform_partial", "htype", "grushin"};
  return names;
}

/// Parameters accepted by each catalog entry, with defaults.
inline ParamMap default_params(const std::string& name)
{
  if (name == "langevin") return {{"g", 1}, {"lambda", 1}};
  if (name == "bs") return {{"eps", 1}, {"lambda", 2}};
  if (name == "heisenberg_partial") return {{"xi", 1}, {"lambda", 1}};
  if (name == "filiform_full") return {{"N", 2}, {"lambda", 2}, {"kappa0", 1}, {"kappa1", 1}};
  if (name == "filiform_partial") return {{"n", 4}, {"lambda", 1}};
  if (name == "htype")
    return {{"delta", 1}, {"G11", 0}, {"G12", 0}, {"G21", 0}, {"G22", 0}, {"p1", 0},
            {"p2", 0},    {"p3", 0},  {"q1", 0},  {"q2", 0},  {"q3", 0}};
  if (name == "grushin") return {{"k", 1}, {"n", 1}, {"eps", 1}, {"lambda", 1}, {"m", 1}};
  throw ConfigError("unknown model '" + name + "'");
}

namespace detail {

inline int as_int(double v, const char* what)
{
  if (v != std::floor(v)) throw ConfigError(std::string("parameter ") + what + " must be an integer");
  return static_cast<int>(v);
}

}  // namespace detail

/// Catalog constructor; unknown names and unknown parameters are configuration errors.
inline SiteModel make_site_model(const std::string& name, const ParamMap& overrides = {})
{
  ParamMap p = default_params(name);
  for (const auto& [k, v] : overrides) {
    if (!p.count(k)) throw ConfigError("model '" + name + "' has no parameter '" + k + "'");
    p[k] = v;
  }
  if (name == "langevin") return langevin_site(p["g"], p["lambda"]);
  if (name == "bs") return bs_model(p["eps"], p["lambda"]);
  if (name == "heisenberg_partial") return heisenberg_partial(p["xi"], p["lambda"]);
  if (name == "filiform_full") {
    const int n = detail::as_int(p["N"], "N");
    return filiform_full(n, p["lambda"], filiform_consistent_kappa(n, p["kappa0"], p["kappa1"]));
  }
  if (name == "filiform_partial") return filiform_partial(detail::as_int(p["n"], "n"), p["lambda"]);
  if (name == "htype") {
    HTypeParams h;
    h.delta = p["delta"];
    h.G = {{{p["G11"], p["G12"]}, {p["G21"], p["G22"]}}};
    h.p = {p["p1"], p["p2"], p["p3"]};
    h.q = {p["q1"], p["q2"], p["q3"]};
    return htype_heisenberg(h);
  }
  return grushin_model(detail::as_int(p["k"], "k"), detail::as_int(p["n"], "n"), p["eps"], p["lambda"], detail::as_int(p["m"], "m"));
}

}  // namespace hypolab::models
