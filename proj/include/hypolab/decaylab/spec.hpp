#pragma once

#include "../models.hpp"
#include "../simulate.hpp"
#include "test_functions.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hypolab::decaylab {

inline const std::vector<std::string>& experiment_ids()
{
  static const std::vector<std::string> ids = {"langevin-decay",          "langevin-smoothing", "filiform-full", "filiform-partial",
                                               "heisenberg-concentration", "bs",                 "invariant-evidence"};
  return ids;
}

struct ExperimentSpec
{
  std::string id;
  std::string model;
  models::ParamMap params;

  // lattice
  int sites = 1;
  int lattice_dim = 1;
  models::Boundary boundary = models::Boundary::free;
  models::InteractionSpec interaction;

  // f0 = phi(sum_i w_i x_{site, coord_i}) summed over f_sites (empty: all sites)
  std::string test_function = "sin-sum";
  std::vector<int> f_coords = {0};
  std::vector<double> f_weights;
  std::vector<int> f_sites;

  /// Empty: 0.5 everywhere. One value: broadcast. Site length: repeated on every site. Else full state.
  std::vector<double> x0;
  simulate::EnsembleConfig ensemble;
  /// Finite-difference step for replicas; <= 0 uses 1e-3 (1 + |x0|).
  double h = 0.0;

  /// If set, must equal the rate recomputed from the model.
  std::optional<double> claimed_m;
  bool fit_rate = true;

  // smoothing products
  double t_min = 0.05;
  double bound_factor = 2.0;
  double ladder_ratio = 100.0;
  int max_j = -1;  // <0: model default (2 for langevin, 1 for bs)

  // bs
  std::string part = "gradient";  // gradient | smoothing | lattice | products
  double bs_a = 1e4, bs_b = 1, bs_c = 1e2, bs_d = 1e6;
  double bs_scale = 1.0;
  double bs_delta = 1.0;

  // filiform full
  int order = 1;
  std::vector<double> m_weights;  // empty: m_j = 1

  // filiform partial k-fold products
  int k_fold = 1;

  // invariant evidence windows
  double window1_lo = 10, window1_hi = 15, window2_lo = 15, window2_hi = 20;
};

inline std::vector<double> grid(double lo, double hi, double step)
{
  std::vector<double> out;
  const long n = std::lround((hi - lo) / step);
  for (long k = 0; k <= n; ++k) out.push_back(lo + static_cast<double>(k) * step);
  return out;
}

/// Desk-scale defaults for each experiment id.
inline ExperimentSpec default_spec(const std::string& id)
{
  ExperimentSpec s;
  s.id = id;
  s.ensemble.seed = 1;
  s.ensemble.n_paths = 1000;
  if (id == "langevin-decay") {
    // 5-site chain with a small V0 coupling, started where tanh is steepest
    s.model = "langevin";
    s.sites = 5;
    s.interaction.tanh.push_back({"V0", 0.05, 1.0, 1, 0});
    s.x0 = {0.0};
    s.test_function = "tanh-sum";
    s.ensemble.dt = 5e-3;
    s.ensemble.checkpoints = {0.5, 1, 1.5, 2, 2.5, 3};
  } else if (id == "langevin-smoothing") {
    s.model = "langevin";
    s.test_function = "tanh-sum";
    s.ensemble.dt = 1e-3;
    s.ensemble.checkpoints = {0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1};
  } else if (id == "filiform-full") {
    s.model = "filiform_full";
    s.f_coords = {0, 1};
    s.ensemble.dt = 1e-3;
    s.ensemble.checkpoints = {0, 0.5, 1, 2, 3};
  } else if (id == "filiform-partial") {
    s.model = "filiform_partial";
    s.sites = 2;
    s.interaction.tanh.push_back({"V", 0.1, 1.0, 1, 0});
    s.ensemble.dt = 2e-3;
    s.ensemble.checkpoints = {0.5, 1, 1.5, 2, 2.5, 3};
  } else if (id == "heisenberg-concentration") {
    s.model = "heisenberg_partial";
    s.f_coords = {0, 2};
    s.ensemble.dt = 1e-3;
    s.ensemble.checkpoints = {0.25, 0.5, 1, 2};
  } else if (id == "bs") {
    s.model = "bs";
    s.params = {{"eps", 1}, {"lambda", 3}};
    s.ensemble.dt = 1e-3;
    s.ensemble.checkpoints = {0.25, 0.5, 1, 2};
  } else if (id == "invariant-evidence") {
    s.model = "langevin";
    s.ensemble.dt = 1e-2;
    s.ensemble.checkpoints = grid(1, 20, 1);
  } else {
    throw ConfigError("unknown experiment '" + id + "'");
  }
  s.ensemble.t_max = s.ensemble.checkpoints.back();
  return s;
}

inline models::LatticeModel build_model(const ExperimentSpec& s)
{
  if (s.sites < 1 || s.lattice_dim < 1) throw ConfigError("sites and lattice_dim must be positive");
  const auto site = models::make_site_model(s.model, s.params);
  const auto box = s.lattice_dim == 1 ? models::Box::chain(s.sites) : models::Box::cube(s.lattice_dim, s.sites);
  return models::build_lattice(site, box, s.boundary, s.interaction);
}

inline std::vector<double> initial_point(const ExperimentSpec& s, const models::LatticeModel& lm)
{
  const auto dim = static_cast<std::size_t>(lm.dim());
  const auto sd = static_cast<std::size_t>(lm.site.dim);
  if (s.x0.empty()) return std::vector<double>(dim, 0.5);
  if (s.x0.size() == 1) return std::vector<double>(dim, s.x0[0]);
  if (s.x0.size() == dim) return s.x0;
  if (s.x0.size() == sd) {
    std::vector<double> out;
    for (int x = 0; x < lm.n_sites(); ++x) out.insert(out.end(), s.x0.begin(), s.x0.end());
    return out;
  }
  throw ConfigError("x0 has " + std::to_string(s.x0.size()) + " entries; expected 1, " + std::to_string(sd) + " or " + std::to_string(dim));
}

inline TestFunction build_test_function(const ExperimentSpec& s, const models::LatticeModel& lm)
{
  std::vector<int> sites = s.f_sites;
  if (sites.empty())
    for (int x = 0; x < lm.n_sites(); ++x) sites.push_back(x);
  if (!s.f_weights.empty() && s.f_weights.size() != s.f_coords.size()) throw ConfigError("f_weights and f_coords differ in length");
  std::vector<int> coords;
  std::vector<double> weights;
  for (int x : sites) {
    if (x < 0 || x >= lm.n_sites()) throw ConfigError("f_sites entry " + std::to_string(x) + " outside the box");
    for (std::size_t i = 0; i < s.f_coords.size(); ++i) {
      const int c = s.f_coords[i];
      if (c < 0 || c >= lm.site.dim) throw ConfigError("f_coords entry " + std::to_string(c) + " outside the site");
      coords.push_back(lm.index(x, c));
      weights.push_back(s.f_weights.empty() ? 1.0 : s.f_weights[i]);
    }
  }
  return TestFunction(TestFunction::parse(s.test_function), coords, weights);
}

}  // namespace hypolab::decaylab
