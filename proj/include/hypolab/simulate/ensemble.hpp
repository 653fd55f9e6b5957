#pragma once

#include "sde.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <optional>
#include <random>
#include <thread>

namespace hypolab::simulate {

enum class Scheme { euler_maruyama, stochastic_heun };

struct EnsembleConfig
{
  std::size_t n_paths = 1000;
  double dt = 1e-3;
  double t_max = 1.0;
  std::vector<double> checkpoints;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::euler_maruyama;
  double cap = 1e9;
  /// 0: HYPOLAB_WORKERS if set, else hardware concurrency.
  unsigned workers = 0;
  /// false gives every replica its own noise stream (only useful as a CRN baseline).
  bool common_noise = true;
};

inline Scheme parse_scheme(const std::string& s)
{
  if (s == "euler_maruyama" || s == "euler") return Scheme::euler_maruyama;
  if (s == "stochastic_heun" || s == "heun") return Scheme::stochastic_heun;
  throw ConfigError("unknown scheme '" + s + "'");
}

inline std::string scheme_name(Scheme s) { return s == Scheme::euler_maruyama ? "euler_maruyama" : "stochastic_heun"; }

namespace detail {

inline bool is_step_multiple(double t, double dt, long& steps)
{
  const double k = std::round(t / dt);
  steps = static_cast<long>(k);
  return std::abs(k * dt - t) <= 1e-9 * std::max(1.0, std::abs(t));
}

}  // namespace detail

/// Step indices of the checkpoints; throws ConfigError on an invalid configuration.
inline std::vector<long> validate(const EnsembleConfig& cfg)
{
  if (!(cfg.dt > 0) || !std::isfinite(cfg.dt)) throw ConfigError("dt must be positive");
  if (cfg.n_paths < 2) throw ConfigError("n_paths must be at least 2");
  if (!(cfg.t_max >= 0)) throw ConfigError("t_max must be nonnegative");
  if (!(cfg.cap > 0)) throw ConfigError("cap must be positive");
  if (cfg.checkpoints.empty()) throw ConfigError("no checkpoints");
  std::vector<long> steps;
  for (double t : cfg.checkpoints) {
    long k = 0;
    if (t < 0 || t > cfg.t_max * (1 + 1e-12)) throw ConfigError("checkpoint " + std::to_string(t) + " outside [0, t_max]");
    if (!detail::is_step_multiple(t, cfg.dt, k)) throw ConfigError("checkpoint " + std::to_string(t) + " is not a multiple of dt");
    if (!steps.empty() && k <= steps.back()) throw ConfigError("checkpoints must be strictly increasing");
    steps.push_back(k);
  }
  return steps;
}

/// Replica layout: 0 is the base point, 2k+1 and 2k+2 are x0 + h d_k and x0 - h d_k.
struct ReplicaPlan
{
  std::vector<std::vector<double>> directions;
  /// <= 0 selects 1e-3 (1 + |x0|).
  double h = 0.0;
};

inline double default_step(std::span<const double> x0)
{
  double n = 0.0;
  for (double v : x0) n += v * v;
  return 1e-3 * (1.0 + std::sqrt(n));
}

struct Ensemble
{
  int dim = 0;
  std::size_t n_paths = 0;
  std::vector<double> x0;
  std::vector<std::vector<double>> directions;
  double h = 0.0;
  std::vector<double> times;
  EnsembleConfig config;
  std::vector<double> states;  // [checkpoint][path][replica][dim]

  std::size_t n_replicas() const { return 1 + 2 * directions.size(); }
  std::size_t n_checkpoints() const { return times.size(); }

  std::span<const double> state(std::size_t c, std::size_t path, std::size_t replica) const
  {
    const std::size_t off = ((c * n_paths + path) * n_replicas() + replica) * static_cast<std::size_t>(dim);
    return {states.data() + off, static_cast<std::size_t>(dim)};
  }

  /// Index of the direction parallel to v with the same orientation, or -1.
  int find_direction(std::span<const double> v) const
  {
    for (std::size_t k = 0; k < directions.size(); ++k) {
      double diff = 0.0, scale = 0.0;
      for (int i = 0; i < dim; ++i) {
        diff = std::max(diff, std::abs(directions[k][static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(i)]));
        scale = std::max(scale, std::abs(v[static_cast<std::size_t>(i)]));
      }
      if (diff <= 1e-12 * std::max(1.0, scale)) return static_cast<int>(k);
    }
    return -1;
  }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stream seed for (seed, path, replica); depends on nothing else so worker count is irrelevant.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t path, std::uint64_t replica)
{
  return splitmix64(splitmix64(splitmix64(seed) ^ path) ^ (replica * 0xd1b54a32d192ed03ULL));
}

inline unsigned worker_count(unsigned requested)
{
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HYPOLAB_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct PathFailure
{
  double t = 0.0;
  int coordinate = -1;
  double value = 0.0;
};

/// One Euler or Heun step for a single replica with increments dw.
inline void step(const SDESystem& sys, Scheme scheme, double dt, std::span<const double> dw, std::span<double> x,
                 std::vector<double>& a, std::vector<double>& g, std::vector<double>& pred, std::vector<double>& a2)
{
  const std::size_t n = x.size();
  const int nn = sys.n_noise();
  if (scheme == Scheme::euler_maruyama) {
    sys.eval_drift(x, a, false);
    for (std::size_t i = 0; i < n; ++i) a[i] *= dt;
    for (int m = 0; m < nn; ++m) {
      sys.eval_noise(m, x, g);
      for (std::size_t i = 0; i < n; ++i) a[i] += g[i] * dw[static_cast<std::size_t>(m)];
    }
    for (std::size_t i = 0; i < n; ++i) x[i] += a[i];
    return;
  }
  // Stratonovich Heun: predictor with the values at x, corrector averages x and the predictor
  sys.eval_drift(x, a, true);
  for (std::size_t i = 0; i < n; ++i) a[i] *= dt;
  std::vector<double> noise_incr(n, 0.0);
  for (int m = 0; m < nn; ++m) {
    sys.eval_noise(m, x, g);
    for (std::size_t i = 0; i < n; ++i) noise_incr[i] += g[i] * dw[static_cast<std::size_t>(m)];
  }
  for (std::size_t i = 0; i < n; ++i) pred[i] = x[i] + a[i] + noise_incr[i];
  sys.eval_drift(pred, a2, true);
  for (std::size_t i = 0; i < n; ++i) a[i] = 0.5 * (a[i] + a2[i] * dt);
  for (int m = 0; m < nn; ++m) {
    sys.eval_noise(m, pred, g);
    for (std::size_t i = 0; i < n; ++i) noise_incr[i] += g[i] * dw[static_cast<std::size_t>(m)];
  }
  for (std::size_t i = 0; i < n; ++i) x[i] += a[i] + 0.5 * noise_incr[i];
}

}  // namespace detail

/// Simulate n_paths paths from x0 plus the replicas in plan. Blowup reports the lowest failing path.
inline Ensemble integrate(const SDESystem& sys, std::span<const double> x0, const EnsembleConfig& cfg, const ReplicaPlan& plan = {})
{
  if (static_cast<int>(x0.size()) != sys.dim) throw DimensionMismatch(sys.dim, static_cast<int>(x0.size()));
  const std::vector<long> ck = validate(cfg);
  for (const auto& d : plan.directions)
    if (static_cast<int>(d.size()) != sys.dim) throw DimensionMismatch(sys.dim, static_cast<int>(d.size()));

  Ensemble ens;
  ens.dim = sys.dim;
  ens.n_paths = cfg.n_paths;
  ens.x0.assign(x0.begin(), x0.end());
  ens.directions = plan.directions;
  ens.h = plan.h > 0 ? plan.h : default_step(x0);
  ens.config = cfg;
  for (long k : ck) ens.times.push_back(static_cast<double>(k) * cfg.dt);
  const std::size_t nrep = ens.n_replicas();
  const std::size_t n = static_cast<std::size_t>(sys.dim);
  ens.states.assign(ck.size() * cfg.n_paths * nrep * n, 0.0);

  std::vector<std::optional<detail::PathFailure>> failures(cfg.n_paths);
  const double sqdt = std::sqrt(cfg.dt);
  const std::size_t nn = static_cast<std::size_t>(sys.n_noise());

  auto run_path = [&](std::size_t p) {
    std::vector<double> x(nrep * n);
    for (std::size_t r = 0; r < nrep; ++r)
      for (std::size_t i = 0; i < n; ++i) {
        double v = x0[i];
        if (r > 0) {
          const auto& d = ens.directions[(r - 1) / 2];
          v += (r % 2 == 1 ? ens.h : -ens.h) * d[i];
        }
        x[r * n + i] = v;
      }
    const std::size_t streams = cfg.common_noise ? 1 : nrep;
    std::vector<std::mt19937_64> rng;
    for (std::size_t s = 0; s < streams; ++s) rng.emplace_back(detail::stream_seed(cfg.seed, p, s));
    std::normal_distribution<double> normal;
    std::vector<double> dw(nn * streams), a(n), g(n), pred(n), a2(n);
    std::size_t next = 0;
    auto store = [&]() {
      for (std::size_t r = 0; r < nrep; ++r)
        std::copy_n(x.begin() + static_cast<long>(r * n), n,
                    ens.states.begin() + static_cast<long>(((next * cfg.n_paths + p) * nrep + r) * n));
      ++next;
    };
    for (long k = 0;; ++k) {
      if (next < ck.size() && ck[next] == k) store();
      if (next == ck.size()) return;
      for (std::size_t s = 0; s < streams; ++s)
        for (std::size_t m = 0; m < nn; ++m) dw[s * nn + m] = sqdt * normal(rng[s]);
      for (std::size_t r = 0; r < nrep; ++r) {
        std::span<double> xr(x.data() + r * n, n);
        const std::size_t s = cfg.common_noise ? 0 : r;
        detail::step(sys, cfg.scheme, cfg.dt, std::span<const double>(dw.data() + s * nn, nn), xr, a, g, pred, a2);
        for (std::size_t i = 0; i < n; ++i)
          if (!std::isfinite(xr[i]) || std::abs(xr[i]) > cfg.cap) {
            failures[p] = detail::PathFailure{static_cast<double>(k + 1) * cfg.dt, static_cast<int>(i), xr[i]};
            return;
          }
      }
    }
  };

  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(detail::worker_count(cfg.workers), cfg.n_paths));
  if (workers <= 1) {
    for (std::size_t p = 0; p < cfg.n_paths; ++p) run_path(p);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t p = w; p < cfg.n_paths; p += workers) run_path(p);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  for (std::size_t p = 0; p < cfg.n_paths; ++p)
    if (failures[p]) throw Blowup(p, failures[p]->t, failures[p]->coordinate, failures[p]->value);
  return ens;
}

}  // namespace hypolab::simulate
