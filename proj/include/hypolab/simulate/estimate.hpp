#pragma once

#include "ensemble.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cstdio>
#include <fstream>
#include <functional>

namespace hypolab::simulate {

using ScalarFn = std::function<double(std::span<const double>)>;

struct Estimate
{
  double t = 0.0;
  double value = 0.0;
  double stderr_ = 0.0;
};

namespace detail {

inline Estimate mean_and_stderr(double t, const std::vector<double>& samples)
{
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  return {t, mean, std::sqrt(ss / (n - 1) / n)};
}

}  // namespace detail

/// Sample mean and standard error of f(X_t) over paths at every checkpoint, reduced in path order.
inline std::vector<Estimate> semigroup_estimate(const Ensemble& ens, const ScalarFn& f, std::size_t replica = 0)
{
  if (replica >= ens.n_replicas()) throw MissingReplica("replica " + std::to_string(replica) + " not in ensemble");
  std::vector<Estimate> out;
  std::vector<double> s(ens.n_paths);
  for (std::size_t c = 0; c < ens.n_checkpoints(); ++c) {
    for (std::size_t p = 0; p < ens.n_paths; ++p) s[p] = f(ens.state(c, p, replica));
    out.push_back(detail::mean_and_stderr(ens.times[c], s));
  }
  return out;
}

/// Central difference (f(X^+) - f(X^-)) / 2h per path for the replica pair along v.
inline std::vector<Estimate> field_derivative_estimate(const Ensemble& ens, const ScalarFn& f, std::span<const double> v)
{
  if (static_cast<int>(v.size()) != ens.dim) throw DimensionMismatch(ens.dim, static_cast<int>(v.size()));
  if (std::all_of(v.begin(), v.end(), [](double c) { return c == 0.0; })) {
    std::vector<Estimate> out;
    for (double t : ens.times) out.push_back({t, 0.0, 0.0});
    return out;
  }
  const int k = ens.find_direction(v);
  if (k < 0) throw MissingReplica("ensemble has no replica pair along the requested direction");
  const std::size_t rp = 1 + 2 * static_cast<std::size_t>(k), rm = rp + 1;
  std::vector<Estimate> out;
  std::vector<double> s(ens.n_paths);
  for (std::size_t c = 0; c < ens.n_checkpoints(); ++c) {
    for (std::size_t p = 0; p < ens.n_paths; ++p) s[p] = (f(ens.state(c, p, rp)) - f(ens.state(c, p, rm))) / (2 * ens.h);
    out.push_back(detail::mean_and_stderr(ens.times[c], s));
  }
  return out;
}

/// V evaluated at x0 gives the direction.
inline std::vector<Estimate> field_derivative_estimate(const Ensemble& ens, const ScalarFn& f, const VectorField& v)
{
  return field_derivative_estimate(ens, f, v.evaluate(ens.x0));
}

struct DecayFit
{
  double rate = 0.0;
  double intercept = 0.0;  // log of the prefactor
  double ci_half_width = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n = 0;
  bool weighted = false;
};

/// Weighted least squares of log y against t; rate is minus the slope, with a Student-t 95% interval
/// from the residual scatter. Weights (y/stderr)^2 are used when every stderr is positive.
inline DecayFit fit_decay_rate(const std::vector<Estimate>& series)
{
  if (series.size() < 4) throw Error("fit_decay_rate: need at least 4 points, got " + std::to_string(series.size()));
  for (const auto& e : series)
    if (!(e.value > 0)) throw NonPositiveValue("fit_decay_rate: value " + std::to_string(e.value) + " at t=" + std::to_string(e.t));
  DecayFit fit;
  fit.n = series.size();
  fit.weighted = std::all_of(series.begin(), series.end(), [](const Estimate& e) { return e.stderr_ > 0; });
  double sw = 0, st = 0, sy = 0;
  std::vector<double> w, y;
  for (const auto& e : series) {
    const double wi = fit.weighted ? (e.value / e.stderr_) * (e.value / e.stderr_) : 1.0;
    w.push_back(wi);
    y.push_back(std::log(e.value));
    sw += wi;
    st += wi * e.t;
    sy += wi * y.back();
  }
  const double tbar = st / sw, ybar = sy / sw;
  double stt = 0, sty = 0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    stt += w[i] * (series[i].t - tbar) * (series[i].t - tbar);
    sty += w[i] * (series[i].t - tbar) * (y[i] - ybar);
  }
  if (!(stt > 0)) throw Error("fit_decay_rate: all points share one time");
  const double slope = sty / stt;
  fit.rate = -slope;
  fit.intercept = ybar - slope * tbar;
  double rss = 0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double r = y[i] - fit.intercept - slope * series[i].t;
    rss += w[i] * r * r;
  }
  const double dof = static_cast<double>(series.size() - 2);
  const double se = std::sqrt(rss / dof / stt);
  const boost::math::students_t dist(dof);
  fit.ci_half_width = boost::math::quantile(boost::math::complement(dist, 0.025)) * se;
  fit.ci_low = fit.rate - fit.ci_half_width;
  fit.ci_high = fit.rate + fit.ci_half_width;
  return fit;
}

/// Rows path_id, replica_id, t, x_0..x_{dim-1} with round-trip precision.
inline void write_checkpoints_csv(const Ensemble& ens, const std::string& path)
{
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "path_id,replica_id,t";
  for (int i = 0; i < ens.dim; ++i) out << ",x_" << i;
  out << '\n';
  char buf[32];
  for (std::size_t c = 0; c < ens.n_checkpoints(); ++c)
    for (std::size_t p = 0; p < ens.n_paths; ++p)
      for (std::size_t r = 0; r < ens.n_replicas(); ++r) {
        std::snprintf(buf, sizeof buf, "%.17g", ens.times[c]);
        out << p << ',' << r << ',' << buf;
        for (double v : ens.state(c, p, r)) {
          std::snprintf(buf, sizeof buf, "%.17g", v);
          out << ',' << buf;
        }
        out << '\n';
      }
}

}  // namespace hypolab::simulate
