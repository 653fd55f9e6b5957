#pragma once

#include "../errors.hpp"
#include "../models/lattice.hpp"
#include "../symcalc.hpp"

#include <cmath>
#include <functional>
#include <memory>

namespace hypolab::simulate {

using symcalc::DiffOp;
using symcalc::Generator;
using symcalc::Monomial;
using symcalc::Poly;
using symcalc::Rational;
using symcalc::VectorField;

/// dX = b(X) dt + sum_m sigma_m(X) dW_m, with the Stratonovich drift kept for the Heun scheme.
struct SDESystem
{
  int dim = 0;
  Generator origin;
  /// Ito drift: first-order coefficients of the canonical form of L.
  VectorField drift_field;
  /// b - 1/2 sum_m (sigma_m . grad) sigma_m = b - sum_m D_m (G_m . grad) G_m
  VectorField strat_drift_field;
  /// Noise directions G_m with sigma_m = sqrt(2 D_m) G_m.
  std::vector<VectorField> noise_fields;
  std::vector<Rational> noise_weights;  // D_m
  /// Non-polynomial drift added to both drifts (lattice tanh couplings).
  std::function<void(std::span<const double>, std::span<double>)> extra_drift;

  symcalc::NumField drift;
  symcalc::NumField strat_drift;
  std::vector<symcalc::NumField> noise;
  std::vector<double> noise_scale;  // sqrt(2 D_m)

  int n_noise() const { return static_cast<int>(noise.size()); }

  void eval_drift(std::span<const double> x, std::span<double> out, bool stratonovich) const
  {
    (stratonovich ? strat_drift : drift).evaluate(x, out);
    if (extra_drift) extra_drift(x, out);
  }

  /// Column m of the diffusion matrix, including the sqrt(2 D_m) factor.
  void eval_noise(int m, std::span<const double> x, std::span<double> out) const
  {
    noise[static_cast<std::size_t>(m)].evaluate(x, out);
    const double s = noise_scale[static_cast<std::size_t>(m)];
    for (auto& v : out) v *= s;
  }

  /// b.grad f + sum_m D_m (G_m G_m^T : Hess f) at x, for a jet of f.
  double generator_action(std::span<const double> x, const symcalc::Jet& f) const
  {
    std::vector<double> b(static_cast<std::size_t>(dim)), g(static_cast<std::size_t>(dim));
    eval_drift(x, b, false);
    double v = 0.0;
    for (int i = 0; i < dim; ++i) v += b[static_cast<std::size_t>(i)] * f.grad[static_cast<std::size_t>(i)];
    for (int m = 0; m < n_noise(); ++m) {
      noise[static_cast<std::size_t>(m)].evaluate(x, g);
      const double d = symcalc::to_double(noise_weights[static_cast<std::size_t>(m)]);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) v += d * g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(j)] * f.h(i, j, dim);
    }
    return v;
  }
};

namespace detail {

inline Monomial pair_index(int i, int j) { return Monomial::unit(i) * Monomial::unit(j); }

}  // namespace detail

/// Ito form of a generator whose second-order part is a nonnegative combination of squared fields.
/// The quadratic terms are read as a symmetric matrix S over the distinct fields and factored
/// exactly as S = sum_m D_m l_m l_m^T; the noise directions are G_m = sum_k l_m[k] F_k.
inline SDESystem to_sde(const Generator& l)
{
  const int n = l.dim();
  std::vector<VectorField> fields;
  auto field_id = [&](const VectorField& f) {
    for (std::size_t i = 0; i < fields.size(); ++i)
      if (fields[i] == f) return static_cast<int>(i);
    fields.push_back(f);
    return static_cast<int>(fields.size()) - 1;
  };
  std::vector<std::tuple<int, int, Rational>> entries;
  for (const auto& q : l.quad_terms()) entries.emplace_back(field_id(q.left), field_id(q.right), q.coeff);
  const int r = static_cast<int>(fields.size());
  std::vector<Rational> s(static_cast<std::size_t>(r * r), Rational(0));
  auto at = [&](int i, int j) -> Rational& { return s[static_cast<std::size_t>(i * r + j)]; };
  for (const auto& [i, j, c] : entries) {
    at(i, j) += c / 2;
    at(j, i) += c / 2;
  }

  SDESystem sys;
  sys.dim = n;
  sys.origin = l;
  std::vector<bool> done(static_cast<std::size_t>(r), false);
  for (int step = 0; step < r; ++step) {
    int piv = -1;
    for (int i = 0; i < r; ++i)
      if (!done[static_cast<std::size_t>(i)] && (piv < 0 || at(i, i) > at(piv, piv))) piv = i;
    const Rational d = at(piv, piv);
    if (d < 0) throw NotSumOfSquares("to_sde: second-order part is not a nonnegative sum of squares");
    if (d == 0) {
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
          if (!done[static_cast<std::size_t>(i)] && !done[static_cast<std::size_t>(j)] && at(i, j) != 0)
            throw NotSumOfSquares("to_sde: second-order part is indefinite");
      break;
    }
    done[static_cast<std::size_t>(piv)] = true;
    VectorField g = fields[static_cast<std::size_t>(piv)];
    std::vector<Rational> col(static_cast<std::size_t>(r), Rational(0));
    for (int i = 0; i < r; ++i)
      if (!done[static_cast<std::size_t>(i)] && at(i, piv) != 0) {
        col[static_cast<std::size_t>(i)] = at(i, piv) / d;
        g += col[static_cast<std::size_t>(i)] * fields[static_cast<std::size_t>(i)];
      }
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        if (!done[static_cast<std::size_t>(i)] && !done[static_cast<std::size_t>(j)])
          at(i, j) -= d * col[static_cast<std::size_t>(i)] * col[static_cast<std::size_t>(j)];
    if (g.is_zero()) continue;
    sys.noise_fields.push_back(std::move(g));
    sys.noise_weights.push_back(d);
  }

  // the canonical second-order part must be exactly sum_m D_m G_m G_m^T
  DiffOp second(n);
  for (std::size_t m = 0; m < sys.noise_fields.size(); ++m) {
    const auto& g = sys.noise_fields[m];
    for (const auto& [i, pi] : g.components())
      for (const auto& [j, pj] : g.components()) second.add(detail::pair_index(i, j), sys.noise_weights[m] * pi * pj);
  }
  VectorField b(n);
  for (const auto& [alpha, p] : l.canonical().terms()) {
    if (alpha.degree() == 0) throw NotSumOfSquares("to_sde: generator has a zeroth-order term");
    if (alpha.degree() > 2) throw NotSumOfSquares("to_sde: generator has order above two");
    if (alpha.degree() == 1) {
      for (int i = 0; i < alpha.span(); ++i)
        if (alpha[i] == 1) b.add(i, p);
    } else {
      second.add(alpha, -p);
    }
  }
  if (!second.is_zero()) throw NotSumOfSquares("to_sde: second-order part does not factor into the quadratic terms");

  sys.drift_field = b;
  VectorField corr(n);
  for (std::size_t m = 0; m < sys.noise_fields.size(); ++m) {
    const auto& g = sys.noise_fields[m];
    for (const auto& [k, pk] : g.components()) corr.add(k, sys.noise_weights[m] * g.apply(pk));
  }
  sys.strat_drift_field = b - corr;
  sys.drift = symcalc::NumField(sys.drift_field);
  sys.strat_drift = symcalc::NumField(sys.strat_drift_field);
  for (std::size_t m = 0; m < sys.noise_fields.size(); ++m) {
    sys.noise.emplace_back(sys.noise_fields[m]);
    sys.noise_scale.push_back(std::sqrt(2 * symcalc::to_double(sys.noise_weights[m])));
  }
  return sys;
}

/// Lattice SDE: the polynomial generator plus the tanh coupling drift.
inline SDESystem to_sde(const models::LatticeModel& lm)
{
  SDESystem sys = to_sde(lm.generator);
  if (lm.has_nonpolynomial_terms()) {
    auto model = std::make_shared<models::LatticeModel>(lm);
    sys.extra_drift = [model](std::span<const double> x, std::span<double> out) { model->add_coupling_drift(x, out); };
  }
  return sys;
}

}  // namespace hypolab::simulate
