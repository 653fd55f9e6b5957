#pragma once

#include "site_model.hpp"

#include <vector>

namespace hypolab::models {

/// Dilation weights compatible with the realization below: kappa_{j+1} = kappa_j + kappa_0 for j >= 1.
inline std::vector<double> filiform_consistent_kappa(int n_layers, double kappa0, double kappa1)
{
  if (n_layers < 1) throw Error("filiform: N must be >= 1");
  std::vector<double> k(static_cast<std::size_t>(n_layers + 2));
  k[0] = kappa0;
  k[1] = kappa1;
  for (std::size_t j = 2; j < k.size(); ++j) k[j] = k[j - 1] + kappa0;
  return k;
}

/// L = Y_1^2 + Y_0 - lambda D on R^{N+2} with Y_1 = d_1, Y_0 = d_0 + sum_j x_j d_{j+1},
/// Y_{j+1} = [Y_0, Y_j] and D = sum_k kappa_k x_k d_k.
inline SiteModel filiform_full(int n_layers, double lambda_in, const std::vector<double>& kappa_in)
{
  using detail::partial;
  using detail::var;
  if (n_layers < 1) throw Error("filiform_full: N must be >= 1");
  const int n = n_layers + 2;
  if (static_cast<int>(kappa_in.size()) != n) throw DimensionMismatch(n, static_cast<int>(kappa_in.size()));
  for (double k : kappa_in)
    if (!(k > 0)) throw Error("filiform_full: kappa_i must be positive");
  const Rational lambda = detail::exact(lambda_in, "lambda");
  std::vector<Rational> kappa;
  for (double k : kappa_in) kappa.push_back(detail::exact(k, "kappa"));

  SiteModel m;
  m.family = "filiform_full";
  m.dim = n;
  for (int i = 0; i < n; ++i) m.var_names.push_back("x" + std::to_string(i));
  m.parameters = {{"N", n_layers}, {"lambda", lambda_in}};
  for (int i = 0; i < n; ++i) m.parameters["kappa" + std::to_string(i)] = kappa_in[static_cast<std::size_t>(i)];

  VectorField y0 = partial(n, 0);
  for (int j = 1; j <= n_layers; ++j) y0.add(j + 1, var(j));
  std::vector<VectorField> y = {y0, partial(n, 1)};
  for (int j = 1; j <= n_layers; ++j) y.push_back(symcalc::commutator(y0, y[static_cast<std::size_t>(j)]));
  VectorField d(n);
  for (int k = 0; k < n; ++k) d.add(k, kappa[static_cast<std::size_t>(k)] * var(k));

  Generator l(n);
  l.add_square(1, y[1]);
  l.add_lin(1, y0);
  l.add_lin(-lambda, d);
  m.generator = l;
  for (int i = 0; i < n; ++i) m.fields["Y" + std::to_string(i)] = y[static_cast<std::size_t>(i)];
  m.fields["D"] = d;

  auto ys = [&](int i) -> const VectorField& { return y[static_cast<std::size_t>(i)]; };
  for (int j = 1; j < n; ++j) {
    const Rational sign = (j % 2 == 1) ? 1 : -1;
    m.expect("Y" + std::to_string(j) + " = " + (j % 2 == 1 ? "" : "-") + "d_" + std::to_string(j), ys(j), partial(n, j, sign));
  }
  m.expect("[Y0,Y" + std::to_string(n - 1) + "] = 0", symcalc::commutator(y0, ys(n - 1)), VectorField(n));
  for (int i = 1; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      m.expect("[Y" + std::to_string(i) + ",Y" + std::to_string(j) + "] = 0", symcalc::commutator(ys(i), ys(j)), VectorField(n));
  for (int i = 0; i < n; ++i)
    m.expect("[Y" + std::to_string(i) + ",D] = kappa" + std::to_string(i) + " Y" + std::to_string(i), symcalc::commutator(ys(i), d),
             kappa[static_cast<std::size_t>(i)] * ys(i));
  for (int i = 0; i < n; ++i) {
    Generator rhs(n);
    if (i == 0) rhs.add_quad(2, ys(1), ys(2));
    if (i != 0 && i + 1 < n) rhs.add_lin(-1, ys(i + 1));
    rhs.add_lin(-lambda * kappa[static_cast<std::size_t>(i)], ys(i));
    m.expect("[Y" + std::to_string(i) + ",L] = " + (i == 0 ? "2 Y1 Y2" : "-Y" + std::to_string(i + 1)) + " - lambda kappa" +
                 std::to_string(i) + " Y" + std::to_string(i),
             symcalc::generator_commutator(ys(i), l), rhs);
  }
  m.verify();
  return m;
}

/// Default parameters: N = 2, consistent weights (1, 1, 2, 3), lambda = 2.
inline SiteModel filiform_full_default() { return filiform_full(2, 2.0, filiform_consistent_kappa(2, 1.0, 1.0)); }

/// Sufficiency margin max_k (m_k - 2 lambda kappa_k + 2n + n(n-1)(n-2)); nonpositive means the decay claim applies.
struct FiliformCondition
{
  double margin = 0;
  int worst_index = -1;
};

inline FiliformCondition filiform_full_condition(const std::vector<double>& m, const std::vector<double>& kappa, double lambda, int n)
{
  if (m.size() != kappa.size()) throw DimensionMismatch(static_cast<int>(m.size()), static_cast<int>(kappa.size()));
  FiliformCondition out{-std::numeric_limits<double>::infinity(), -1};
  const double nn = n;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double v = m[k] - 2 * lambda * kappa[k] + 2 * nn + nn * (nn - 1) * (nn - 2);
    if (v > out.margin) out = {v, static_cast<int>(k)};
  }
  return out;
}

/// Weights w_j of V = sum_j w_j Z_j exactly as printed: lambda^{n-j} (lambda < 1), 1/n (lambda = 1), lambda^{j-n} (lambda > 1).
inline std::vector<Rational> filiform_partial_printed_weights(int n, const Rational& lambda)
{
  std::vector<Rational> w;
  for (int j = 0; j < n; ++j) {
    if (lambda < 1)
      w.push_back(symcalc::rational_pow(lambda, n - j));
    else if (lambda == 1)
      w.push_back(Rational(1, n));
    else
      w.push_back(symcalc::rational_pow(lambda, j - n));
  }
  return w;
}

/// Weights that make V an eigen-field: proportional to lambda^{-j}; they agree with the printed
/// choice for lambda <= 1 and replace lambda^{j-n} by lambda^{-j} for lambda > 1.
inline std::vector<Rational> filiform_partial_weights(int n, const Rational& lambda)
{
  if (lambda <= 1) return filiform_partial_printed_weights(n, lambda);
  std::vector<Rational> w;
  for (int j = 0; j < n; ++j) w.push_back(symcalc::rational_pow(lambda, -j));
  return w;
}

/// L = Z_0^2 + B - lambda D_0 on (x_1..x_n) with Z_0 = d_1, B = d_2 + x_1 d_3 + sum_{k>=3} x_k d_{k+1}, D_0 = x_1 d_1.
/// Variable x_k lives at index k-1.
inline SiteModel filiform_partial(int n, double lambda_in)
{
  using detail::partial;
  using detail::var;
  if (n < 3) throw Error("filiform_partial: n must be >= 3");
  const Rational lambda = detail::exact(lambda_in, "lambda");
  SiteModel m;
  m.family = "filiform_partial";
  m.dim = n;
  for (int i = 1; i <= n; ++i) m.var_names.push_back("x" + std::to_string(i));
  m.parameters = {{"n", n}, {"lambda", lambda_in}};
  auto d = [&](int k) { return partial(n, k - 1); };  // d_k in 1-based naming

  const VectorField z0 = d(1);
  VectorField b = d(2);
  b.add(2, var(0));
  for (int k = 3; k < n; ++k) b.add(k, var(k - 1));
  const VectorField d0 = detail::field_of(n, {{0, var(0)}});
  Generator l(n);
  l.add_square(1, z0);
  l.add_lin(1, b);
  l.add_lin(-lambda, d0);
  m.generator = l;

  std::vector<VectorField> z = {z0};
  for (int j = 1; j < n; ++j) z.push_back(symcalc::commutator(b, z.back()));
  for (int j = 0; j < n; ++j) m.fields["Z" + std::to_string(j)] = z[static_cast<std::size_t>(j)];
  m.fields["B"] = b;
  m.fields["D0"] = d0;

  m.expect("[B,Z0] = -d_3", z[1], partial(n, 2, -1));
  for (int j = 1; j + 2 <= n; ++j) {
    const Rational sign = j % 2 == 0 ? 1 : -1;
    m.expect("Z" + std::to_string(j) + " = " + (j % 2 == 0 ? "" : "-") + "d_" + std::to_string(j + 2), z[static_cast<std::size_t>(j)],
             partial(n, j + 1, sign));
  }
  m.expect("[B,Z" + std::to_string(n - 2) + "] = 0", symcalc::commutator(b, z[static_cast<std::size_t>(n - 2)]), VectorField(n));
  m.expect("[Z0,D0] = Z0", symcalc::commutator(z0, d0), z0);
  for (int j = 1; j < n; ++j)
    m.expect("[Z" + std::to_string(j) + ",D0] = 0", symcalc::commutator(z[static_cast<std::size_t>(j)], d0), VectorField(n));
  VectorField nested = b;
  for (int k = 0; k < n; ++k) nested = symcalc::commutator(nested, d0);
  m.expect("n-fold [..[B,D0]..,D0] = (-1)^n x1 d_3", nested, detail::field_of(n, {{2, Rational(n % 2 == 0 ? 1 : -1) * var(0)}}));
  m.notes.push_back("bracket chain is shifted by one index: [B,Z0] = -d_3, so Z_j = (-1)^j d_{j+2} and Z_" + std::to_string(n - 1) +
                    " = 0");

  if (lambda > 0) {
    const auto w = filiform_partial_weights(n, lambda);
    VectorField v(n);
    for (int j = 0; j < n; ++j) v += w[static_cast<std::size_t>(j)] * z[static_cast<std::size_t>(j)];
    m.fields["V"] = v;
    m.expect("[V,L] = -lambda V", symcalc::generator_commutator(v, l), Generator::from_field(v, -lambda));
    if (lambda > 1)
      m.notes.push_back("V uses weights lambda^{-j}; the printed lambda^{j-n} is not an eigen-field for lambda > 1");
  } else {
    m.notes.push_back("lambda <= 0: V omitted");
  }
  m.verify();
  return m;
}

}  // namespace hypolab::models
