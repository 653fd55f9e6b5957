#pragma once

#include "site_model.hpp"

namespace hypolab::models {

/// L = x^2 d^2 + eps d - lambda x d, written as Z_0^2 + B - (lambda+1) Z_0 with Z_0 = x d, B = eps d.
inline SiteModel bs_model(double eps_in, double lambda_in)
{
  using detail::partial;
  using detail::var;
  const Rational eps = detail::exact(eps_in, "eps");
  const Rational lambda = detail::exact(lambda_in, "lambda");
  const int n = 1;
  SiteModel m;
  m.family = "bs";
  m.dim = n;
  m.var_names = {"x"};
  m.coupling_coord = 0;
  m.parameters = {{"eps", eps_in}, {"lambda", lambda_in}};

  const VectorField z0 = detail::field_of(n, {{0, var(0)}});
  const VectorField b = partial(n, 0, eps);
  Generator l(n);
  l.add_square(1, z0);
  l.add_lin(1, b);
  l.add_lin(-(lambda + 1), z0);
  m.generator = l;
  const VectorField z1 = symcalc::commutator(b, z0);
  m.fields = {{"Z0", z0}, {"B", b}, {"Z1", z1}, {"d", partial(n, 0)}};

  DiffOp direct(n);
  direct.add(symcalc::Monomial({2}), var(0) * var(0));
  direct.add(symcalc::Monomial({1}), Poly(eps) - lambda * var(0));
  m.expect("L = x^2 d^2 + eps d - lambda x d", l.canonical(), direct);

  Generator sq(n);
  sq.add_square(1, z0);
  sq.add_lin(-1, z0);
  DiffOp x2d2(n);
  x2d2.add(symcalc::Monomial({2}), var(0) * var(0));
  m.expect("x^2 d^2 = (x d)^2 - x d", sq.canonical(), x2d2);
  m.expect("Z1 = [B,Z0] = eps d", z1, partial(n, 0, eps));
  m.expect("[L,Z0] = Z1", symcalc::generator_commutator(z0, l), Generator::from_field(z1, -1));
  m.expect("[Z0,Z1] = -eps d", symcalc::commutator(z0, z1), partial(n, 0, -eps));
  Generator rhs(n);
  rhs.add_quad(1, z0, z1);
  rhs.add_quad(1, z1, z0);
  rhs.add_lin(-(lambda + 1), z1);
  m.expect("[Z1,L] = {Z0,Z1} - (lambda+1) Z1", symcalc::generator_commutator(z1, l), rhs);
  Generator rhs2(n);
  rhs2.add_quad(2, z0, z1);
  rhs2.add_lin(-lambda, z1);
  m.expect("[Z1,L] = 2 Z0 Z1 - lambda Z1", symcalc::generator_commutator(z1, l), rhs2);
  if (eps == 0) m.notes.push_back("eps = 0: B vanishes and the generator degenerates at x = 0");
  m.verify();
  return m;
}

/// L = Delta_x + |x|^{2m} Delta_y + eps 1.grad_x - lambda x.grad_x on R^k x R^n; only m = 1 is built.
inline SiteModel grushin_model(int k, int n, double eps_in, double lambda_in, int power = 1)
{
  using detail::partial;
  using detail::var;
  if (power > 1) throw Unsupported("grushin_model: principal coefficients of order m > 1 are out of scope");
  if (power < 1 || k < 1 || n < 1) throw Error("grushin_model: k, n, m must be positive");
  const Rational eps = detail::exact(eps_in, "eps");
  const Rational lambda = detail::exact(lambda_in, "lambda");
  const int dim = k + n;
  SiteModel m;
  m.family = "grushin";
  m.dim = dim;
  for (int i = 1; i <= k; ++i) m.var_names.push_back("x" + std::to_string(i));
  for (int j = 1; j <= n; ++j) m.var_names.push_back("y" + std::to_string(j));
  m.parameters = {{"k", k}, {"n", n}, {"eps", eps_in}, {"lambda", lambda_in}, {"m", power}};

  Generator l(dim);
  VectorField dil(dim);
  for (int i = 0; i < k; ++i) {
    l.add_square(1, partial(dim, i));
    l.add_lin(eps, partial(dim, i));
    dil.add(i, var(i));
    m.fields["X" + std::to_string(i + 1)] = partial(dim, i);
    for (int j = 0; j < n; ++j) {
      const VectorField f = detail::field_of(dim, {{k + j, var(i)}});
      l.add_square(1, f);
      m.fields["X" + std::to_string(i + 1) + "Y" + std::to_string(j + 1)] = f;
    }
  }
  l.add_lin(-lambda, dil);
  m.generator = l;
  m.fields["D0"] = dil;

  DiffOp direct(dim);
  Poly r2;
  for (int i = 0; i < k; ++i) r2 += var(i) * var(i);
  for (int i = 0; i < k; ++i) {
    direct.add(symcalc::Monomial::unit(i) * symcalc::Monomial::unit(i), Poly(1));
    direct.add(symcalc::Monomial::unit(i), Poly(eps) - lambda * var(i));
  }
  for (int j = 0; j < n; ++j) direct.add(symcalc::Monomial::unit(k + j) * symcalc::Monomial::unit(k + j), r2);
  m.expect("L = Delta_x + |x|^2 Delta_y + eps 1.grad_x - lambda x.grad_x", l.canonical(), direct);
  if (lambda == 0) m.notes.push_back("lambda = 0: no dilation term");
  m.verify();
  return m;
}

}  // namespace hypolab::models
