#pragma once

#include "site_model.hpp"

#include <Eigen/Dense>

#include <algorithm>

namespace hypolab::models {

namespace detail {

/// Eigen-directions of ad(drift) on the constant fields, named V0 (real) and Vp/Vm (conjugate pair).
inline std::vector<EigenDirection> langevin_eigen_directions(const VectorField& drift)
{
  std::vector<VectorField> basis;
  for (int i = 0; i < drift.dim(); ++i) basis.push_back(VectorField::partial(drift.dim(), i));
  auto ev = symcalc::eigenfields(symcalc::adjoint_matrix(drift, basis));

  std::vector<symcalc::EigenField> real, complex_pos;
  for (auto& e : ev) {
    if (std::abs(e.value.imag()) < 1e-12)
      real.push_back(e);
    else if (e.value.imag() > 0)
      complex_pos.push_back(e);
  }
  std::sort(real.begin(), real.end(), [](const auto& a, const auto& b) { return a.value.real() > b.value.real(); });

  std::vector<EigenDirection> out;
  if (real.size() == 1 && complex_pos.size() == 1) {
    out.push_back({"V0", real[0].value, real[0].coeffs});
    out.push_back({"Vp", complex_pos[0].value, complex_pos[0].coeffs});
    auto conj = complex_pos[0].coeffs;
    for (auto& c : conj) c = std::conj(c);
    out.push_back({"Vm", std::conj(complex_pos[0].value), conj});
  } else {
    // three real eigenvalues: largest is V0
    const char* names[] = {"V0", "Vp", "Vm"};
    for (std::size_t i = 0; i < real.size() && i < 3; ++i) out.push_back({names[i], real[i].value, real[i].coeffs});
  }
  return out;
}

}  // namespace detail

/// Single-site heat-bath Langevin model on (q, p, u) with quadratic potential.
inline SiteModel langevin_site(double g_in, double lambda_in)
{
  using detail::partial;
  using detail::var;
  if (g_in == 0.0) throw ZeroCoupling("langevin_site: coupling g must be nonzero");
  if (!(lambda_in > 0.0)) throw Error("langevin_site: lambda must be positive");
  const Rational g = detail::exact(g_in, "g");
  const Rational lambda = detail::exact(lambda_in, "lambda");
  const int n = 3;
  const Poly q = var(0), p = var(1), u = var(2);

  SiteModel m;
  m.family = "langevin";
  m.dim = n;
  m.var_names = {"q", "p", "u"};
  m.coupling_coord = 2;
  m.parameters = {{"g", g_in}, {"lambda", lambda_in}};

  const VectorField z0 = partial(n, 2);
  const VectorField b = detail::field_of(n, {{0, p}, {1, -q + g * u}, {2, -g * p}});
  const VectorField d0 = detail::field_of(n, {{2, u}});
  const VectorField z1 = symcalc::commutator(b, z0);
  const VectorField z2 = symcalc::commutator(b, z1);

  m.generator = Generator(n);
  m.generator.add_square(1, z0);
  m.generator.add_lin(1, b);
  m.generator.add_lin(-lambda, d0);

  m.fields = {{"Z0", z0}, {"Z1", z1}, {"Z2", z2}, {"B", b}, {"D0", d0}};

  m.expect("[B,Z0] = -g d_p", z1, partial(n, 1, -g));
  m.expect("[B,Z1] = g(d_q - g d_u)", z2, g * (partial(n, 0) - partial(n, 2, g)));
  m.expect("[B,Z2] = -(1+g^2) Z1", symcalc::commutator(b, z2), -(1 + g * g) * z1);
  m.expect("[Z0,Z1] = 0", symcalc::commutator(z0, z1), VectorField(n));
  m.expect("[Z0,Z2] = 0", symcalc::commutator(z0, z2), VectorField(n));
  m.expect("[Z1,Z2] = 0", symcalc::commutator(z1, z2), VectorField(n));

  Generator expected(n);
  expected.add_lin(-lambda, z0);
  expected.add_lin(-1, z1);
  m.expect("[Z0,L] = -lambda Z0 - Z1", symcalc::generator_commutator(z0, m.generator), expected);
  m.expect("[Z1,L] = -Z2", symcalc::generator_commutator(z1, m.generator), Generator::from_field(z2, -1));
  expected = Generator(n);
  expected.add_lin(1 + g * g, z1);
  expected.add_lin(lambda * g * g, z0);
  m.expect("[Z2,L] = (1+g^2) Z1 + lambda g^2 Z0", symcalc::generator_commutator(z2, m.generator), expected);

  // second route: the generator written out coordinate-wise
  Generator direct(n);
  direct.add_square(1, partial(n, 2));
  direct.add_lin(1, detail::field_of(n, {{0, p}, {1, -q}}));
  direct.add_lin(g, detail::field_of(n, {{1, u}, {2, -p}}));
  direct.add_lin(-lambda, detail::field_of(n, {{2, u}}));
  m.expect("L = d_u^2 + p d_q - q d_p + g(u d_p - p d_u) - lambda u d_u", m.generator, direct);
  m.verify();

  const VectorField drift = b - lambda * d0;
  m.fields["Btilde"] = drift;
  m.eigen_directions = detail::langevin_eigen_directions(drift);
  for (const auto& e : m.eigen_directions)
    if (e.value.real() <= 0) m.notes.push_back("eigenvalue of " + e.name + " has nonpositive real part");
  return m;
}

/// Generalized Langevin system on (q, p, u_1..u_d); diffusion taken as A + A^T, required diagonal.
inline SiteModel gle_system(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c, const Eigen::VectorXd& g,
                            bool quadratic_potential = true)
{
  using detail::partial;
  using detail::var;
  const auto d = static_cast<int>(a.rows());
  if (a.cols() != d || c.rows() != d || g.size() != d) throw DimensionMismatch(d, static_cast<int>(c.rows()));
  if (!quadratic_potential) throw Unsupported("gle_system: only the quadratic potential V(q) = q^2/2 is supported");
  if (g.isZero(0.0)) throw ZeroCoupling("gle_system: coupling vector g must be nonzero");
  const Eigen::MatrixXd mdiff = c * c.transpose();
  const Eigen::MatrixXd residual = a + a.transpose() - mdiff;
  const double res = residual.cwiseAbs().maxCoeff();
  if (res > 1e-12) throw FluctuationDissipationViolated("gle_system: A + A^T != C C^T", res);
  const Eigen::MatrixXd sym = a + a.transpose();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j && std::abs(sym(i, j)) > 1e-12) throw Error("gle_system: C C^T must be diagonal in the supplied coordinates");

  const int n = d + 2;
  const Poly q = var(0), p = var(1);
  SiteModel m;
  m.family = "gle";
  m.dim = n;
  m.var_names = {"q", "p"};
  for (int i = 0; i < d; ++i) m.var_names.push_back("u" + std::to_string(i + 1));
  m.coupling_coord = 2;
  m.parameters["d"] = d;

  Generator l(n);
  VectorField b = detail::field_of(n, {{0, p}, {1, -q}});
  for (int i = 0; i < d; ++i) {
    const Rational gi = detail::exact(g(i), "g");
    b.add(1, gi * var(2 + i));
    b.add(2 + i, -gi * p);
    for (int j = 0; j < d; ++j) b.add(2 + i, -detail::exact(a(i, j), "A") * var(2 + j));
    // exact diagonal of A + A^T stands in for C C^T
    const Rational mii = 2 * detail::exact(a(i, i), "A");
    if (mii != 0) l.add_square(mii / 2, partial(n, 2 + i));
    m.fields["Z0_" + std::to_string(i + 1)] = partial(n, 2 + i);
  }
  l.add_lin(1, b);
  m.generator = l;
  m.fields["B"] = b;
  return m;
}

}  // namespace hypolab::models
