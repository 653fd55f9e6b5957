#include <hypolab/symcalc.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace hypolab;
using namespace hypolab::symcalc;

namespace {

Poly var(int i) { return Poly::variable(i); }
Rational R(long n, long d = 1) { return make_rational(n, d); }

VectorField field(int dim, std::initializer_list<std::pair<int, Poly>> comps)
{
  VectorField v(dim);
  for (const auto& [i, p] : comps) v.add(i, p);
  return v;
}

// Langevin variables (q, p, u) = (0, 1, 2).
VectorField langevin_drift(const Rational& g)
{
  return field(3, {{0, var(1)}, {1, -var(0) + g * var(2)}, {2, -g * var(1)}});
}

Poly random_poly(std::mt19937& rng, int dim, unsigned max_deg)
{
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> keep(0, 2);
  Poly p;
  for (const auto& m : monomial_basis(dim, max_deg))
    if (keep(rng) == 0) p.add_term(m, R(coef(rng), 1 + keep(rng)));
  return p;
}

VectorField random_field(std::mt19937& rng, int dim, unsigned max_deg)
{
  VectorField v(dim);
  for (int i = 0; i < dim; ++i) v.set(i, random_poly(rng, dim, max_deg));
  return v;
}

Generator random_generator(std::mt19937& rng, int dim)
{
  Generator l(dim);
  std::uniform_int_distribution<int> c(-2, 2);
  l.add_quad(R(c(rng)), random_field(rng, dim, 1), random_field(rng, dim, 1));
  l.add_square(R(1 + std::abs(c(rng))), random_field(rng, dim, 1));
  l.add_lin(R(c(rng), 3), random_field(rng, dim, 2));
  return l;
}

}  // namespace

TEST(Poly, ExactArithmetic)
{
  const Poly x = var(0), y = var(1);
  const Poly p = (x + y) * (x - y);
  EXPECT_EQ(p, x * x - y * y);
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_TRUE((p - p).terms().empty());
  EXPECT_EQ(p.derivative(0), Rational(2) * x);
  EXPECT_EQ((R(1, 3) * x).evaluate_exact(std::vector<Rational>{R(3)}), Rational(1));
  EXPECT_EQ(Poly(R(1, 3)) * Rational(3), Poly(1));
}

TEST(Rational, DoubleConversionIsExact)
{
  EXPECT_EQ(to_rational(0.5), R(1, 2));
  EXPECT_EQ(to_rational(0.1) * 10 == 1, false);
  EXPECT_THROW(to_rational(std::nan("")), std::invalid_argument);
  EXPECT_EQ(*exact_sqrt(R(9, 4)), R(3, 2));
  EXPECT_FALSE(exact_sqrt(R(2)).has_value());
}

TEST(Commutator, LangevinDriftWithNoiseDirection)
{
  const VectorField du = VectorField::partial(3, 2);
  EXPECT_EQ(commutator(langevin_drift(1), du), VectorField::partial(3, 1, -1));
}

TEST(Commutator, HeisenbergDriftWithNoiseDirection)
{
  const VectorField x = field(3, {{0, 1}, {2, R(1, 2) * var(1)}});
  const VectorField y = field(3, {{1, 1}, {2, R(-1, 2) * var(0)}});
  EXPECT_EQ(commutator(y, x), VectorField::partial(3, 2));
}

TEST(Commutator, FiliformPartialIndexShift)
{
  // variables x1..x4 at indices 0..3
  const VectorField b = field(4, {{1, 1}, {2, var(0)}, {3, var(2)}});
  EXPECT_EQ(commutator(b, VectorField::partial(4, 0)), VectorField::partial(4, 2, -1));
}

TEST(Commutator, SelfBracketVanishes)
{
  std::mt19937 rng(7);
  const VectorField x = random_field(rng, 3, 3);
  EXPECT_TRUE(commutator(x, x).is_zero());
}

TEST(Commutator, DimensionMismatchThrows)
{
  EXPECT_THROW(commutator(VectorField(2), VectorField(3)), DimensionMismatch);
}

namespace {

Generator bs_generator(const Rational& eps, const Rational& lambda)
{
  const VectorField z0 = field(1, {{0, var(0)}});
  Generator l(1);
  l.add_square(1, z0);
  l.add_lin(1, VectorField::partial(1, 0, eps));
  l.add_lin(-(lambda + 1), z0);
  return l;
}

// X^2 + xi*Y - lambda*x d_x on (x, y, z).
Generator heisenberg_partial_generator(const Rational& xi, const Rational& lambda)
{
  const VectorField x = field(3, {{0, 1}, {2, R(1, 2) * var(1)}});
  const VectorField y = field(3, {{1, 1}, {2, R(-1, 2) * var(0)}});
  Generator l(3);
  l.add_square(1, x);
  l.add_lin(xi, y);
  l.add_lin(-lambda, field(3, {{0, var(0)}}));
  return l;
}

}  // namespace

TEST(GeneratorCommutator, BSSecondDirection)
{
  const Rational eps = R(3, 2), lambda = R(5, 2);
  const Generator l = bs_generator(eps, lambda);
  const VectorField z0 = field(1, {{0, var(0)}});
  const VectorField z1 = VectorField::partial(1, 0, eps);
  Generator expected(1);
  expected.add_quad(2, z0, z1);
  expected.add_lin(-lambda, z1);
  const Generator got = generator_commutator(z1, l);
  EXPECT_TRUE(op_equal(got, expected));
  // hand expansion: eps*(2x d^2 - lambda d)
  DiffOp hand(1);
  hand.add(Monomial::unit(0, 2), Rational(2) * eps * var(0));
  hand.add(Monomial::unit(0), Poly(-lambda * eps));
  EXPECT_EQ(got.canonical(), hand);
  EXPECT_EQ(commutator_canonical(z1, l), hand);
}

TEST(GeneratorCommutator, HeisenbergPartial)
{
  const Rational xi = 3, lambda = R(1, 2);
  const Generator l = heisenberg_partial_generator(xi, lambda);
  EXPECT_TRUE(generator_commutator(VectorField::partial(3, 2), l).canonical().is_zero());
  const Generator got = generator_commutator(VectorField::partial(3, 0), l);
  Generator expected(3);
  expected.add_lin(-xi / 2, VectorField::partial(3, 2));
  expected.add_lin(-lambda, VectorField::partial(3, 0));
  EXPECT_TRUE(op_equal(got, expected));
}

TEST(Apply, BSOnSquare)
{
  const Rational eps = 2, lambda = 3;
  const Poly x = var(0);
  EXPECT_EQ(apply(bs_generator(eps, lambda), x * x), (2 - 2 * lambda) * (x * x) + Rational(2) * eps * x);
  EXPECT_TRUE(apply(bs_generator(eps, lambda), Poly(1)).is_zero());
}

TEST(Apply, EulerIdentity)
{
  const Generator d0 = Generator::from_field(field(2, {{0, var(0)}}));
  const Poly x3 = var(0) * var(0) * var(0);
  EXPECT_EQ(apply(d0, x3), Rational(3) * x3);
  EXPECT_THROW(apply(d0, var(4)), DimensionMismatch);
}

TEST(OpEqual, SquareOfEulerField)
{
  const VectorField z0 = field(1, {{0, var(0)}});
  Generator lhs(1);
  lhs.add_quad(1, field(1, {{0, var(0) * var(0)}}), VectorField::partial(1, 0));
  // x^2 d o d is the plain second derivative term
  Generator rhs(1);
  rhs.add_square(1, z0);
  rhs.add_lin(-1, z0);
  EXPECT_TRUE(op_equal(lhs, rhs));
  EXPECT_TRUE(agree_on_monomials(lhs, rhs));
}

TEST(OpEqual, BSFieldsDoNotCommute)
{
  const VectorField z0 = field(1, {{0, var(0)}});
  const VectorField z1 = VectorField::partial(1, 0, 2);
  Generator a(1), b(1);
  a.add_quad(1, z0, z1);
  b.add_quad(1, z1, z0);
  EXPECT_FALSE(op_equal(a, b));
  EXPECT_FALSE(agree_on_monomials(a, b));
  EXPECT_EQ(commutator(z0, z1), VectorField::partial(1, 0, -2));
  const Generator l = bs_generator(1, 2);
  EXPECT_TRUE(op_equal(l, l));
}

TEST(Serialization, CanonicalTextIsStable)
{
  EXPECT_EQ(bs_generator(1, 2).str(), "(1 - 2*x0)*d0 + (x0^2)*d0^2");
  EXPECT_EQ(langevin_drift(1).str(), "(x1)*d0 + (x2 - x0)*d1 + (-x1)*d2");
  Generator g(2);
  g.add_quad(R(1, 2), VectorField::partial(2, 1), VectorField::partial(2, 0));
  EXPECT_EQ(g.str(), "(1/2)*d0*d1");
  EXPECT_EQ(Generator(2).str(), "0");
}

TEST(AdjointMatrix, LangevinThreeByThree)
{
  // B~ = p d_q - q d_p + u d_p - p d_u - lambda u d_u at g = lambda = 1
  VectorField drift = langevin_drift(1);
  drift.add(2, -var(2));
  std::vector<VectorField> basis;
  for (int i = 0; i < 3; ++i) basis.push_back(VectorField::partial(3, i));
  const auto m = adjoint_matrix(drift, basis);
  // [B~, d_q] = d_p, [B~, d_p] = -d_q + d_u, [B~, d_u] = -d_p + d_u
  const std::vector<std::vector<Rational>> expected = {{0, -1, 0}, {1, 0, -1}, {0, 1, 1}};
  EXPECT_EQ(m.entries, expected);
}

TEST(AdjointMatrix, FiliformIsNilpotentLowerTriangular)
{
  const VectorField b = field(4, {{1, 1}, {2, var(0)}, {3, var(2)}});
  std::vector<VectorField> basis;
  for (int i = 0; i < 4; ++i) basis.push_back(VectorField::partial(4, i));
  const auto m = adjoint_matrix(b, basis);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) {
      const Rational e = m.entries[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      if ((j == 2 && i == 0) || (j == 3 && i == 2))
        EXPECT_EQ(e, Rational(-1));
      else
        EXPECT_EQ(e, Rational(0));
    }
}

TEST(AdjointMatrix, EmptyBasisAndNotClosed)
{
  EXPECT_EQ(adjoint_matrix(langevin_drift(1), {}).size(), 0u);
  const VectorField nonlinear = field(1, {{0, var(0) * var(0)}});
  EXPECT_THROW(adjoint_matrix(nonlinear, {VectorField::partial(1, 0)}), NotClosed);
  const VectorField rot = field(2, {{0, var(1)}});
  EXPECT_THROW(adjoint_matrix(rot, {VectorField::partial(2, 1)}), NotClosed);
}

TEST(Eigenfields, HeisenbergPartialConcentrationDirection)
{
  // drift xi*Y - lambda*x d_x at xi = 2, lambda = 1
  const VectorField drift = field(3, {{0, -var(0)}, {1, 2}, {2, -var(0)}});
  std::vector<VectorField> basis;
  for (int i = 0; i < 3; ++i) basis.push_back(VectorField::partial(3, i));
  const auto ev = eigenfields(adjoint_matrix(drift, basis));
  int found = 0;
  for (const auto& e : ev) {
    if (std::abs(e.value - std::complex<double>(1, 0)) > 1e-12) continue;
    ++found;
    EXPECT_NEAR(std::abs(e.coeffs[0] - e.coeffs[2]), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(e.coeffs[1]), 0.0, 1e-12);
    EXPECT_LE(e.residual, 1e-10);
  }
  EXPECT_EQ(found, 1);
}

TEST(Eigenfields, DiagonalActionReturnsBasis)
{
  const VectorField drift = field(3, {{0, Rational(-1) * var(0)}, {1, R(-2) * var(1)}, {2, R(-7, 2) * var(2)}});
  std::vector<VectorField> basis;
  for (int i = 0; i < 3; ++i) basis.push_back(VectorField::partial(3, i));
  const auto ev = eigenfields(adjoint_matrix(drift, basis));
  ASSERT_EQ(ev.size(), 3u);
  for (const auto& e : ev) {
    int nonzero = 0;
    for (const auto& c : e.coeffs) nonzero += std::abs(c) > 1e-12;
    EXPECT_EQ(nonzero, 1);
    EXPECT_LE(e.residual, 1e-12);
  }
}

TEST(Eigenfields, JordanBlockIsDefective)
{
  const VectorField drift = field(2, {{1, -var(0)}});
  const auto m = adjoint_matrix(drift, {VectorField::partial(2, 0), VectorField::partial(2, 1)});
  EXPECT_THROW(eigenfields(m), DefectiveMatrix);
}

TEST(Properties, AntisymmetryAndJacobi)
{
  std::mt19937 rng(20240521);
  for (int trial = 0; trial < 500; ++trial) {
    const auto x = random_field(rng, 3, 3), y = random_field(rng, 3, 3), z = random_field(rng, 3, 3);
    ASSERT_EQ(commutator(x, y), -commutator(y, x));
    const VectorField jac = commutator(x, commutator(y, z)) + commutator(y, commutator(z, x)) + commutator(z, commutator(x, y));
    ASSERT_TRUE(jac.is_zero()) << jac.str();
  }
}

TEST(Properties, LeibnizConsistency)
{
  std::mt19937 rng(99);
  const auto tests = monomial_basis(3, 4);
  for (int trial = 0; trial < 60; ++trial) {
    const VectorField v = random_field(rng, 3, 2);
    const Generator l = random_generator(rng, 3);
    const Generator c = generator_commutator(v, l);
    ASSERT_EQ(c.canonical(), commutator_canonical(v, l));
    for (const auto& m : tests) {
      const Poly f = Poly::monomial(m, 1);
      ASSERT_EQ(apply(c, f), v.apply(apply(l, f)) - apply(l, v.apply(f)));
    }
  }
}

TEST(Properties, CanonicalEqualityMatchesMonomialAction)
{
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const VectorField x = random_field(rng, 2, 1), y = random_field(rng, 2, 1);
    // X o Y = Y o X + [X, Y]
    Generator a(2), b(2);
    a.add_quad(1, x, y);
    b.add_quad(1, y, x);
    b.add_lin(1, commutator(x, y));
    ASSERT_TRUE(op_equal(a, b));
    ASSERT_TRUE(agree_on_monomials(a, b));
    Generator c = b;
    c.add_lin(R(1, 7), random_field(rng, 2, 1));
    ASSERT_EQ(op_equal(a, c), agree_on_monomials(a, c));
  }
}

TEST(Numeric, CompiledOperatorMatchesExactApplication)
{
  std::mt19937 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  const Generator l = random_generator(rng, 3);
  const NumOp op(l);
  const Poly f = random_poly(rng, 3, 3);
  const Poly lf = apply(l, f);
  for (int k = 0; k < 50; ++k) {
    const std::vector<double> x = {n(rng), n(rng), n(rng)};
    const double exact = lf.evaluate(x);
    EXPECT_NEAR(op(x, poly_jet(f, x, 3)), exact, 1e-10 * (1 + std::abs(exact)));
    EXPECT_NEAR(NumPoly(f)(x), f.evaluate(x), 1e-12 * (1 + std::abs(f.evaluate(x))));
  }
}
