#include <hypolab/models.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace hypolab;
using namespace hypolab::models;
using symcalc::make_rational;

namespace {

Poly var(int i) { return Poly::variable(i); }
VectorField d(int dim, int i, const Rational& c = 1) { return VectorField::partial(dim, i, c); }

std::vector<std::array<double, 3>> random_points(int n, unsigned seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> logr(-2.0, 2.0);
  std::vector<std::array<double, 3>> out;
  while (static_cast<int>(out.size()) < n) {
    std::array<double, 3> w = {g(rng), g(rng), g(rng)};
    const double s = std::pow(10.0, logr(rng));
    w = {s * w[0], s * w[1], s * s * w[2]};
    if (GaugeFunctions::N(w) > 1e-3) out.push_back(w);
  }
  return out;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace

TEST(Langevin, CommutatorTable)
{
  const auto m = langevin_site(1, 1);
  EXPECT_TRUE(m.all_identities_hold());
  EXPECT_GE(m.identities.size(), 10u);
  EXPECT_EQ(m.field("Z2"), d(3, 0) - d(3, 2));
  EXPECT_EQ(m.field("Z1"), d(3, 1, -1));

  const auto m2 = langevin_site(2, 1);
  EXPECT_EQ(symcalc::commutator(m2.field("B"), m2.field("Z2")), Rational(-5) * m2.field("Z1"));
  for (const char* a : {"Z0", "Z1", "Z2"})
    for (const char* b : {"Z0", "Z1", "Z2"}) EXPECT_TRUE(symcalc::commutator(m2.field(a), m2.field(b)).is_zero());
}

TEST(Langevin, Errors)
{
  EXPECT_THROW(langevin_site(0, 1), ZeroCoupling);
  EXPECT_THROW(langevin_site(1, 0), Error);
}

TEST(Langevin, EigenDirectionsAgainstHandMatrix)
{
  for (auto [g, lambda] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}, std::pair{0.5, 3.0}}) {
    const auto m = langevin_site(g, lambda);
    // action of B - lambda D0 on (d_q, d_p, d_u), read off by hand
    Eigen::Matrix3d a;
    a << 0, -1, 0, 1, 0, -g, 0, g, lambda;
    ASSERT_EQ(m.eigen_directions.size(), 3u);
    for (const auto& e : m.eigen_directions) {
      Eigen::Vector3cd c(e.coeffs[0], e.coeffs[1], e.coeffs[2]);
      EXPECT_LT((a.cast<std::complex<double>>() * c - e.value * c).norm(), 1e-10);
      EXPECT_GT(e.value.real(), 0.0);
    }
    EXPECT_NEAR(m.eigen_direction("V0").value.imag(), 0.0, 1e-14);
    EXPECT_EQ(m.eigen_direction("Vp").value, std::conj(m.eigen_direction("Vm").value));
  }
  const auto m = langevin_site(1, 1);
  EXPECT_NEAR(m.eigen_direction("V0").value.real(), 0.5698402909980532, 1e-10);
}

TEST(Gle, ReducesToLangevin)
{
  Eigen::MatrixXd a(1, 1), c(1, 1);
  Eigen::VectorXd g(1);
  a << 1;
  c << std::sqrt(2.0);
  g << 3;
  const auto gle = gle_system(a, c, g);
  EXPECT_TRUE(symcalc::op_equal(gle.generator, langevin_site(3, 1).generator));

  a << 2;
  c << 2;
  g << 1;
  Generator expected = langevin_site(1, 2).generator;
  expected.add_square(1, d(3, 2));
  EXPECT_TRUE(symcalc::op_equal(gle_system(a, c, g).generator, expected));
}

TEST(Gle, Errors)
{
  Eigen::MatrixXd a(1, 1), c(1, 1);
  Eigen::VectorXd g(1);
  a << 1;
  c << 1;
  g << 1;
  try {
    gle_system(a, c, g);
    FAIL();
  } catch (const FluctuationDissipationViolated& e) {
    EXPECT_NEAR(e.residual(), 1.0, 1e-15);
  }
  c << std::sqrt(2.0);
  g << 0;
  EXPECT_THROW(gle_system(a, c, g), ZeroCoupling);
  g << 1;
  EXPECT_THROW(gle_system(a, c, g, false), Unsupported);
}

TEST(HType, Algebra)
{
  const auto m = htype_heisenberg();
  EXPECT_TRUE(m.all_identities_hold());
  EXPECT_EQ(symcalc::commutator(m.field("X"), m.field("Y")), d(3, 2));
  EXPECT_EQ(symcalc::commutator(m.field("Z"), m.field("D")), Rational(2) * m.field("Z"));
  HTypeParams bad;
  bad.G = {{{-1.0, 0.0}, {0.0, 0.0}}};
  EXPECT_THROW(htype_heisenberg(bad), NotPositive);
}

TEST(HType, GaugeIdentities)
{
  const GaugeFunctions gauge;
  for (const auto& w : random_points(10000, 7)) {
    const double n = GaugeFunctions::N(w);
    EXPECT_LT(rel(gauge.grad0_sq(w), GaugeFunctions::grad0_sq_closed(w)), 1e-10);
    EXPECT_LT(rel(gauge.sub_laplacian(w), GaugeFunctions::sub_laplacian_closed(w)), 1e-10);
    EXPECT_LT(rel(gauge.ZN(2, w), GaugeFunctions::center_derivative_closed(w)), 1e-10);
    EXPECT_LT(rel(gauge.DN(w), n), 1e-10);
    const auto h = gauge.hessian_sym(w);
    const auto hc = GaugeFunctions::hessian_sym_closed(w);
    double sum = 0;
    for (int k = 0; k < 4; ++k) {
      EXPECT_LT(rel(h[static_cast<std::size_t>(k)], hc[static_cast<std::size_t>(k)]), 1e-9);
      sum += std::abs(hc[static_cast<std::size_t>(k)]);
    }
    EXPECT_LE(sum, GaugeFunctions::hessian_sum_bound(w) * (1 + 1e-12));
    EXPECT_LT(rel(GaugeFunctions::N(GaugeFunctions::dilate(w, 1.7)), 1.7 * n), 1e-12);
  }
}

TEST(HType, HessianMatchesFiniteDifferences)
{
  const GaugeFunctions gauge;
  for (const auto& w : random_points(500, 11)) {
    if (GaugeFunctions::N(w) < 0.1) continue;
    const double h = 1e-4 * GaugeFunctions::N(w);
    // X = d_x - y/2 d_z, Y = d_y + x/2 d_z; flow of a field by a short second-order Taylor step
    auto shift = [&](const std::array<double, 3>& p, int k, double s) {
      if (k == 0) return std::array<double, 3>{p[0] + s, p[1], p[2] - 0.5 * p[1] * s};
      return std::array<double, 3>{p[0], p[1] + s, p[2] + 0.5 * p[0] * s};
    };
    const auto hs = gauge.hessian_sym(w);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        // Z_a Z_b N by nested central differences along the (linear-in-s) field flows
        auto zb = [&](const std::array<double, 3>& p) {
          return (GaugeFunctions::N(shift(p, b, h)) - GaugeFunctions::N(shift(p, b, -h))) / (2 * h);
        };
        const double zazb = (zb(shift(w, a, h)) - zb(shift(w, a, -h))) / (2 * h);
        auto za = [&](const std::array<double, 3>& p) {
          return (GaugeFunctions::N(shift(p, a, h)) - GaugeFunctions::N(shift(p, a, -h))) / (2 * h);
        };
        const double zbza = (za(shift(w, b, h)) - za(shift(w, b, -h))) / (2 * h);
        const double fd = 0.5 * (zazb + zbza);
        const double scale = std::max(1.0 / GaugeFunctions::N(w), std::abs(hs[static_cast<std::size_t>(2 * a + b)]));
        EXPECT_LT(std::abs(fd - hs[static_cast<std::size_t>(2 * a + b)]) / scale, 1e-6);
      }
  }
}

TEST(HeisenbergPartial, RationalKappa)
{
  const auto m = heisenberg_partial(2, 1);
  EXPECT_TRUE(m.all_identities_hold());
  EXPECT_EQ(m.field("V"), d(3, 0) + d(3, 2));
  EXPECT_EQ(symcalc::commutator(m.field("Z1"), m.field("D0")), VectorField(3));
  EXPECT_EQ(m.field("Z1"), d(3, 2));
}

TEST(HeisenbergPartial, IrrationalKappaAndZeroLambda)
{
  const auto m = heisenberg_partial(1, 1);
  EXPECT_FALSE(m.has_field("V"));
  EXPECT_TRUE(m.has_field("kappaV"));
  EXPECT_NEAR(m.parameter("kappa"), std::sqrt(2.0), 1e-15);
  const auto& v = m.eigen_direction("V");
  EXPECT_NEAR(v.coeffs[0].real() * v.coeffs[2].real(), 1.0, 1e-15);

  const auto m0 = heisenberg_partial(1, 0);
  EXPECT_FALSE(m0.has_field("V"));
  EXPECT_FALSE(m0.has_field("kappaV"));
  EXPECT_TRUE(m0.all_identities_hold());
}

TEST(FiliformFull, Relations)
{
  const auto m = filiform_full_default();
  EXPECT_TRUE(m.all_identities_hold());
  EXPECT_TRUE(symcalc::commutator(m.field("Y0"), m.field("Y3")).is_zero());
  Generator rhs(4);
  rhs.add_quad(2, m.field("Y1"), m.field("Y2"));
  rhs.add_lin(-2, m.field("Y0"));
  EXPECT_TRUE(symcalc::op_equal(symcalc::generator_commutator(m.field("Y0"), m.generator), rhs));
  EXPECT_EQ(filiform_consistent_kappa(3, 1, 2), (std::vector<double>{1, 2, 3, 4, 5}));
}

TEST(FiliformFull, InconsistentWeightsRejected)
{
  EXPECT_THROW(filiform_full(2, 2, {1, 1, 1, 1}), RealizationFailure);
  EXPECT_THROW(filiform_full(2, 2, {1, 1, 2}), DimensionMismatch);
}

TEST(FiliformFull, SufficiencyCondition)
{
  // n = 1, m = 1: 1 - 2 lambda kappa_k + 2 <= 0, worst at kappa = 1
  const auto c = filiform_full_condition({1, 1, 1, 1}, {1, 1, 2, 3}, 2.0, 1);
  EXPECT_DOUBLE_EQ(c.margin, -1.0);
  EXPECT_EQ(c.worst_index, 0);
  EXPECT_GT(filiform_full_condition({1, 1, 1, 1}, {1, 1, 2, 3}, 1.0, 1).margin, 0.0);
}

TEST(FiliformPartial, ChainAndDilation)
{
  const auto m = filiform_partial(4, 1);
  EXPECT_TRUE(m.all_identities_hold());
  EXPECT_EQ(m.field("Z1"), d(4, 2, -1));
  EXPECT_EQ(m.field("Z2"), d(4, 3));
  EXPECT_TRUE(m.field("Z3").is_zero());
  EXPECT_EQ(symcalc::commutator(m.field("Z0"), m.field("D0")), m.field("Z0"));
  VectorField nested = m.field("B");
  for (int k = 0; k < 4; ++k) nested = symcalc::commutator(nested, m.field("D0"));
  VectorField expect(4);
  expect.add(2, var(0));
  EXPECT_EQ(nested, expect);
}

TEST(FiliformPartial, EigenFieldWeights)
{
  const auto m = filiform_partial(4, 1);
  const VectorField quarter = make_rational(1, 4) * (m.field("Z0") + m.field("Z1") + m.field("Z2") + m.field("Z3"));
  EXPECT_EQ(m.field("V"), quarter);
  EXPECT_TRUE(symcalc::op_equal(symcalc::generator_commutator(quarter, m.generator), Generator::from_field(quarter, -1)));

  for (double lambda : {0.5, 3.0}) {
    const auto ml = filiform_partial(5, lambda);
    const Rational lam = symcalc::to_rational(lambda);
    const auto printed = filiform_partial_printed_weights(5, lam);
    VectorField v(5);
    for (int j = 0; j < 5; ++j) v += printed[static_cast<std::size_t>(j)] * ml.field("Z" + std::to_string(j));
    const bool eigen = symcalc::op_equal(symcalc::generator_commutator(v, ml.generator), Generator::from_field(v, -lam));
    EXPECT_EQ(eigen, lambda < 1) << "lambda = " << lambda;
    EXPECT_TRUE(
        symcalc::op_equal(symcalc::generator_commutator(ml.field("V"), ml.generator), Generator::from_field(ml.field("V"), -lam)));
  }
}

TEST(BS, Rewriting)
{
  const auto m = bs_model(1, 2);
  EXPECT_TRUE(m.all_identities_hold());
  EXPECT_EQ(m.generator.str(), "(1 - 2*x0)*d0 + (x0^2)*d0^2");
  EXPECT_EQ(symcalc::commutator(m.field("B"), m.field("Z0")), m.field("B"));
  const auto m0 = bs_model(0, 2);
  EXPECT_TRUE(m0.field("B").is_zero());
  EXPECT_FALSE(m0.notes.empty());
}

TEST(Grushin, Constructor)
{
  const auto m = grushin_model(1, 1, 1, 2);
  DiffOp expected(2);
  expected.add(symcalc::Monomial({2}), Poly(1));
  expected.add(symcalc::Monomial({0, 2}), var(0) * var(0));
  expected.add(symcalc::Monomial({1}), Poly(1) - Rational(2) * var(0));
  EXPECT_EQ(m.generator.canonical(), expected);
  EXPECT_THROW(grushin_model(1, 1, 1, 2, 2), Unsupported);
  EXPECT_NO_THROW(grushin_model(2, 3, 0, 0));
}

TEST(Catalog, AllNames)
{
  for (const auto& name : model_names()) {
    const auto m = make_site_model(name);
    EXPECT_EQ(m.family, name);
    EXPECT_TRUE(m.all_identities_hold()) << name;
    for (const auto& [fname, f] : m.fields) EXPECT_EQ(f.dim(), m.dim) << name << " " << fname;
  }
  EXPECT_THROW(make_site_model("nosuch"), ConfigError);
  EXPECT_THROW(make_site_model("langevin", {{"gg", 1}}), ConfigError);
  EXPECT_THROW(make_site_model("filiform_partial", {{"n", 4.5}}), ConfigError);
}

TEST(Lattice, TwoSiteLangevinHandAssembly)
{
  const auto site = langevin_site(1, 1);
  InteractionSpec is;
  is.gamma = 0.25;
  const auto lm = build_lattice(site, Box::chain(2), Boundary::free, is);
  ASSERT_EQ(lm.dim(), 6);

  // hand-written: variables (q0, p0, u0, q1, p1, u1)
  Generator hand(6);
  for (int s = 0; s < 2; ++s) {
    const int o = 3 * s;
    const Poly q = var(o), p = var(o + 1), u = var(o + 2);
    hand.add_square(1, d(6, o + 2));
    VectorField b(6);
    b.add(o, p);
    b.add(o + 1, -q + u);
    b.add(o + 2, -p - u);
    hand.add_lin(1, b);
  }
  VectorField coupling(6);
  coupling.add(2, var(5));
  coupling.add(5, var(2));
  hand.add_lin(make_rational(1, 4), coupling);
  EXPECT_TRUE(symcalc::op_equal(lm.generator, hand));
  EXPECT_TRUE(symcalc::agree_on_monomials(lm.generator, hand));
}

TEST(Lattice, DecoupledProduct)
{
  const auto site = filiform_partial(4, 2);
  const auto lm = build_lattice(site, Box::chain(3), Boundary::free, {});
  EXPECT_FALSE(lm.has_nonpolynomial_terms());
  Generator sum(12);
  for (int x = 0; x < 3; ++x) sum += site.generator.relabel(lm.site_map(x), 12);
  EXPECT_TRUE(symcalc::op_equal(lm.generator, sum));
  // fields at one site commute with the generator copy at another
  const Generator l1 = site.generator.relabel(lm.site_map(1), 12);
  EXPECT_TRUE(symcalc::generator_commutator(lm.site_field("Z0", 0), l1).canonical().is_zero());
  EXPECT_TRUE(symcalc::generator_commutator(lm.site_field("B", 2), l1).canonical().is_zero());
}

TEST(Lattice, SiteOrderIndependence)
{
  const auto site = langevin_site(1, 2);
  InteractionSpec is;
  is.gamma = 0.5;
  Box box = Box::cube(2, 2);
  const auto a = build_lattice(site, box, Boundary::free, is);
  Box perm = box;
  std::reverse(perm.sites.begin(), perm.sites.end());
  std::swap(perm.sites[0], perm.sites[2]);
  const auto b = build_lattice(site, perm, Boundary::free, is);
  std::vector<int> map(static_cast<std::size_t>(a.dim()));
  for (int x = 0; x < box.size(); ++x) {
    const auto it = std::find(perm.sites.begin(), perm.sites.end(), box.sites[static_cast<std::size_t>(x)]);
    const int y = static_cast<int>(it - perm.sites.begin());
    for (int k = 0; k < 3; ++k) map[static_cast<std::size_t>(a.index(x, k))] = b.index(y, k);
  }
  EXPECT_TRUE(symcalc::op_equal(a.generator.relabel(map, b.dim()), b.generator));
}

TEST(Lattice, BoundaryAndWeights)
{
  const Box box = Box::chain(5);
  EXPECT_EQ(box.sites.front(), std::vector<int>{-2});
  EXPECT_EQ(box.distance(0, 4, Boundary::free), 4);
  EXPECT_EQ(box.distance(0, 4, Boundary::periodic), 1);
  const auto w = default_weights(box);
  EXPECT_DOUBLE_EQ(w[2], 1.0);
  EXPECT_DOUBLE_EQ(w[0], 0.25);
  InteractionSpec is;
  is.gamma = 1;
  const auto lm = build_lattice(bs_model(1, 3), box, Boundary::periodic, is);
  EXPECT_DOUBLE_EQ(lm.G(0, 4), 1.0);
}

TEST(Lattice, IncompatibleInteraction)
{
  InteractionSpec is;
  is.gamma = 0.1;
  EXPECT_THROW(build_lattice(grushin_model(1, 1, 1, 1), Box::chain(2), Boundary::free, is), IncompatibleInteraction);
  InteractionSpec t;
  t.tanh.push_back({"nosuch", 0.1, 1, 1, 0});
  EXPECT_THROW(build_lattice(langevin_site(1, 1), Box::chain(2), Boundary::free, t), IncompatibleInteraction);
  t.tanh = {{"Vp", 0.1, 1, 1, 0}};
  EXPECT_THROW(build_lattice(langevin_site(1, 1), Box::chain(2), Boundary::free, t), IncompatibleInteraction);
  t.tanh = {{"Z0", 0.1, 1, 1, 7}};
  EXPECT_THROW(build_lattice(langevin_site(1, 1), Box::chain(2), Boundary::free, t), IncompatibleInteraction);
}

TEST(Lattice, CouplingDrift)
{
  InteractionSpec is;
  is.tanh.push_back({"d", 0.3, 2.0, 1, 0});
  const auto lm = build_lattice(bs_model(1, 3), Box::chain(3), Boundary::free, is);
  const std::vector<double> w = {0.1, -0.2, 0.4};
  std::vector<double> out(3, 0.0);
  lm.add_coupling_drift(w, out);
  EXPECT_NEAR(out[0], 0.3 * std::tanh(2.0 * (0.1 - 0.2)), 1e-15);
  EXPECT_NEAR(out[1], 0.3 * std::tanh(2.0 * (0.1 - 0.2 + 0.4)), 1e-15);
  EXPECT_NEAR(out[2], 0.3 * std::tanh(2.0 * (-0.2 + 0.4)), 1e-15);
}

TEST(Conditions, LangevinDecoupled)
{
  const auto site = langevin_site(1, 1);
  const auto r = check_conditions(build_lattice(site, Box::chain(3), Boundary::free, {}));
  const double xi0 = site.eigen_direction("V0").value.real();
  const double re = site.eigen_direction("Vp").value.real();
  EXPECT_DOUBLE_EQ(r.m_max, std::min(2 * xi0, 2 * re));
  EXPECT_DOUBLE_EQ(r.entry("asss1_psi").value, 0.0);
  EXPECT_TRUE(r.pass);
}

TEST(Conditions, LangevinBudgetMonotone)
{
  const auto site = langevin_site(1, 3);
  double prev = std::numeric_limits<double>::infinity();
  double prev_budget = -1;
  for (double amp : {0.0, 0.05, 0.1, 0.2, 0.4, 0.8, 1.6}) {
    InteractionSpec is;
    is.tanh.push_back({"V0", amp, 1.0, 1, 0});
    const auto r = check_conditions(build_lattice(site, Box::chain(5), Boundary::free, is));
    EXPECT_LE(r.m_max, prev);
    EXPECT_GE(r.budget, prev_budget);
    prev = r.m_max;
    prev_budget = r.budget;
  }
}

TEST(Conditions, LangevinAssumptions)
{
  const auto site = langevin_site(1, 1);
  InteractionSpec is;
  is.tanh.push_back({"Z2", 0.5, 1.0, 1, 2});
  auto r = check_conditions(build_lattice(site, Box::chain(3), Boundary::free, is));
  EXPECT_FALSE(r.entry("asss1_Z0q2").pass);
  is.tanh = {{"Z1", 3.0, 1.0, 0, 2}};
  r = check_conditions(build_lattice(site, Box::chain(3), Boundary::free, is));
  EXPECT_TRUE(r.entry("asss1_Z0q2").pass);
  EXPECT_DOUBLE_EQ(r.entry("GG").value, 1.0);
  // Z0 = d_u hits u with coefficient 1, Z2 = d_q - d_u hits it with -1
  EXPECT_DOUBLE_EQ(r.entry("asss1_psi").value, 3.0);
  EXPECT_FALSE(r.entry("asss1_psi").pass);
}

TEST(Conditions, BsLattice)
{
  const auto r = check_conditions(build_lattice(bs_model(1, 3), Box::chain(4), Boundary::free, {}));
  EXPECT_DOUBLE_EQ(r.m_max, 4.0);
  InteractionSpec is;
  is.gamma = 0.1;
  is.tanh.push_back({"d", 0.2, 0.5, 1, 0});
  const auto r2 = check_conditions(build_lattice(bs_model(1, 3), Box::chain(5), Boundary::free, is));
  // interior site: 2 neighbours in G both ways, 3 sites in range both ways with |a s| = 0.1
  EXPECT_NEAR(r2.m_max, 4.0 - (4 * 0.1 + 6 * 0.1), 1e-14);
}

TEST(Conditions, FiliformEta)
{
  const auto site = filiform_partial(4, 1);
  const auto r0 = check_conditions(build_lattice(site, Box::chain(3), Boundary::free, {}));
  EXPECT_DOUBLE_EQ(r0.m_max, 2.0);
  InteractionSpec is;
  is.tanh.push_back({"V", 0.4, 0.5, 1, 0});
  const auto r = check_conditions(build_lattice(site, Box::chain(3), Boundary::free, is));
  // V = (d_1 - d_3 + d_4)/4, so |V_z q_y| = |a s|/4 on each neighbour pair
  EXPECT_NEAR(r.budget, 3 * 0.2 / 4, 1e-15);
  EXPECT_NEAR(r.m_max, 2 * (1 - 0.15), 1e-15);
}

TEST(Conditions, HeisenbergYOnly)
{
  const auto site = heisenberg_partial(2, 1);
  InteractionSpec is;
  is.tanh.push_back({"X", 0.2, 1.0, 1, 1});
  is.tanh.push_back({"Z1", 0.2, 1.0, 1, 1});
  auto r = check_conditions(build_lattice(site, Box::chain(3), Boundary::free, is));
  EXPECT_TRUE(r.entry("gamma_eta_y_only").pass);
  EXPECT_DOUBLE_EQ(r.m_max, 2.0);
  is.tanh.push_back({"V", 0.1, 1.0, 1, 0});
  r = check_conditions(build_lattice(site, Box::chain(3), Boundary::free, is));
  // V = d_x + d_z: |V_j q_k| = 0.1 on neighbours; centre site sums 3 each way
  EXPECT_NEAR(r.m_max, 2.0 - 0.6, 1e-15);
  is.tanh.push_back({"X", 0.2, 1.0, 1, 0});
  r = check_conditions(build_lattice(site, Box::chain(3), Boundary::free, is));
  EXPECT_FALSE(r.entry("gamma_eta_y_only").pass);
  EXPECT_FALSE(r.pass);
  EXPECT_NO_THROW(r.to_json().dump());
}
