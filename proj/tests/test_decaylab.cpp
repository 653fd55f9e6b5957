#include <hypolab/decaylab.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

using namespace hypolab;
using namespace hypolab::decaylab;

namespace {

ExperimentSpec small(const std::string& id, std::size_t paths = 200)
{
  auto s = default_spec(id);
  s.ensemble.n_paths = paths;
  return s;
}

const Check* find_check(const Verdict& v, const std::string& name)
{
  for (const auto& c : v.checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string slurp(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(TestFunctions, GradientMatchesFiniteDifference)
{
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  for (auto kind : {TestFunction::Kind::sin_sum, TestFunction::Kind::tanh_sum, TestFunction::Kind::linear,
                    TestFunction::Kind::quadratic_bounded, TestFunction::Kind::constant}) {
    TestFunction f(kind, {0, 2}, {0.7, -1.3});
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> x = {n01(rng), n01(rng), n01(rng)}, g(3);
      f.gradient(x, g);
      for (int i = 0; i < 3; ++i) {
        const double h = 1e-6;
        auto xp = x, xm = x;
        xp[static_cast<std::size_t>(i)] += h;
        xm[static_cast<std::size_t>(i)] -= h;
        EXPECT_NEAR(g[static_cast<std::size_t>(i)], (f(xp) - f(xm)) / (2 * h), 1e-7) << f.name();
      }
      if (std::isfinite(f.sup_norm())) EXPECT_LE(std::abs(f(x)), f.sup_norm());
    }
  }
}

TEST(TestFunctions, PolyFormAgreesWithEvaluation)
{
  TestFunction f(TestFunction::Kind::linear, {1, 2}, {0.5, -2});
  const auto p = f.poly();
  ASSERT_TRUE(p.has_value());
  const std::vector<double> x = {0.3, -1.1, 2.5};
  EXPECT_DOUBLE_EQ(p->evaluate(x), f(x));
  EXPECT_FALSE(TestFunction(TestFunction::Kind::sin_sum, {0}).poly().has_value());
  EXPECT_THROW(TestFunction::parse("cosine"), ConfigError);
  EXPECT_THROW(TestFunction(TestFunction::Kind::linear, {0, 1}, {1}), ConfigError);
}

TEST(Verdict, RowsAndSerialization)
{
  const auto ok = bound_row("s", 1, 1.0, 0.1, 0.8, 0.0);  // within 3 stderr
  EXPECT_TRUE(ok.ok);
  const auto bad = bound_row("s", 1, 1.0, 0.01, 0.8, 0.01);
  EXPECT_FALSE(bad.ok);
  EXPECT_FALSE(value_row("s", 1, 1, 0).is_bound());

  Verdict v;
  v.experiment = "x";
  v.rows = {ok, value_row("a,\"b\"", 2, 3, 0)};
  v.add_check("c", true);
  EXPECT_TRUE(v.pass());
  const auto j = v.to_json();
  EXPECT_EQ(j["schema_version"], kVerdictSchemaVersion);
  EXPECT_TRUE(j["rows"][1]["rhs"].is_null());
  v.add_check("d", false);
  EXPECT_FALSE(v.pass());

  const std::string path = testing::TempDir() + "/series.csv";
  write_series_csv(v, path);
  const auto text = slurp(path);
  EXPECT_EQ(text.substr(0, text.find("\r\n")), "source,series,t,lhs,lhs_stderr,rhs,rhs_stderr,ok");
  EXPECT_NE(text.find("mc,\"a,\"\"b\"\"\",2,3,0,,0,1\r\n"), std::string::npos);
  std::remove(path.c_str());
}

TEST(Spec, DefaultsAreValid)
{
  for (const auto& id : experiment_ids()) {
    const auto s = default_spec(id);
    EXPECT_NO_THROW(simulate::validate(s.ensemble)) << id;
    const auto lm = build_model(s);
    EXPECT_EQ(initial_point(s, lm).size(), static_cast<std::size_t>(lm.dim()));
    EXPECT_NO_THROW(build_test_function(s, lm));
  }
  EXPECT_THROW(default_spec("nope"), ConfigError);
}

TEST(Spec, InitialPointShapes)
{
  auto s = default_spec("filiform-partial");  // 2 sites
  const auto lm = build_model(s);
  const int sd = lm.site.dim;
  s.x0 = {1.5};
  EXPECT_EQ(initial_point(s, lm), std::vector<double>(static_cast<std::size_t>(2 * sd), 1.5));
  s.x0.assign(static_cast<std::size_t>(sd), 0.0);
  s.x0[0] = 2;
  const auto x = initial_point(s, lm);
  EXPECT_EQ(x[0], 2);
  EXPECT_EQ(x[static_cast<std::size_t>(sd)], 2);
  s.x0 = {1, 2};
  if (sd != 2) EXPECT_THROW(initial_point(s, lm), ConfigError);
}

TEST(Probes, ComplexEigenDirectionSplits)
{
  const auto lm = build_model(default_spec("langevin-decay"));
  const auto vp = site_probes(lm, "Vp", 0);
  ASSERT_EQ(vp.size(), 2u);
  EXPECT_EQ(vp[0].weight, 2.0);
  const auto v0 = site_probes(lm, "V0", 0);
  ASSERT_EQ(v0.size(), 1u);
  EXPECT_THROW(site_probes(lm, "W", 0), ConfigError);

  // |Vp g|^2 + |Vm g|^2 = 2 (Re^2 + Im^2) for any real gradient
  const auto& e = lm.site.eigen_direction("Vp");
  const std::vector<double> grad = {0.3, -0.7, 1.1};
  std::complex<double> c = 0;
  for (int k = 0; k < 3; ++k) c += e.coeffs[static_cast<std::size_t>(k)] * grad[static_cast<std::size_t>(k)];
  double split = 0;
  for (const auto& p : vp) {
    double d = 0;
    for (int k = 0; k < 3; ++k) d += p.constant[static_cast<std::size_t>(k)] * grad[static_cast<std::size_t>(k)];
    split += p.weight * d * d;
  }
  EXPECT_NEAR(split, 2 * std::norm(c), 1e-12);
}

TEST(Experiments, ConstantFunctionIsTrivial)
{
  auto s = small("langevin-decay");
  s.test_function = "constant";
  const auto v = run_experiment(s);
  EXPECT_TRUE(v.pass());
  for (const auto& r : v.rows) {
    EXPECT_EQ(r.lhs, 0.0);
    EXPECT_EQ(r.rhs, 0.0);
  }
}

TEST(Experiments, FunctionInKernelOfV)
{
  // f depends on y only and V has no y component, so V f = 0 and both sides vanish
  auto s = small("heisenberg-concentration");
  s.f_coords = {1};
  s.ensemble.checkpoints = {0, 0.25, 0.5};
  s.ensemble.t_max = 0.5;
  const auto v = run_experiment(s);
  EXPECT_TRUE(v.pass());
  for (const auto& r : v.rows) {
    EXPECT_NEAR(r.lhs, 0.0, 1e-12);
    EXPECT_NEAR(r.rhs, 0.0, 1e-12);
  }
}

TEST(Experiments, LangevinDecayMatchesOracle)
{
  auto s = small("langevin-decay", 400);
  s.sites = 1;
  s.interaction.tanh.clear();
  s.x0 = {0.5};
  s.test_function = "linear";
  s.f_coords = {0, 1};
  const auto v = run_experiment(s);
  ASSERT_NE(find_check(v, "oracle_agreement"), nullptr);
  EXPECT_TRUE(find_check(v, "oracle_agreement")->pass) << find_check(v, "oracle_agreement")->detail;
  EXPECT_TRUE(find_check(v, "oracle_bound")->pass);
  EXPECT_TRUE(v.pass());
  ASSERT_TRUE(v.m.has_value());
  EXPECT_GT(*v.m, 0);
  EXPECT_FALSE(v.oracle_rows.empty());
}

TEST(Experiments, LangevinLatticeDefault)
{
  const auto v = run_experiment(small("langevin-decay", 200));
  EXPECT_TRUE(v.pass()) << v.to_json().dump(1);
  EXPECT_EQ(v.fits.size(), 1u);
  EXPECT_EQ(v.parameters["sites"], 5);
}

TEST(Experiments, ClaimedRateMustMatch)
{
  auto s = small("langevin-decay", 50);
  s.claimed_m = 123.0;
  EXPECT_THROW(run_experiment(s), ConfigError);
}

TEST(Experiments, ConditionGate)
{
  auto s = small("bs", 50);
  s.params["lambda"] = 0.5;  // m = 2(lambda - 1) < 0
  EXPECT_THROW(run_experiment(s), ConditionsFailed);

  auto h = small("heisenberg-concentration", 50);
  h.sites = 3;
  h.interaction.tanh.push_back({"V", 5.0, 1.0, 1, 0});
  EXPECT_THROW(run_experiment(h), ConditionsFailed);
}

TEST(Experiments, FiliformLambdaTooSmall)
{
  auto s = small("filiform-full", 50);
  s.params["lambda"] = 0.5;
  try {
    run_experiment(s);
    FAIL() << "expected LambdaTooSmall";
  } catch (const LambdaTooSmall& e) {
    EXPECT_GE(e.offending_index(), 0);
  }
  s.params["lambda"] = 2;
  s.order = 2;
  EXPECT_THROW(run_experiment(s), Unsupported);
  s.order = 1;
  s.m_weights = {1, 2, 1, 1};
  EXPECT_THROW(run_experiment(s), ConfigError);
}

TEST(Experiments, FiliformPartialBudgetIsMonotone)
{
  double prev = std::numeric_limits<double>::infinity();
  for (double amp : {0.0, 0.05, 0.1, 0.2}) {
    auto s = small("filiform-partial", 50);
    s.ensemble.checkpoints = {0.5};
    s.ensemble.t_max = 0.5;
    s.fit_rate = false;
    s.interaction.tanh[0].amplitude = amp;
    const auto v = run_experiment(s);
    ASSERT_TRUE(v.m.has_value());
    EXPECT_LE(*v.m, prev);
    prev = *v.m;
  }
  auto s = small("filiform-partial", 50);
  s.k_fold = 2;
  EXPECT_THROW(run_experiment(s), Unsupported);
}

TEST(Experiments, FiliformPartialLargeBudgetOnlyChecksExplosion)
{
  auto s = small("filiform-partial", 50);
  s.interaction.tanh[0].amplitude = 50;
  s.ensemble.checkpoints = {0.5};
  s.ensemble.t_max = 0.5;
  const auto v = run_experiment(s);
  EXPECT_EQ(v.claim, "non_explosion");
  EXPECT_NE(find_check(v, "no_blowup"), nullptr);
  EXPECT_FALSE(v.m.has_value());
}

TEST(Experiments, BsGradientDecays)
{
  const auto v = run_experiment(small("bs", 400));
  EXPECT_TRUE(v.pass());
  ASSERT_TRUE(v.m.has_value());
  EXPECT_DOUBLE_EQ(*v.m, 4.0);  // 2 (lambda - 1) with lambda = 3, no coupling
}

TEST(Experiments, BsSmoothingWindow)
{
  EXPECT_DOUBLE_EQ(bs_smoothing_t0(1e4, 1, 1e2, 1e6, 1, 3), 1.0);
  // d too small: the constant coefficient is positive from the start
  EXPECT_EQ(bs_smoothing_t0(1e4, 1, 1e2, 1e3, 1, 3), 0.0);
  auto s = small("bs", 50);
  s.part = "smoothing";
  s.bs_c = 1;  // 6b < eps c fails
  EXPECT_THROW(run_experiment(s), ConditionsFailed);
  s.part = "nonsense";
  EXPECT_THROW(run_experiment(s), ConfigError);
}

TEST(Experiments, SmoothingProductsShape)
{
  auto s = small("langevin-smoothing", 100);
  s.ensemble.dt = 5e-3;
  s.ensemble.checkpoints = {0.05, 0.1, 0.5, 1};
  s.ensemble.t_max = 1;
  const auto v = run_experiment(s);
  int gamma_rows = 0;
  for (const auto& r : v.rows) {
    EXPECT_GE(r.lhs, 0);
    gamma_rows += r.series == "Gamma_diag";
  }
  EXPECT_EQ(gamma_rows, 4);
  EXPECT_EQ(v.checks.size(), 3u);
  s.test_function = "linear";
  EXPECT_THROW(run_experiment(s), ConfigError);
}

TEST(Experiments, InvariantEvidence)
{
  auto s = small("invariant-evidence", 200);
  const auto v = run_experiment(s);
  EXPECT_TRUE(v.pass()) << v.to_json().dump(1);

  auto b = small("invariant-evidence", 50);
  b.model = "bs";
  b.params = {{"eps", 1}, {"lambda", 0}};
  b.ensemble.checkpoints = grid(1, 4, 1);
  b.ensemble.t_max = 4;
  b.window1_lo = 1, b.window1_hi = 2, b.window2_lo = 3, b.window2_hi = 4;
  const auto vb = run_experiment(b);
  ASSERT_NE(find_check(vb, "certificate"), nullptr);
  EXPECT_FALSE(find_check(vb, "certificate")->pass);
  EXPECT_FALSE(vb.pass());
}

TEST(Experiments, ModelMismatchIsConfigError)
{
  auto s = small("langevin-decay", 50);
  s.model = "bs";
  EXPECT_THROW(run_experiment(s), ConfigError);
}
