#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "hypflow/error.hpp"
#include "hypflow/flow.hpp"

using namespace hypflow;

namespace {

std::shared_ptr<const SphereGrid> axisym(int n, int N, int fd = 0) {
  return std::make_shared<const SphereGrid>(SphereGrid::build(GridMode::axisym, n, N, 1, fd));
}

double max_abs_diff(const Field& a, const Field& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

}  // namespace

TEST(Speed, SphereIsStationary) {
  for (double R : {0.5, 1.5, 3.0}) {
    const FlowState s = make_state(make_sphere(axisym(3, 32), R));
    for (double f : s.speed) EXPECT_LT(std::abs(f), 1e-13 * std::cosh(R));
  }
}

TEST(Speed, BreakdownNamesNode) {
  GeometryFields geo = geometry(make_sphere(axisym(2, 16), 1.0));
  geo.e[1][7] = -0.5;
  try {
    speed(geo);
    FAIL() << "expected BreakdownError";
  } catch (const BreakdownError& e) {
    EXPECT_EQ(e.node(), 7u);
  }
}

TEST(Speed, SignPatternAgainstRefinedGrid) {
  const FlowState a = make_state(make_perturbed_sphere(axisym(2, 32), 2.0, 0.1, 2));
  const FlowState b = make_state(make_perturbed_sphere(axisym(2, 96), 2.0, 0.1, 2));
  for (int i = 0; i < 32; ++i) {
    if (std::abs(b.speed[3 * i + 1]) > 1e-6) EXPECT_EQ(a.speed[i] > 0, b.speed[3 * i + 1] > 0) << i;
  }
}

TEST(StableDt, Formula) {
  const FlowState s = make_state(make_perturbed_sphere(axisym(2, 64), 0.3, 0.01, 2));
  FlowConfig cfg;
  double worst = 0.0;
  for (std::size_t i = 0; i < s.geometry.size(); ++i) {
    const double e1 = s.geometry.e[1][i], lam = s.geometry.lambda[i];
    worst = std::max(worst, s.geometry.lambda_prime[i] / (e1 * e1 * lam * lam));
  }
  const double h = s.surface.grid->min_spacing();
  EXPECT_DOUBLE_EQ(stable_dt(s, cfg), cfg.dt_safety * h * h / std::max(worst, 1.0));
}

TEST(Step, SphereUnchanged) {
  const FlowState s = make_state(make_sphere(axisym(2, 64), 1.2));
  const StepResult r = step(s, FlowConfig{});
  EXPECT_LT(max_abs_diff(r.state.surface.r, s.surface.r), 1e-14);
  EXPECT_EQ(r.halvings, 0);
  EXPECT_GT(r.state.t, 0.0);
}

TEST(Step, StepDoublingOrders) {
  const FlowState s = make_state(make_perturbed_sphere(axisym(2, 32), 1.5, 0.05, 2));
  const double dt = stable_dt(s, FlowConfig{});
  auto doubling = [&](double h, Stepper st) {
    const FlowState one = advance(s, h, st);
    const FlowState two = advance(advance(s, 0.5 * h, st), 0.5 * h, st);
    return max_abs_diff(one.surface.r, two.surface.r);
  };
  const double rk_ratio = doubling(8 * dt, Stepper::rk4) / doubling(4 * dt, Stepper::rk4);
  EXPECT_GT(rk_ratio, 24.0);
  EXPECT_LT(rk_ratio, 40.0);
  const double eu_ratio = doubling(dt, Stepper::euler) / doubling(0.5 * dt, Stepper::euler);
  EXPECT_NEAR(eu_ratio, 4.0, 0.5);
}

TEST(Step, GuardFailureAborts) {
  const FlowState s = make_state(make_perturbed_sphere(axisym(2, 64), 1.5, 0.05, 2));
  FlowConfig cfg;
  cfg.max_halvings = 0;
  try {
    step(s, cfg, 50.0);
    FAIL() << "expected FlowAbort";
  } catch (const FlowAbort& e) {
    EXPECT_EQ(e.snapshot().r, s.surface.r);
    EXPECT_EQ(e.time(), 0.0);
  }
  cfg.max_halvings = 60;
  const StepResult ok = step(s, cfg, 50.0);
  EXPECT_GT(ok.halvings, 0);
  EXPECT_LT(ok.dt, 50.0);
}

TEST(FlowConfig, Validation) {
  FlowConfig c;
  EXPECT_NO_THROW(c.validate());
  c.dt_safety = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = FlowConfig{};
  c.t_max = -1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = FlowConfig{};
  c.snapshot_stride = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_EQ(stepper_from_string("euler"), Stepper::euler);
  EXPECT_THROW(stepper_from_string("leapfrog"), ConfigError);
}

TEST(Run, SphereStopsImmediately) {
  const FlowResult r = run(make_sphere(axisym(2, 64), 1.0), FlowConfig{});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.steps, 0);
  EXPECT_EQ(r.trace.size(), 1u);
  EXPECT_LT(r.radius_error(), 1e-14);
}

TEST(Run, Preconditions) {
  GeneratorOptions opts;
  opts.cap_limit = 1.0;
  EXPECT_THROW(run(make_sphere(axisym(2, 32), 1.0, opts), FlowConfig{}), PreconditionError);
  const RadialSurface bumpy = make_perturbed_sphere(axisym(2, 64), 2.0, 0.4, 4);
  EXPECT_THROW(run(bumpy, FlowConfig{}), PreconditionError);
  EXPECT_THROW(run(make_sphere(axisym(3, 32), 1.0), FlowConfig{}, {}, {3}), ConfigError);
}

TEST(Run, ConservesW1AndConverges) {
  std::vector<TracedProfile> profiles{{"one", WeightProfile::constant(1)},
                                      {"r", WeightProfile::power(1.0)}};
  const RadialSurface s = make_perturbed_sphere(axisym(3, 48), 1.2, 0.05, 2);
  const FlowResult r = run(s, FlowConfig{}, profiles, {1, 2});
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.w1_drift(), 1e-5);
  EXPECT_LT(r.radius_error(), 1e-4);
  EXPECT_GT(r.decay_rate, 0.0);
  EXPECT_GE(r.min_h_convex_margin, -1e-8);
  const auto area = r.trace.column("int_fpow_one_frozen");
  EXPECT_NEAR(area.back() / area.front(), 1.0, 1e-5);
  const auto phi2 = r.trace.column("int_Ekm1_phi2_one_k1");
  EXPECT_NEAR(phi2.back() / phi2.front(), 1.0, 1e-5);
  for (const char* col : {"int_fpow_r_frozen", "int_Ekm1_phi2_one_k2"}) {
    const auto v = r.trace.column(col);
    for (std::size_t i = 1; i < v.size(); ++i) EXPECT_LE(v[i], v[i - 1] * (1 + 1e-9)) << col << i;
  }
  const auto speed = r.trace.column("max_abs_F");
  EXPECT_LT(speed.back(), speed.front());
  const auto t = r.trace.column("t");
  for (std::size_t i = 1; i < t.size(); ++i) EXPECT_GT(t[i], t[i - 1]);
}

TEST(Trace, ColumnsAndCsv) {
  std::vector<TracedProfile> profiles{{"one", WeightProfile::constant(1)}};
  const RadialSurface s = make_sphere(axisym(3, 16), 1.0);
  FlowTrace trace(3, profiles, {1, 2}, s.r);
  const std::vector<std::string> expected{
      "t", "area", "W1", "int_fpow_one_frozen", "int_fpow_one_radial", "int_Ekm1_phi2_one_k1",
      "int_Ekm1_phi2_one_k2", "min_kappa", "max_kappa", "hconvex_margin", "max_abs_F", "osc_r"};
  EXPECT_EQ(trace.columns(), expected);
  trace.record(make_state(s));
  std::ostringstream out;
  trace.write_csv(out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "t,area,W1,int_fpow_one_frozen,int_fpow_one_radial,int_Ekm1_phi2_one_k1,"
            "int_Ekm1_phi2_one_k2,min_kappa,max_kappa,hconvex_margin,max_abs_F,osc_r");
  EXPECT_THROW(trace.column("nope"), ConfigError);
  EXPECT_NEAR(trace.column("W1")[0], q1(1.0, AmbientModel(3)), 1e-12);
}

TEST(Trace, DecayRateFit) {
  std::vector<double> t, v;
  for (int i = 0; i < 20; ++i) {
    t.push_back(0.5 * i);
    v.push_back(3.0 * std::exp(-2.0 * 0.5 * i));
  }
  EXPECT_NEAR(exponential_decay_rate(t, v), 2.0, 1e-12);
}

TEST(EvolutionIdentities, AreaAndW1Rates) {
  const FlowState s = make_state(make_perturbed_sphere(axisym(2, 128), 1.5, 0.05, 2));
  const EvolutionResiduals r = evolution_identity_suite(s);
  EXPECT_LT(r.area_residual, 1e-6);
  EXPECT_LT(r.w1_residual, 1e-6);
  const double area = s.surface.grid->integrate(s.geometry.area_density);
  EXPECT_LT(std::abs(r.w1_rate), 1e-6 * area);
}

TEST(EvolutionIdentities, SphereIsStatic) {
  const FlowState s = make_state(make_sphere(axisym(2, 64), 1.0));
  const EvolutionResiduals r = evolution_identity_suite(s);
  EXPECT_LT(r.area_abs, 1e-12);
  EXPECT_LT(r.w1_abs, 1e-12);
  EXPECT_LT(std::abs(r.area_rate), 1e-12);
}
