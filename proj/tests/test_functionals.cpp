#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hypflow/error.hpp"
#include "hypflow/functionals.hpp"

using namespace hypflow;

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const SphereGrid> axisym(int n, int N, int fd = 0) {
  return std::make_shared<const SphereGrid>(SphereGrid::build(GridMode::axisym, n, N, 1, fd));
}

std::shared_ptr<const SphereGrid> full2d(int N, int M) {
  return std::make_shared<const SphereGrid>(SphereGrid::build(GridMode::full2d, 2, N, M));
}

WeightProfile angular(WeightProfile p) {
  p.with_extension(Extension::angular);
  return p;
}

}  // namespace

TEST(WeightProfile, Factories) {
  EXPECT_EQ(WeightProfile::constant(2.0).value(7.0), 2.0);
  EXPECT_EQ(WeightProfile::constant(2.0).derivative(7.0), 0.0);
  const WeightProfile p = WeightProfile::power(2.0, 3.0);
  EXPECT_DOUBLE_EQ(p.value(1.5), 3.0 * 2.25);
  EXPECT_DOUBLE_EQ(p.derivative(1.5), 3.0 * 2.0 * 1.5);
  const WeightProfile e = WeightProfile::exponential(0.5, 2.0);
  EXPECT_DOUBLE_EQ(e.value(1.0), 2.0 * std::exp(0.5));
  EXPECT_DOUBLE_EQ(e.derivative(1.0), 0.5 * 2.0 * std::exp(0.5));
  EXPECT_EQ(WeightProfile::constant(1).describe(), "const(1)");
  EXPECT_EQ(WeightProfile::power(1).describe(), "1*r^1");
}

TEST(WeightProfile, TableIsPiecewiseLinear) {
  const WeightProfile t = WeightProfile::table({1.0, 2.0, 3.0}, {1.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(t.value(1.5), 2.0);
  EXPECT_DOUBLE_EQ(t.derivative(1.5), 2.0);
  EXPECT_DOUBLE_EQ(t.value(2.5), 3.5);
  EXPECT_DOUBLE_EQ(t.value(0.5), 1.0);
  EXPECT_DOUBLE_EQ(t.value(9.0), 4.0);
  EXPECT_DOUBLE_EQ(t.derivative(9.0), 0.0);
}

TEST(WeightProfile, InvalidParameters) {
  EXPECT_THROW(WeightProfile::constant(0.0), PreconditionError);
  EXPECT_THROW(WeightProfile::power(-1.0), PreconditionError);
  EXPECT_THROW(WeightProfile::exponential(-0.1), PreconditionError);
  EXPECT_THROW(WeightProfile::table({1.0, 1.0}, {1.0, 2.0}), PreconditionError);
  EXPECT_THROW(WeightProfile::table({1.0, 2.0}, {2.0, 1.0}), PreconditionError);
  EXPECT_THROW(WeightProfile::table({1.0}, {2.0}), PreconditionError);
  EXPECT_THROW(WeightProfile::power(1.0).validate(0.0, 1.0), PreconditionError);
  EXPECT_NO_THROW(WeightProfile::power(1.0).validate(0.5, 1.0));
  EXPECT_THROW(extension_from_string("sideways"), ConfigError);
  EXPECT_EQ(extension_from_string("angular"), Extension::angular);
}

TEST(BasicIntegrals, Sphere) {
  const double R = 1.0;
  const BasicIntegrals b = basic_integrals(make_sphere(full2d(32, 64), R));
  EXPECT_NEAR(b.area, 4 * kPi * std::sinh(R) * std::sinh(R), 1e-12);
  EXPECT_NEAR(b.w1, 8.6777, 1e-4);
  const AmbientModel m4(4);
  for (double r4 : {0.5, 1.0, 2.0}) {
    const BasicIntegrals b4 = basic_integrals(make_sphere(axisym(4, 64), r4));
    EXPECT_NEAR(b4.weighted[3] / pk_hk(r4, 3, m4).h, 1.0, 1e-12);
  }
}

TEST(BasicIntegrals, PerturbedAgainstRefinedGrid) {
  auto at = [](int N) { return basic_integrals(make_perturbed_sphere(axisym(3, N), 1.2, 0.05, 2)); };
  const BasicIntegrals a = at(200), b = at(2000);
  EXPECT_NEAR(a.area / b.area, 1.0, 1e-8);
  for (int k = 0; k <= 3; ++k) EXPECT_NEAR(a.weighted[k] / b.weighted[k], 1.0, 1e-8) << k;
}

TEST(BasicIntegrals, CapRejected) {
  GeneratorOptions opts;
  opts.cap_limit = 1.0;
  const RadialSurface cap = make_sphere(axisym(2, 32), 1.0, opts);
  EXPECT_THROW(basic_integrals(cap), PreconditionError);
}

TEST(Minkowski, SphereAndRefinement) {
  const RadialSurface s = make_sphere(axisym(3, 32), 1.4);
  const GeometryFields geo = geometry(s);
  for (int l = 1; l <= 3; ++l) EXPECT_LT(minkowski_residual(s, geo, l), 1e-13);
  std::vector<double> res;
  for (int N : {100, 200, 400}) {
    const RadialSurface p = make_perturbed_sphere(axisym(3, N), 1.0, 0.2, 2);
    res.push_back(minkowski_residual(p, geometry(p), 2));
  }
  EXPECT_GT(std::log2(res[0] / res[2]) / 2, 3.7);
  EXPECT_THROW(minkowski_residual(s, geo, 4), DomainError);
}

TEST(Minkowski, FirstOrderIsW1ConservationIntegrand) {
  const RadialSurface s = make_perturbed_sphere(axisym(2, 200), 1.5, 0.05, 2);
  const GeometryFields geo = geometry(s);
  const SurfaceIntegrator integ(s, geo);
  Field integrand(geo.size());
  for (std::size_t i = 0; i < integrand.size(); ++i) {
    integrand[i] = geo.lambda_prime[i] - geo.u[i] * geo.e[1][i];
  }
  const BasicIntegrals b = basic_integrals(s, geo);
  EXPECT_NEAR(integ(integrand) / b.support[1], 0.0, 1e-9);
  EXPECT_NEAR(std::abs(integ(integrand)) / b.support[1], minkowski_residual(s, geo, 1), 1e-15);
}

TEST(MichaelSimonK1, SphereWithConstantWeight) {
  for (double c : {1.0, 2.5}) {
    const RadialSurface s = make_sphere(axisym(2, 100), 1.3);
    const GeometryFields geo = geometry(s);
    const MichaelSimonTerms t = ms_lhs_k1(s, geo, WeightProfile::constant(c));
    EXPECT_NEAR(t.lhs / (c * 4 * kPi * std::sinh(1.3)), 1.0, 1e-12);
    EXPECT_EQ(t.boundary, 0.0);
  }
  const RadialSurface one = make_sphere(full2d(64, 128), 1.0);
  const GeometryFields g1 = geometry(one);
  EXPECT_NEAR(ms_rhs_k1(one, g1, WeightProfile::constant(1)), 14.7680, 1e-4);
}

TEST(MichaelSimonK1, ConstantWeightReducesToMinkowskiType) {
  const RadialSurface s = make_perturbed_sphere(axisym(2, 128), 1.0, 0.05, 2);
  const GeometryFields geo = geometry(s);
  const MichaelSimonTerms t = ms_lhs_k1(s, geo, WeightProfile::constant(1));
  const InequalityReport m = minkowski_type_report(s, geo);
  EXPECT_NEAR(t.lhs, m.lhs, 1e-13 * std::abs(m.lhs));
  EXPECT_NEAR(ms_rhs_k1(s, geo, WeightProfile::constant(1)), m.rhs, 1e-13 * m.rhs);
}

TEST(MichaelSimonK1, CapTermsAgainstClosedForms) {
  const double R = 1.0;
  const double lam = std::sinh(R), lp = std::cosh(R);
  for (double t0 : {kPi / 6, kPi / 3, kPi / 2}) {
    GeneratorOptions opts;
    opts.cap_limit = t0;
    const RadialSurface s = make_sphere(axisym(2, 200), R, opts);
    const GeometryFields geo = geometry(s);
    const MichaelSimonTerms t = ms_lhs_k1(s, geo, WeightProfile::constant(1));
    const double area = 2 * kPi * lam * lam * (1 - std::cos(t0));
    const double term1 = lp * (lp / lam) * area;
    const double term2 = lam * area;
    const double boundary = 2 * kPi * lam * std::sin(t0);
    EXPECT_NEAR(t.term1 / term1, 1.0, 1e-10);
    EXPECT_NEAR(t.term2 / term2, 1.0, 1e-10);
    EXPECT_NEAR(t.boundary / boundary, 1.0, 1e-10);
    EXPECT_NEAR(t.lhs / (term1 - term2 + boundary), 1.0, 1e-10);
    const InequalityReport rep = ms_report_k(s, geo, WeightProfile::constant(1), 1);
    EXPECT_GE(rep.gap, 0.0);
    EXPECT_FALSE(rep.equality_expected);
  }
}

TEST(MichaelSimonK1, RhsHomogeneity) {
  const RadialSurface s = make_perturbed_sphere(axisym(2, 64), 1.0, 0.05, 3);
  const GeometryFields geo = geometry(s);
  const double a = ms_rhs_k1(s, geo, WeightProfile::power(1.0));
  const double b = ms_rhs_k1(s, geo, WeightProfile::power(1.0, 2.0));
  EXPECT_NEAR(b / a, 2.0, 1e-13);
}

TEST(MichaelSimonK1, RhsAgainstRefinedGrid) {
  auto at = [](int N) {
    const RadialSurface s = make_perturbed_sphere(axisym(2, N), 1.0, 0.05, 2);
    return ms_rhs_k1(s, geometry(s), WeightProfile::power(1.0));
  };
  EXPECT_NEAR(at(200) / at(2000), 1.0, 1e-8);
}

TEST(MichaelSimonK, SphereEquality) {
  for (double R : {0.5, 1.0, 2.0})
    for (int k : {1, 2, 3}) {
      const RadialSurface s = make_sphere(axisym(4, 100), R);
      const InequalityReport rep = ms_report_k(s, WeightProfile::constant(1.7), k);
      EXPECT_LT(std::abs(rep.relative_gap()), 1e-10) << R << " " << k;
      EXPECT_TRUE(rep.equality_expected);
    }
}

TEST(MichaelSimonK, ReductionToK1IsBitIdentical) {
  const RadialSurface s = make_perturbed_sphere(axisym(3, 64), 1.0, 0.05, 2);
  const GeometryFields geo = geometry(s);
  const WeightProfile f = WeightProfile::power(1.0);
  const InequalityReport rep = ms_report_k(s, geo, f, 1);
  EXPECT_EQ(rep.lhs, ms_lhs_k1(s, geo, f).lhs);
  EXPECT_EQ(rep.rhs, ms_rhs_k1(s, geo, f));
  EXPECT_EQ(rep.kind, InequalityKind::ms_k1);
}

TEST(MichaelSimonK, PerturbedGapPositiveAtTwoResolutions) {
  auto gap = [](int N) {
    const RadialSurface s = make_perturbed_sphere(axisym(4, N), 1.0, 0.05, 2);
    return ms_report_k(s, WeightProfile::constant(1), 2);
  };
  const InequalityReport a = gap(100), b = gap(200);
  EXPECT_GT(a.gap, 0.0);
  EXPECT_GT(b.gap, 0.0);
  EXPECT_NEAR(a.gap / b.gap, 1.0, 2e-5);
  EXPECT_NEAR(b.relative_gap(), 2.56e-3, 5e-5);
}

TEST(MichaelSimonK, Homogeneity) {
  const RadialSurface s = make_perturbed_sphere(axisym(4, 100), 1.0, 0.05, 2);
  const GeometryFields geo = geometry(s);
  for (int k : {1, 2, 3}) {
    const InequalityReport a = ms_report_k(s, geo, angular(WeightProfile::power(1.0)), k);
    const InequalityReport b = ms_report_k(s, geo, angular(WeightProfile::power(1.0, 3.0)), k);
    EXPECT_NEAR(b.lhs / a.lhs, 3.0, 1e-12);
    EXPECT_NEAR(b.rhs / a.rhs, 3.0, 1e-12);
    EXPECT_EQ(a.gap > 0, b.gap > 0);
  }
}

TEST(MichaelSimonK, OrderRange) {
  const RadialSurface s = make_sphere(axisym(4, 32), 1.0);
  EXPECT_THROW(ms_report_k(s, WeightProfile::constant(1), 4), DomainError);
  EXPECT_THROW(ms_report_k(s, WeightProfile::constant(1), 0), DomainError);
}

TEST(MichaelSimonK, NonHConvexIsFlagged) {
  const RadialSurface s = make_perturbed_sphere(axisym(2, 64), 2.0, 0.4, 4);
  ASSERT_LT(validity(s).h_convex_margin, 0.0);
  const InequalityReport rep = ms_report_k(s, WeightProfile::constant(1), 1);
  EXPECT_TRUE(rep.outside_hypothesis);
  EXPECT_TRUE(rep.passed());
}

TEST(Extension, SphereWithRadiusWeight) {
  // f = r is constant on a geodesic sphere but its radial extension is not.
  const double R = 1.2;
  const RadialSurface s = make_sphere(axisym(2, 100), R);
  const GeometryFields geo = geometry(s);
  const InequalityReport ang = ms_report_k(s, geo, angular(WeightProfile::power(1.0)), 1);
  EXPECT_LT(std::abs(ang.relative_gap()), 1e-10);
  EXPECT_EQ(ang.extension, "angular");
  const InequalityReport rad = ms_report_k(s, geo, WeightProfile::power(1.0), 1);
  const double area = 4 * kPi * std::sinh(R) * std::sinh(R);
  EXPECT_NEAR(rad.gap, -std::cosh(R) * area, 1e-10 * area);
}

TEST(WeightedAF, SphereEqualityAndOrders) {
  const RadialSurface s = make_sphere(axisym(4, 64), 1.0);
  EXPECT_LT(std::abs(weighted_af_report(s, 3).relative_gap()), 1e-12);
  EXPECT_THROW(weighted_af_report(s, 2), DomainError);
  EXPECT_THROW(weighted_af_report(s, 1), DomainError);
}

TEST(WeightedAF, BlobAndEpsilonApproach) {
  const std::vector<double> coeffs{1.2, 0.0, 0.04, 0.0, 0.01};
  const InequalityReport a = weighted_af_report(make_axisym_blob(axisym(4, 100), coeffs), 3);
  const InequalityReport b = weighted_af_report(make_axisym_blob(axisym(4, 200), coeffs), 3);
  EXPECT_GT(a.gap, 0.0);
  EXPECT_GT(b.gap, 0.0);
  EXPECT_NEAR(a.gap / b.gap, 1.0, 2e-5);
  double prev = 0.0;
  for (double eps : {0.02, 0.05, 0.1}) {
    const double gap = weighted_af_report(make_perturbed_sphere(axisym(4, 128), 1.0, eps, 2), 3).gap;
    EXPECT_GT(gap, prev);
    prev = gap;
  }
}

TEST(QField, ConstantWeight) {
  const double R = 0.9;
  const RadialSurface sphere = make_sphere(axisym(3, 32), R);
  const QField q = q_field(sphere, geometry(sphere), WeightProfile::constant(2.0), 1);
  const double phi2 = std::pow(2.0, 3.0 / 2.0);
  for (double x : q.values) EXPECT_NEAR(x, phi2 * std::tanh(R), 1e-13);
  EXPECT_TRUE(q.all_positive);
  const RadialSurface s = make_perturbed_sphere(axisym(3, 64), 1.0, 0.1, 3);
  const GeometryFields geo = geometry(s);
  const QField p = q_field(s, geo, WeightProfile::constant(2.0), 2);
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    EXPECT_NEAR(p.values[i] * geo.e[1][i], std::pow(2.0, 2.0), 1e-13);
  }
}

TEST(QField, RadiusWeightAgainstRefinedGrid) {
  // Midpoint grids with N and 3N nodes share every N-grid node.
  auto q = [](int N) {
    const RadialSurface s = make_perturbed_sphere(axisym(2, N), 1.0, 0.05, 2);
    return q_field(s, geometry(s), WeightProfile::power(1.0), 1).values;
  };
  const Field a = q(128), b = q(384);
  for (int i = 0; i < 128; ++i) EXPECT_NEAR(a[i], b[3 * i + 1], 1e-7);
}
