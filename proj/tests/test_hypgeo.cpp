#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hypflow/error.hpp"
#include "hypflow/hypgeo.hpp"

using namespace hypflow;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(AmbientModel, UnitSphereAreas) {
  EXPECT_DOUBLE_EQ(unit_sphere_area(1), 2 * kPi);
  EXPECT_NEAR(unit_sphere_area(2), 4 * kPi, 1e-14);
  EXPECT_NEAR(unit_sphere_area(3), 2 * kPi * kPi, 1e-13);
  // Gamma-function closed form 2 pi^{(n+1)/2} / Gamma((n+1)/2)
  for (int n = 2; n <= 8; ++n) {
    const double gamma = 2 * std::pow(kPi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
    EXPECT_NEAR(AmbientModel(n).omega(), gamma, 1e-12 * gamma) << n;
  }
  EXPECT_THROW(AmbientModel(1), DomainError);
}

TEST(RadialScalars, HyperbolicIdentity) {
  for (double r : {0.1, 1.0, 5.0}) {
    const RadialScalars s = radial_scalars(r);
    const double scale = s.lambda_prime * s.lambda_prime;
    EXPECT_LT(std::abs(s.lambda_prime * s.lambda_prime - s.lambda * s.lambda - 1.0), 1e-14 * scale);
  }
}

TEST(RadialScalars, ValuesAtOne) {
  const RadialScalars s = radial_scalars(1.0);
  EXPECT_NEAR(s.lambda, 1.1752012, 1e-7);
  EXPECT_NEAR(s.lambda_prime, 1.5430806, 1e-7);
  EXPECT_NEAR(s.gamma, 0.5430806, 1e-7);
  EXPECT_NEAR(s.chi, std::log(std::tanh(0.5)), 1e-15);
}

TEST(RadialScalars, ChiDerivativeIsInverseSinh) {
  double prev = 0.0;
  for (double h : {1e-2, 5e-3}) {
    const double fd = (chi(1.0 + h) - chi(1.0 - h)) / (2 * h);
    const double err = std::abs(fd - 1.0 / std::sinh(1.0));
    if (prev > 0.0) EXPECT_NEAR(prev / err, 4.0, 0.05);
    prev = err;
  }
}

TEST(RadialScalars, ChiInverseAndMonotone) {
  for (double r : {0.05, 0.5, 2.0, 7.0}) EXPECT_NEAR(chi_inverse(chi(r)), r, 1e-12 * r);
  EXPECT_LT(chi(0.5), chi(0.6));
}

TEST(RadialScalars, RejectsNonpositiveRadius) {
  EXPECT_THROW(radial_scalars(0.0), DomainError);
  EXPECT_THROW(radial_scalars(-1.0), DomainError);
  EXPECT_THROW(chi(0.0), DomainError);
}

TEST(SphereQuantities, TwoSphereOfRadiusOne) {
  const SphereQuantities q = sphere_quantities(1.0, AmbientModel(2));
  const double s2 = std::sinh(1.0) * std::sinh(1.0);
  EXPECT_NEAR(q.area, 4 * kPi * s2, 1e-12);
  EXPECT_NEAR(q.w1, 2 * kPi * s2, 1e-12);
  EXPECT_NEAR(q.w1, 8.6777, 1e-4);
  EXPECT_NEAR(q.principal_curvature, 1.0 / std::tanh(1.0), 1e-15);
  EXPECT_NEAR(q.support, std::sinh(1.0), 1e-15);
  ASSERT_EQ(q.e.size(), 3u);
  EXPECT_NEAR(q.e[2], q.principal_curvature * q.principal_curvature, 1e-14);
}

TEST(SphereQuantities, Stationary) {
  for (int n : {2, 3, 5})
    for (double R : {0.2, 1.0, 3.0}) {
      EXPECT_LT(std::abs(sphere_quantities(R, AmbientModel(n)).speed), 1e-14 * std::cosh(R));
    }
}

TEST(SphereQuantities, MinkowskiOnSphere) {
  const SphereQuantities q = sphere_quantities(1.0, AmbientModel(2));
  EXPECT_NEAR(std::cosh(1.0) * q.area, q.support * q.e[1] * q.area, 1e-13);
}

TEST(Q1, InverseRoundTrip) {
  for (int n : {2, 3, 4})
    for (double R : {0.3, 1.0, 2.0}) {
      const AmbientModel m(n);
      EXPECT_NEAR(q1_inverse(q1(R, m), m), R, 1e-12 * R);
    }
  const AmbientModel m2(2);
  EXPECT_NEAR(q1_inverse(2 * kPi * std::sinh(1.0) * std::sinh(1.0), m2), 1.0, 1e-14);
}

TEST(Q1, MatchesBisection) {
  const AmbientModel m(3);
  double lo = 1e-6, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (q1(mid, m) < 1.0 ? lo : hi) = mid;
  }
  EXPECT_NEAR(q1_inverse(1.0, m), 0.5 * (lo + hi), 1e-10);
}

TEST(Q1, StrictlyIncreasingAndRejectsBadInput) {
  const AmbientModel m(4);
  double prev = 0.0;
  for (double R = 0.01; R < 6.0; R *= 1.3) {
    EXPECT_GT(q1(R, m), prev);
    prev = q1(R, m);
    EXPECT_NEAR(q1_inverse(prev, m), R, 1e-12 * R);
  }
  EXPECT_THROW(q1(0.0, m), DomainError);
  EXPECT_THROW(q1_inverse(-1.0, m), DomainError);
}

TEST(PkHk, ClosedForms) {
  const AmbientModel m4(4);
  for (double R : {0.5, 1.0, 2.0}) EXPECT_NEAR(pk_hk(R, 1, m4).p, m4.omega(), 1e-14);
  const double c = std::cosh(1.0), s = std::sinh(1.0);
  EXPECT_NEAR(pk_hk(1.0, 3, m4).h, m4.omega() * std::pow(c, 4) * s, 1e-12);
  EXPECT_THROW(pk_hk(1.0, 0, m4), DomainError);
  EXPECT_THROW(pk_hk(1.0, 5, m4), DomainError);
}

TEST(PkHk, SphereWeightedCurvatureIntegral) {
  const AmbientModel m(4);
  const double R = 1.3;
  const SphereQuantities q = sphere_quantities(R, m);
  const double integral = std::cosh(R) * q.e[3] * q.area;
  EXPECT_NEAR(integral / pk_hk(R, 3, m).h, 1.0, 1e-12);
}
