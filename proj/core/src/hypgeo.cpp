#include "hypflow/hypgeo.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hypflow/error.hpp"

namespace hypflow {

double unit_sphere_area(int n) {
  if (n < 0) throw DomainError("unit_sphere_area: negative dimension");
  double even = 2.0;                   // omega_0
  double odd = 2.0 * std::numbers::pi;  // omega_1
  if (n == 0) return even;
  if (n == 1) return odd;
  double w = 0.0;
  double prev2 = (n % 2 == 0) ? even : odd;
  for (int m = (n % 2 == 0) ? 2 : 3; m <= n; m += 2) {
    w = 2.0 * std::numbers::pi * prev2 / (m - 1);
    prev2 = w;
  }
  return w;
}

AmbientModel::AmbientModel(int n) : n_(n), omega_(0.0) {
  if (n < 2) throw DomainError("AmbientModel: need n >= 2, got " + std::to_string(n));
  omega_ = unit_sphere_area(n);
}

double chi(double r) {
  if (!(r > 0.0)) throw DomainError("chi: radius must be positive");
  return std::log(std::tanh(0.5 * r));
}

double chi_inverse(double c) {
  if (!(c < 0.0)) throw DomainError("chi_inverse: argument must be negative");
  return 2.0 * std::atanh(std::exp(c));
}

RadialScalars radial_scalars(double r) {
  if (!(r > 0.0)) throw DomainError("radial_scalars: radius must be positive");
  const double s = std::sinh(r);
  const double c = std::cosh(r);
  return {r, s, c, c - 1.0, chi(r)};
}

SphereQuantities sphere_quantities(double radius, const AmbientModel& model) {
  if (!(radius > 0.0)) throw DomainError("sphere_quantities: radius must be positive");
  const int n = model.n();
  const double s = std::sinh(radius);
  const double c = std::cosh(radius);
  const double kappa = c / s;
  SphereQuantities q;
  q.radius = radius;
  q.principal_curvature = kappa;
  q.support = s;
  q.area = model.omega() * std::pow(s, n);
  q.w1 = q.area / n;
  q.speed = c / kappa - s;
  q.e.resize(n + 1);
  q.e[0] = 1.0;
  for (int l = 1; l <= n; ++l) q.e[l] = q.e[l - 1] * kappa;
  return q;
}

double q1(double radius, const AmbientModel& model) {
  if (!(radius > 0.0)) throw DomainError("q1: radius must be positive");
  return model.omega() * std::pow(std::sinh(radius), model.n()) / model.n();
}

double q1_inverse(double w1, const AmbientModel& model) {
  if (!(w1 > 0.0)) throw DomainError("q1_inverse: W1 must be positive");
  return std::asinh(std::pow(model.n() * w1 / model.omega(), 1.0 / model.n()));
}

PkHk pk_hk(double radius, int k, const AmbientModel& model) {
  const int n = model.n();
  if (k < 1 || k > n) throw DomainError("pk_hk: k must lie in [1, n]");
  if (!(radius > 0.0)) throw DomainError("pk_hk: radius must be positive");
  const double s = std::sinh(radius);
  const double c = std::cosh(radius);
  return {model.omega() * std::pow(c, k - 1),
          model.omega() * std::pow(c, k + 1) * std::pow(s, n - k)};
}

}  // namespace hypflow
