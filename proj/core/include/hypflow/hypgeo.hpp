#pragma once

#include <vector>

namespace hypflow {

// Warped-product model of H^{n+1}: metric dr^2 + sinh(r)^2 sigma over S^n.
class AmbientModel {
 public:
  explicit AmbientModel(int n);

  int n() const noexcept { return n_; }
  // Area of the unit n-sphere.
  double omega() const noexcept { return omega_; }

 private:
  int n_;
  double omega_;
};

// Area of the unit n-sphere, via omega_n = 2 pi omega_{n-2} / (n-1) seeded with
// omega_0 = 2 and omega_1 = 2 pi.
double unit_sphere_area(int n);

struct RadialScalars {
  double r;
  double lambda;        // sinh r
  double lambda_prime;  // cosh r
  double gamma;         // cosh r - 1, the primitive of sinh vanishing at 0
  double chi;           // log tanh(r/2), a primitive of 1/sinh
};

// Throws DomainError for r <= 0 (chi is singular at the origin).
RadialScalars radial_scalars(double r);

// chi(r) = log(tanh(r/2)) and its inverse.
double chi(double r);
double chi_inverse(double c);

// Closed-form data of the geodesic sphere S_R about the origin.
struct SphereQuantities {
  double radius;
  double principal_curvature;  // coth R
  double support;              // sinh R
  double area;                 // omega_n sinh^n R
  double w1;                   // area / n
  double speed;                // cosh R / E_1 - u, zero up to roundoff
  std::vector<double> e;       // E_0 .. E_n = coth^k R
};

SphereQuantities sphere_quantities(double radius, const AmbientModel& model);

// q1(R) = W_1(S_R) = omega_n sinh^n R / n and its closed-form inverse.
double q1(double radius, const AmbientModel& model);
double q1_inverse(double w1, const AmbientModel& model);

struct PkHk {
  double p;  // omega_n cosh^{k-1} R
  double h;  // omega_n cosh^{k+1} R sinh^{n-k} R
};

// Requires 1 <= k <= n and R > 0.
PkHk pk_hk(double radius, int k, const AmbientModel& model);

}  // namespace hypflow
