#pragma once

#include <span>
#include <string>
#include <vector>

#include "hypflow/rsurface.hpp"

namespace hypflow {

enum class EvaluationMode {
  frozen,  // f(xi) = Phi(r_0(xi)), fixed at the initial surface
  radial,  // f = Phi(r_t(xi)), re-evaluated on the current surface
};

std::string to_string(EvaluationMode mode);

// Extension of f off the surface, which fixes the ambient gradient in
// <grad(f cosh r), nu>.
enum class Extension {
  radial,   // f = Phi(rho) on the ambient space: (Phi' cosh + Phi sinh) / v
  angular,  // f constant along radial lines, f(rho, xi) = Phi(r(xi)):
            // (Phi sinh - Phi' cosh |D phi|^2) / v
};

std::string to_string(Extension extension);
Extension extension_from_string(const std::string& name);

// Radial weight f = Phi(rho).
class WeightProfile {
 public:
  enum class Kind { constant, power, exponential, table };

  static WeightProfile constant(double c);
  // scale * r^p, p >= 0
  static WeightProfile power(double p, double scale = 1.0);
  // scale * exp(a r), a >= 0
  static WeightProfile exponential(double a, double scale = 1.0);
  // Piecewise-linear through (r_i, value_i), constant outside the knots.
  static WeightProfile table(std::vector<double> r, std::vector<double> values);

  Kind kind() const noexcept { return kind_; }
  EvaluationMode mode() const noexcept { return mode_; }
  WeightProfile& with_mode(EvaluationMode mode) {
    mode_ = mode;
    return *this;
  }
  Extension extension() const noexcept { return extension_; }
  WeightProfile& with_extension(Extension extension) {
    extension_ = extension;
    return *this;
  }
  bool is_constant() const noexcept { return kind_ == Kind::constant; }

  double value(double r) const;
  double derivative(double r) const;
  Field values(std::span<const double> r) const;
  Field derivatives(std::span<const double> r) const;

  // Throws PreconditionError unless Phi > 0 and Phi' >= 0 on [r_min, r_max].
  void validate(double r_min, double r_max) const;

  std::string describe() const;

 private:
  Kind kind_ = Kind::constant;
  EvaluationMode mode_ = EvaluationMode::frozen;
  Extension extension_ = Extension::radial;
  double a_ = 1.0;
  double scale_ = 1.0;
  std::vector<double> knots_;
  std::vector<double> knot_values_;
};

// Quadrature over the surface (the cap when the surface has one) with respect
// to the induced area measure, and over the cap rim.
class SurfaceIntegrator {
 public:
  SurfaceIntegrator(const RadialSurface& surface, const GeometryFields& geo);

  double operator()(std::span<const double> f) const;
  // Integral over the boundary sphere theta = theta0; 0 for closed surfaces.
  double boundary(std::span<const double> f) const;
  double boundary_measure() const noexcept { return rim_measure_; }

 private:
  const RadialSurface* surface_;
  std::vector<double> weights_;  // quadrature weight times area density
  double rim_measure_ = 0.0;
};

struct BasicIntegrals {
  double area = 0.0;
  double w1 = 0.0;
  std::vector<double> weighted;  // weighted[k] = int cosh(r) E_k, k = 0..n
  std::vector<double> support;   // support[k] = int u E_k,       k = 0..n
};

// Closed surfaces only (W_1 needs the enclosed domain).
BasicIntegrals basic_integrals(const RadialSurface& surface, const GeometryFields& geo);
BasicIntegrals basic_integrals(const RadialSurface& surface);

// W_1 of the domain enclosed by the full radial graph; for a cap this is the
// closed graph the cap was cut from.
double enclosed_w1(const RadialSurface& surface, const GeometryFields& geo);

// |int cosh E_{l-1} - int u E_l| / max(|int u E_l|, tiny), 1 <= l <= n.
double minkowski_residual(const RadialSurface& surface, const GeometryFields& geo, int l);

struct MichaelSimonTerms {
  double term1 = 0.0;     // int cosh sqrt(f^2 E_k^2 + |grad f|^2 E_{k-1}^2)
  double term2 = 0.0;     // int <grad(f cosh), nu> E_{k-1}
  double boundary = 0.0;  // int_{dM} f E_{k-1}
  double lhs = 0.0;       // term1 - term2 + boundary
};

MichaelSimonTerms ms_lhs_k1(const RadialSurface& surface, const GeometryFields& geo,
                            const WeightProfile& f);
double ms_rhs_k1(const RadialSurface& surface, const GeometryFields& geo, const WeightProfile& f);

enum class InequalityKind { ms_k1, minkowski_type, ms_k, weighted_af };
std::string to_string(InequalityKind kind);

struct InequalityReport {
  InequalityKind kind = InequalityKind::ms_k1;
  int k = 1;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double boundary_term = 0.0;
  bool equality_expected = false;
  bool outside_hypothesis = false;  // surface not h-convex
  double h_convex_margin = 0.0;
  double tolerance = 0.0;  // absolute gap tolerance
  std::string surface_id;
  std::string profile;
  std::string extension = "radial";
  std::string mode;
  int n = 0;
  int ntheta = 0;
  int nphi = 0;
  int fd_order = 0;

  double relative_gap() const { return rhs != 0.0 ? gap / std::abs(rhs) : gap; }
  bool passed() const { return outside_hypothesis || gap >= -tolerance; }
};

// Absolute tolerance C h^{fd_order} * scale for gap assertions.
double discretization_tolerance(const SphereGrid& grid, double scale, double c = 1.0);

// k = 1 delegates to ms_lhs_k1 / ms_rhs_k1; 2 <= k <= n - 1 otherwise.
InequalityReport ms_report_k(const RadialSurface& surface, const GeometryFields& geo,
                             const WeightProfile& f, int k);
InequalityReport ms_report_k(const RadialSurface& surface, const WeightProfile& f, int k);

// int (cosh E_1 - u) >= omega_n^{1/n} |M|^{(n-1)/n} on closed surfaces.
InequalityReport minkowski_type_report(const RadialSurface& surface, const GeometryFields& geo);

// int cosh E_k >= h_k(q1^{-1}(W_1)) for odd k >= 3, k <= n - 1.
InequalityReport weighted_af_report(const RadialSurface& surface, const GeometryFields& geo, int k);
InequalityReport weighted_af_report(const RadialSurface& surface, int k);

struct QField {
  Field values;
  Field phi2;       // Phi2~ = f^{(n-k+1)/(n-k)}
  Field laplacian;  // surface Laplacian of Phi2~
  std::vector<bool> positive;
  bool all_positive = true;
};

// Q = (Phi2~ - Lap Phi2~ / n) / E_1. Throws BreakdownError where E_1 <= 0.
QField q_field(const RadialSurface& surface, const GeometryFields& geo, const WeightProfile& f,
               int k);

}  // namespace hypflow
