#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypflow/hypgeo.hpp"
#include "hypflow/sgrid.hpp"
#include "hypflow/symfunc.hpp"

namespace hypflow {

// A starshaped hypersurface {(r(xi), xi)} written as a radial graph over the
// parameter sphere. Axisym surfaces may be restricted to the polar cap
// theta <= cap_limit, which gives a compact surface with boundary.
struct RadialSurface {
  std::shared_ptr<const SphereGrid> grid;
  Field r;
  std::optional<double> cap_limit;
  std::string id = "surface";

  bool closed() const noexcept { return !cap_limit.has_value(); }
  int dim() const noexcept { return grid->dim(); }
  AmbientModel model() const { return AmbientModel(grid->dim()); }
  // Throws StarshapednessError on r <= 0 or non-finite r, ConfigError on a cap
  // over a full2d grid.
  void validate() const;
};

// Per-node geometry of a radial graph, in struct-of-arrays layout.
//
// Axisym: kappa[0] is the meridian curvature, kappa[1..n-1] repeat the
// fiber curvature. full2d: kappa is sorted ascending per node and the
// coordinate Weingarten map / induced metric are kept for matrix access.
struct GeometryFields {
  int n = 0;
  GridMode mode = GridMode::axisym;
  Field lambda;
  Field lambda_prime;
  Field phi;          // chi(r)
  SphereGradient phi_grad;
  Field grad_norm2;   // |D phi|^2_sigma
  Field v;            // sqrt(1 + |D phi|^2)
  Field u;            // support function lambda / v
  Field area_density; // lambda^n v
  std::vector<Field> kappa;
  std::vector<Field> e;  // e[l], l = 0..n

  // full2d only: A = (h^i_j) row-major and g_ij = lambda^2 (sigma + dphi dphi).
  std::array<Field, 4> weingarten;
  std::array<Field, 3> metric;

  std::size_t size() const noexcept { return v.size(); }
  std::vector<double> kappa_at(std::size_t node) const;
  // Axisym maps are returned in an orthonormal frame (metric = identity).
  WeingartenMatrix weingarten_at(std::size_t node) const;
  double min_kappa() const;
  double max_kappa() const;
  double h_convex_margin() const { return min_kappa() - 1.0; }
};

GeometryFields geometry(const RadialSurface& surface);

// Hessian of a scalar on the surface with respect to the induced metric
// g_ij = lambda^2 sigma_ij + r_i r_j, built from derivatives of r and the
// scalar only (no curvature data involved).
//
// Axisym: `theta` and `fiber` are the eigenvalues of the mixed tensor.
// full2d: lowered coordinate components tt, tp, pp and the metric used.
struct SurfaceHessian {
  Field theta;
  Field fiber;
  Field tt, tp, pp;
  Field g_tt, g_tp, g_pp;
};

SurfaceHessian surface_hessian(const RadialSurface& surface, std::span<const double> w);
Field surface_laplacian(const RadialSurface& surface, std::span<const double> w);

// ||Hess(cosh r) - (cosh r g - u h)||_g per node, plus the contraction
// dE_l^{ij} Hess_ij(cosh r) - l (cosh r E_{l-1} - u E_l) for l = 1..n.
struct HessianIdentityResult {
  Field residual;
  double max_residual = 0.0;
  std::vector<Field> contraction;       // contraction[l - 1]
  std::vector<double> max_contraction;  // max over nodes, per l
};

HessianIdentityResult hessian_identity_residual(const RadialSurface& surface,
                                                const GeometryFields& geo);
HessianIdentityResult hessian_identity_residual(const RadialSurface& surface);

// |grad^M f| for a radial weight f = Phi(r): Phi'(r) sqrt(1 - v^{-2}).
Field tangential_gradient_radial(const GeometryFields& geo, std::span<const double> dprofile);
// sqrt(g^{ij} f_i f_j) from coordinate derivatives of an arbitrary field.
Field metric_gradient_norm(const RadialSurface& surface, const GeometryFields& geo,
                           std::span<const double> f);

// Surface factory.
struct GeneratorOptions {
  bool require_h_convex = false;
  std::optional<double> cap_limit;
};

struct ValidityReport {
  double h_convex_margin = 0.0;  // min kappa_i - 1
  ConeLabel worst;               // cone label at the node of smallest kappa
};

ValidityReport validity(const RadialSurface& surface);

double legendre(int l, double x);

RadialSurface make_sphere(std::shared_ptr<const SphereGrid> grid, double radius,
                          const GeneratorOptions& opts = {});
// r = R + eps P_l(cos theta)
RadialSurface make_perturbed_sphere(std::shared_ptr<const SphereGrid> grid, double radius,
                                    double eps, int l, const GeneratorOptions& opts = {});
// r = R + eps profile(theta, phi)
RadialSurface make_perturbed_sphere(std::shared_ptr<const SphereGrid> grid, double radius,
                                    double eps,
                                    const std::function<double(double, double)>& profile,
                                    const GeneratorOptions& opts = {});
// r = sum_l c_l P_l(cos theta)
RadialSurface make_axisym_blob(std::shared_ptr<const SphereGrid> grid,
                               std::span<const double> coefficients,
                               const GeneratorOptions& opts = {});

// Surface snapshot: a single header line
//   # mode=<full2d|axisym> n=<n> ntheta=<N> nphi=<M> columns=theta[,phi],r
// followed by one comma-separated row per node in node order.
void write_snapshot(std::ostream& out, const RadialSurface& surface);
RadialSurface read_snapshot(std::istream& in, int fd_order = 0);

}  // namespace hypflow
