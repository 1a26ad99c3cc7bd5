#include "hypflow/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hypflow/error.hpp"

namespace hypflow {

std::string to_string(EvaluationMode mode) {
  return mode == EvaluationMode::frozen ? "frozen" : "radial";
}

std::string to_string(Extension extension) {
  return extension == Extension::radial ? "radial" : "angular";
}

Extension extension_from_string(const std::string& name) {
  if (name == "radial") return Extension::radial;
  if (name == "angular") return Extension::angular;
  throw ConfigError("unknown extension '" + name + "' (expected radial or angular)");
}

std::string to_string(InequalityKind kind) {
  switch (kind) {
    case InequalityKind::ms_k1: return "MS_k1";
    case InequalityKind::minkowski_type: return "Minkowski_type";
    case InequalityKind::ms_k: return "MS_k";
    case InequalityKind::weighted_af: return "weighted_AF";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// WeightProfile

WeightProfile WeightProfile::constant(double c) {
  if (!(c > 0.0)) throw PreconditionError("constant weight must be positive");
  WeightProfile w;
  w.kind_ = Kind::constant;
  w.scale_ = c;
  return w;
}

WeightProfile WeightProfile::power(double p, double scale) {
  if (!(p >= 0.0)) throw PreconditionError("power weight needs p >= 0");
  if (!(scale > 0.0)) throw PreconditionError("power weight needs a positive scale");
  WeightProfile w;
  w.kind_ = Kind::power;
  w.a_ = p;
  w.scale_ = scale;
  return w;
}

WeightProfile WeightProfile::exponential(double a, double scale) {
  if (!(a >= 0.0)) throw PreconditionError("exponential weight needs a >= 0");
  if (!(scale > 0.0)) throw PreconditionError("exponential weight needs a positive scale");
  WeightProfile w;
  w.kind_ = Kind::exponential;
  w.a_ = a;
  w.scale_ = scale;
  return w;
}

WeightProfile WeightProfile::table(std::vector<double> r, std::vector<double> values) {
  if (r.size() < 2 || r.size() != values.size()) {
    throw PreconditionError("table weight needs >= 2 matching knots and values");
  }
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (!(r[i] > r[i - 1])) throw PreconditionError("table knots must increase strictly");
    if (values[i] < values[i - 1]) throw PreconditionError("table values must be non-decreasing");
  }
  if (!(values.front() > 0.0)) throw PreconditionError("table values must be positive");
  WeightProfile w;
  w.kind_ = Kind::table;
  w.knots_ = std::move(r);
  w.knot_values_ = std::move(values);
  return w;
}

double WeightProfile::value(double r) const {
  switch (kind_) {
    case Kind::constant: return scale_;
    case Kind::power: return scale_ * std::pow(r, a_);
    case Kind::exponential: return scale_ * std::exp(a_ * r);
    case Kind::table: {
      if (r <= knots_.front()) return knot_values_.front();
      if (r >= knots_.back()) return knot_values_.back();
      const auto it = std::upper_bound(knots_.begin(), knots_.end(), r);
      const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
      const double t = (r - knots_[i]) / (knots_[i + 1] - knots_[i]);
      return knot_values_[i] + t * (knot_values_[i + 1] - knot_values_[i]);
    }
  }
  return 0.0;
}

double WeightProfile::derivative(double r) const {
  switch (kind_) {
    case Kind::constant: return 0.0;
    case Kind::power: return a_ == 0.0 ? 0.0 : scale_ * a_ * std::pow(r, a_ - 1.0);
    case Kind::exponential: return scale_ * a_ * std::exp(a_ * r);
    case Kind::table: {
      if (r <= knots_.front() || r >= knots_.back()) return 0.0;
      const auto it = std::upper_bound(knots_.begin(), knots_.end(), r);
      const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
      return (knot_values_[i + 1] - knot_values_[i]) / (knots_[i + 1] - knots_[i]);
    }
  }
  return 0.0;
}

Field WeightProfile::values(std::span<const double> r) const {
  Field out(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) out[k] = value(r[k]);
  return out;
}

Field WeightProfile::derivatives(std::span<const double> r) const {
  Field out(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) out[k] = derivative(r[k]);
  return out;
}

void WeightProfile::validate(double r_min, double r_max) const {
  constexpr int kSamples = 257;
  for (int i = 0; i < kSamples; ++i) {
    const double r = r_min + (r_max - r_min) * i / (kSamples - 1);
    if (!(value(r) > 0.0)) throw PreconditionError(describe() + " is not positive on the run range");
    if (derivative(r) < 0.0) throw PreconditionError(describe() + " is decreasing on the run range");
  }
}

std::string WeightProfile::describe() const {
  char buf[96];
  switch (kind_) {
    case Kind::constant: std::snprintf(buf, sizeof buf, "const(%g)", scale_); break;
    case Kind::power: std::snprintf(buf, sizeof buf, "%g*r^%g", scale_, a_); break;
    case Kind::exponential: std::snprintf(buf, sizeof buf, "%g*exp(%g r)", scale_, a_); break;
    case Kind::table:
      std::snprintf(buf, sizeof buf, "table(%zu knots)", knots_.size());
      break;
  }
  return buf;
}

// ---------------------------------------------------------------------------
// Integration

SurfaceIntegrator::SurfaceIntegrator(const RadialSurface& surface, const GeometryFields& geo)
    : surface_(&surface) {
  const SphereGrid& grid = *surface.grid;
  std::vector<double> w;
  if (surface.cap_limit) {
    w = grid.cap_weights(*surface.cap_limit);
  } else {
    w.assign(grid.weights().begin(), grid.weights().end());
  }
  weights_.resize(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) weights_[k] = w[k] * geo.area_density[k];
  if (surface.cap_limit) {
    const double th0 = *surface.cap_limit;
    const int n = grid.dim();
    const double rho = grid.interpolate_theta(surface.r, th0);
    rim_measure_ = unit_sphere_area(n - 1) * std::pow(std::sinh(rho) * std::sin(th0), n - 1);
  }
}

double SurfaceIntegrator::operator()(std::span<const double> f) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < weights_.size(); ++k) acc += f[k] * weights_[k];
  return acc;
}

double SurfaceIntegrator::boundary(std::span<const double> f) const {
  if (!surface_->cap_limit) return 0.0;
  return rim_measure_ * surface_->grid->interpolate_theta(f, *surface_->cap_limit);
}

namespace {

Field product(std::span<const double> a, std::span<const double> b) {
  Field out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
  return out;
}

bool is_sphere(const RadialSurface& s) {
  const auto [lo, hi] = std::minmax_element(s.r.begin(), s.r.end());
  return (*hi - *lo) <= 1e-12 * *hi;
}

void fill_metadata(InequalityReport& rep, const RadialSurface& surface, const GeometryFields& geo) {
  const SphereGrid& grid = *surface.grid;
  rep.surface_id = surface.id;
  rep.mode = to_string(grid.mode());
  rep.n = grid.dim();
  rep.ntheta = grid.ntheta();
  rep.nphi = grid.nphi();
  rep.fd_order = grid.fd_order();
  rep.h_convex_margin = geo.h_convex_margin();
  rep.outside_hypothesis = rep.h_convex_margin < 0.0;
  rep.equality_expected = is_sphere(surface) && surface.closed();
}

}  // namespace

BasicIntegrals basic_integrals(const RadialSurface& surface, const GeometryFields& geo) {
  if (!surface.closed()) {
    throw PreconditionError("basic_integrals: W1 is defined for closed surfaces only");
  }
  const int n = geo.n;
  const SurfaceIntegrator integrate(surface, geo);
  BasicIntegrals out;
  out.area = integrate(Field(geo.size(), 1.0));
  out.w1 = out.area / n;
  out.weighted.resize(n + 1);
  out.support.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    out.weighted[k] = integrate(product(geo.lambda_prime, geo.e[k]));
    out.support[k] = integrate(product(geo.u, geo.e[k]));
  }
  return out;
}

BasicIntegrals basic_integrals(const RadialSurface& surface) {
  return basic_integrals(surface, geometry(surface));
}

double enclosed_w1(const RadialSurface& surface, const GeometryFields& geo) {
  return surface.grid->integrate(geo.area_density) / geo.n;
}

double minkowski_residual(const RadialSurface& surface, const GeometryFields& geo, int l) {
  if (!surface.closed()) throw PreconditionError("minkowski_residual: closed surface required");
  if (l < 1 || l > geo.n) throw DomainError("minkowski_residual: need 1 <= l <= n");
  const SurfaceIntegrator integrate(surface, geo);
  const double lhs = integrate(product(geo.lambda_prime, geo.e[l - 1]));
  const double rhs = integrate(product(geo.u, geo.e[l]));
  return std::abs(lhs - rhs) / std::max(std::abs(rhs), std::numeric_limits<double>::min());
}

namespace {

MichaelSimonTerms ms_terms(const RadialSurface& surface, const GeometryFields& geo,
                           const WeightProfile& f, int k) {
  const std::size_t size = geo.size();
  const Field fv = f.values(surface.r);
  const Field df = f.derivatives(surface.r);
  const Field grad_f = tangential_gradient_radial(geo, df);
  const bool angular = f.extension() == Extension::angular;
  Field t1(size), t2(size), rim(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double ek = geo.e[k][i];
    const double ekm1 = geo.e[k - 1][i];
    const double a = fv[i] * ek;
    const double b = grad_f[i] * ekm1;
    t1[i] = geo.lambda_prime[i] * std::sqrt(a * a + b * b);
    // <d_r, nu> = 1/v; an angular gradient pairs with nu to -|D phi|^2 / v
    const double radial_part = angular ? -df[i] * geo.grad_norm2[i] : df[i];
    t2[i] = (radial_part * geo.lambda_prime[i] + fv[i] * geo.lambda[i]) / geo.v[i] * ekm1;
    rim[i] = fv[i] * ekm1;
  }
  const SurfaceIntegrator integrate(surface, geo);
  MichaelSimonTerms out;
  out.term1 = integrate(t1);
  out.term2 = integrate(t2);
  out.boundary = integrate.boundary(rim);
  out.lhs = out.term1 - out.term2 + out.boundary;
  return out;
}

}  // namespace

MichaelSimonTerms ms_lhs_k1(const RadialSurface& surface, const GeometryFields& geo,
                            const WeightProfile& f) {
  return ms_terms(surface, geo, f, 1);
}

double ms_rhs_k1(const RadialSurface& surface, const GeometryFields& geo, const WeightProfile& f) {
  const int n = geo.n;
  const double p = static_cast<double>(n) / (n - 1);
  Field fp = f.values(surface.r);
  for (double& x : fp) x = std::pow(x, p);
  const SurfaceIntegrator integrate(surface, geo);
  const double omega = unit_sphere_area(n);
  return std::pow(omega, 1.0 / n) * std::pow(integrate(fp), 1.0 / p);
}

double discretization_tolerance(const SphereGrid& grid, double scale, double c) {
  return c * std::pow(grid.h_theta(), grid.fd_order()) * std::max(std::abs(scale), 1.0);
}

InequalityReport ms_report_k(const RadialSurface& surface, const GeometryFields& geo,
                             const WeightProfile& f, int k) {
  const int n = geo.n;
  InequalityReport rep;
  fill_metadata(rep, surface, geo);
  rep.k = k;
  rep.profile = f.describe();
  rep.extension = to_string(f.extension());
  if (k == 1) {
    const MichaelSimonTerms t = ms_lhs_k1(surface, geo, f);
    rep.kind = InequalityKind::ms_k1;
    rep.lhs = t.lhs;
    rep.boundary_term = t.boundary;
    rep.rhs = ms_rhs_k1(surface, geo, f);
  } else {
    if (k < 2 || k > n - 1) {
      throw DomainError("ms_report_k: need 1 <= k <= n - 1 (k = n has a singular exponent)");
    }
    rep.kind = InequalityKind::ms_k;
    const MichaelSimonTerms t = ms_terms(surface, geo, f, k);
    rep.lhs = t.lhs;
    rep.boundary_term = t.boundary;
    const AmbientModel model(n);
    const double radius = q1_inverse(enclosed_w1(surface, geo), model);
    const double pk = pk_hk(radius, k, model).p;
    const double expo = static_cast<double>(n - k + 1) / (n - k);
    Field weighted = f.values(surface.r);
    for (std::size_t i = 0; i < weighted.size(); ++i) {
      weighted[i] = std::pow(weighted[i], expo) * geo.e[k - 1][i];
    }
    const SurfaceIntegrator integrate(surface, geo);
    rep.rhs = std::pow(pk, 1.0 / (n - k + 1)) * std::pow(integrate(weighted), 1.0 / expo);
  }
  rep.gap = rep.lhs - rep.rhs;
  rep.tolerance = discretization_tolerance(*surface.grid, rep.rhs);
  return rep;
}

InequalityReport ms_report_k(const RadialSurface& surface, const WeightProfile& f, int k) {
  return ms_report_k(surface, geometry(surface), f, k);
}

InequalityReport minkowski_type_report(const RadialSurface& surface, const GeometryFields& geo) {
  if (!surface.closed()) throw PreconditionError("minkowski_type_report: closed surface required");
  const int n = geo.n;
  InequalityReport rep;
  fill_metadata(rep, surface, geo);
  rep.kind = InequalityKind::minkowski_type;
  rep.k = 1;
  rep.profile = "const(1)";
  Field integrand(geo.size());
  for (std::size_t i = 0; i < integrand.size(); ++i) {
    integrand[i] = geo.lambda_prime[i] * geo.e[1][i] - geo.u[i];
  }
  const SurfaceIntegrator integrate(surface, geo);
  rep.lhs = integrate(integrand);
  const double area = integrate(Field(geo.size(), 1.0));
  rep.rhs = std::pow(unit_sphere_area(n), 1.0 / n) * std::pow(area, (n - 1.0) / n);
  rep.gap = rep.lhs - rep.rhs;
  rep.tolerance = discretization_tolerance(*surface.grid, rep.rhs);
  return rep;
}

InequalityReport weighted_af_report(const RadialSurface& surface, const GeometryFields& geo,
                                    int k) {
  const int n = geo.n;
  if (k % 2 == 0) throw DomainError("weighted_af_report: k must be odd");
  if (k < 3 || k > n - 1) throw DomainError("weighted_af_report: need 3 <= k <= n - 1");
  if (!surface.closed()) throw PreconditionError("weighted_af_report: closed surface required");
  InequalityReport rep;
  fill_metadata(rep, surface, geo);
  rep.kind = InequalityKind::weighted_af;
  rep.k = k;
  rep.profile = "none";
  const SurfaceIntegrator integrate(surface, geo);
  rep.lhs = integrate(product(geo.lambda_prime, geo.e[k]));
  const AmbientModel model(n);
  rep.rhs = pk_hk(q1_inverse(enclosed_w1(surface, geo), model), k, model).h;
  rep.gap = rep.lhs - rep.rhs;
  rep.tolerance = discretization_tolerance(*surface.grid, rep.rhs);
  return rep;
}

InequalityReport weighted_af_report(const RadialSurface& surface, int k) {
  return weighted_af_report(surface, geometry(surface), k);
}

QField q_field(const RadialSurface& surface, const GeometryFields& geo, const WeightProfile& f,
               int k) {
  const int n = geo.n;
  if (k < 1 || k > n - 1) throw DomainError("q_field: need 1 <= k <= n - 1");
  const double expo = static_cast<double>(n - k + 1) / (n - k);
  QField q;
  q.phi2 = f.values(surface.r);
  for (double& x : q.phi2) x = std::pow(x, expo);
  if (f.is_constant()) {
    q.laplacian.assign(geo.size(), 0.0);
  } else {
    q.laplacian = surface_laplacian(surface, q.phi2);
  }
  q.values.resize(geo.size());
  q.positive.resize(geo.size());
  for (std::size_t i = 0; i < geo.size(); ++i) {
    const double e1 = geo.e[1][i];
    if (!(e1 > 0.0)) throw BreakdownError("q_field: E_1 <= 0", i);
    q.values[i] = (q.phi2[i] - q.laplacian[i] / n) / e1;
    q.positive[i] = q.values[i] > 0.0;
    q.all_positive = q.all_positive && q.positive[i];
  }
  return q;
}

}  // namespace hypflow
