#include "hypflow/rsurface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hypflow/error.hpp"

namespace hypflow {
namespace {

constexpr int kMaxDim = 16;

bool finite(double x) { return std::isfinite(x); }

void check_node(double value, std::size_t node, const char* what) {
  if (!finite(value)) throw BreakdownError(std::string("non-finite ") + what, node);
}

}  // namespace

void RadialSurface::validate() const {
  if (!grid) throw ConfigError("surface has no grid");
  if (r.size() != grid->size()) throw ConfigError("surface field size does not match its grid");
  if (cap_limit && grid->mode() != GridMode::axisym) {
    throw ConfigError("caps are supported on axisym grids only");
  }
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (!finite(r[k]) || !(r[k] > 0.0)) {
      throw StarshapednessError("radius must be positive and finite", k);
    }
  }
}

std::vector<double> GeometryFields::kappa_at(std::size_t node) const {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = kappa[i][node];
  return out;
}

WeingartenMatrix GeometryFields::weingarten_at(std::size_t node) const {
  WeingartenMatrix w;
  if (mode == GridMode::axisym) {
    w.entries = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) w.entries(i, i) = kappa[i][node];
    w.metric = Eigen::MatrixXd::Identity(n, n);
    return w;
  }
  w.entries.resize(2, 2);
  w.entries << weingarten[0][node], weingarten[1][node], weingarten[2][node],
      weingarten[3][node];
  w.metric.resize(2, 2);
  w.metric << metric[0][node], metric[1][node], metric[1][node], metric[2][node];
  return w;
}

double GeometryFields::min_kappa() const {
  double m = std::numeric_limits<double>::infinity();
  for (const Field& k : kappa)
    for (double x : k) m = std::min(m, x);
  return m;
}

double GeometryFields::max_kappa() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const Field& k : kappa)
    for (double x : k) m = std::max(m, x);
  return m;
}

GeometryFields geometry(const RadialSurface& surface) {
  surface.validate();
  const SphereGrid& grid = *surface.grid;
  const int n = grid.dim();
  const std::size_t size = grid.size();

  GeometryFields geo;
  geo.n = n;
  geo.mode = grid.mode();
  geo.lambda.resize(size);
  geo.lambda_prime.resize(size);
  geo.phi.resize(size);
  for (std::size_t k = 0; k < size; ++k) {
    const RadialScalars rs = radial_scalars(surface.r[k]);
    geo.lambda[k] = rs.lambda;
    geo.lambda_prime[k] = rs.lambda_prime;
    geo.phi[k] = rs.chi;
  }
  geo.phi_grad = grid.gradient(geo.phi);
  const SphereHessian hess = grid.hessian(geo.phi);

  geo.grad_norm2.resize(size);
  geo.v.resize(size);
  geo.u.resize(size);
  geo.area_density.resize(size);
  geo.kappa.assign(n, Field(size));
  geo.e.assign(n + 1, Field(size));

  std::array<double, kMaxDim> kap{};
  std::array<double, kMaxDim + 1> es{};

  if (grid.mode() == GridMode::axisym) {
    for (std::size_t k = 0; k < size; ++k) {
      const double lam = geo.lambda[k];
      const double dphi = geo.phi_grad.theta[k];
      const double g2 = dphi * dphi;
      const double v = std::sqrt(1.0 + g2);
      geo.grad_norm2[k] = g2;
      geo.v[k] = v;
      geo.u[k] = lam / v;
      geo.area_density[k] = std::pow(lam, n) * v;
      const double base = geo.lambda_prime[k] / (lam * v);
      const double k_theta = base - hess.tt[k] / (lam * v * v * v);
      const double k_fiber = base - hess.fiber[k] / (lam * v);
      check_node(k_theta, k, "meridian curvature");
      check_node(k_fiber, k, "fiber curvature");
      kap[0] = k_theta;
      for (int i = 1; i < n; ++i) kap[i] = k_fiber;
      for (int i = 0; i < n; ++i) geo.kappa[i][k] = kap[i];
      elementary_symmetric_all(std::span<const double>(kap.data(), n), es);
      for (int l = 0; l <= n; ++l) geo.e[l][k] = es[l];
      if (!(geo.u[k] > 0.0)) throw StarshapednessError("support function u <= 0", k);
    }
    return geo;
  }

  for (auto& f : geo.weingarten) f.resize(size);
  for (auto& f : geo.metric) f.resize(size);
  for (std::size_t k = 0; k < size; ++k) {
    const double th = grid.theta_of(k);
    const double s = std::sin(th);
    const double s2 = s * s;
    const double lam = geo.lambda[k];
    const double pt = geo.phi_grad.theta[k];
    const double pp = geo.phi_grad.phi[k];
    // raised gradient phi^i = sigma^{ij} phi_j
    const double ut = pt;
    const double up = pp / s2;
    const double g2 = pt * ut + pp * up;
    const double v = std::sqrt(1.0 + g2);
    const double v2 = v * v;
    geo.grad_norm2[k] = g2;
    geo.v[k] = v;
    geo.u[k] = lam / v;
    geo.area_density[k] = lam * lam * v;

    // M^{ij} = sigma^{ij} - phi^i phi^j / v^2
    const double m_tt = 1.0 - ut * ut / v2;
    const double m_tp = -ut * up / v2;
    const double m_pp = 1.0 / s2 - up * up / v2;
    const double h_tt = hess.tt[k];
    const double h_tp = hess.tp[k];
    const double h_pp = hess.pp[k];
    const double base = geo.lambda_prime[k] / (lam * v);
    const double scale = 1.0 / (lam * v);
    const double a_tt = base - scale * (m_tt * h_tt + m_tp * h_tp);
    const double a_tp = -scale * (m_tt * h_tp + m_tp * h_pp);
    const double a_pt = -scale * (m_tp * h_tt + m_pp * h_tp);
    const double a_pp = base - scale * (m_tp * h_tp + m_pp * h_pp);
    geo.weingarten[0][k] = a_tt;
    geo.weingarten[1][k] = a_tp;
    geo.weingarten[2][k] = a_pt;
    geo.weingarten[3][k] = a_pp;
    geo.metric[0][k] = lam * lam * (1.0 + pt * pt);
    geo.metric[1][k] = lam * lam * pt * pp;
    geo.metric[2][k] = lam * lam * (s2 + pp * pp);

    const double half_tr = 0.5 * (a_tt + a_pp);
    const double det = a_tt * a_pp - a_tp * a_pt;
    const double disc = std::sqrt(std::max(0.0, half_tr * half_tr - det));
    check_node(half_tr, k, "mean curvature");
    check_node(det, k, "Gauss-Kronecker curvature");
    geo.kappa[0][k] = half_tr - disc;
    geo.kappa[1][k] = half_tr + disc;
    geo.e[0][k] = 1.0;
    geo.e[1][k] = half_tr;
    geo.e[2][k] = det;
    if (!(geo.u[k] > 0.0)) throw StarshapednessError("support function u <= 0", k);
  }
  return geo;
}

SurfaceHessian surface_hessian(const RadialSurface& surface, std::span<const double> w) {
  const SphereGrid& grid = *surface.grid;
  const std::size_t size = grid.size();
  Field lam2(size);
  for (std::size_t k = 0; k < size; ++k) lam2[k] = std::pow(std::sinh(surface.r[k]), 2);
  const Field rt = grid.d_theta(surface.r);
  const Field wt = grid.d_theta(w);

  SurfaceHessian out;
  if (grid.mode() == GridMode::axisym) {
    Field gtt(size);
    for (std::size_t k = 0; k < size; ++k) gtt[k] = lam2[k] + rt[k] * rt[k];
    const Field dgtt = grid.d_theta(gtt);
    const Field dlam2 = grid.d_theta(lam2);
    const Field wtt = grid.d_theta2(w);
    out.theta.resize(size);
    out.fiber.resize(size);
    for (std::size_t k = 0; k < size; ++k) {
      const double cot = 1.0 / std::tan(grid.theta_of(k));
      // Gamma^theta_{theta theta} = g_tt' / (2 g_tt);
      // fiber: Gamma^theta_{ab} = -(1/2) g^{tt} d_theta(lambda^2 sin^2) gamma_ab
      out.theta[k] = (wtt[k] - 0.5 * dgtt[k] / gtt[k] * wt[k]) / gtt[k];
      out.fiber[k] = 0.5 / gtt[k] * (dlam2[k] / lam2[k] + 2.0 * cot) * wt[k];
    }
    return out;
  }

  // Levi-Civita of g = lambda^2 sigma + dr dr relative to sigma:
  // (Gamma_g - Gamma_sigma)^k_ij w_k
  //   = lambda lambda' (r_i W_j + r_j W_i - sigma_ij <dr, W>) + r_;ij <dr, W>,
  // W = g^{-1} dw lowered with sigma, r_;ij the sigma-Hessian of r.
  const SphereHessian hr = grid.hessian(surface.r);
  const SphereHessian hw = grid.hessian(w);
  const Field rp = grid.d_phi(surface.r);
  const Field wp = grid.d_phi(w);
  out.g_tt.resize(size);
  out.g_tp.resize(size);
  out.g_pp.resize(size);
  out.tt.resize(size);
  out.tp.resize(size);
  out.pp.resize(size);
  for (std::size_t k = 0; k < size; ++k) {
    const double s2 = std::pow(std::sin(grid.theta_of(k)), 2);
    const double g_tt = lam2[k] + rt[k] * rt[k];
    const double g_tp = rt[k] * rp[k];
    const double g_pp = lam2[k] * s2 + rp[k] * rp[k];
    out.g_tt[k] = g_tt;
    out.g_tp[k] = g_tp;
    out.g_pp[k] = g_pp;
    const double det = g_tt * g_pp - g_tp * g_tp;
    const double up_t = (g_pp * wt[k] - g_tp * wp[k]) / det;
    const double up_p = (g_tt * wp[k] - g_tp * wt[k]) / det;
    const double w_t = up_t;
    const double w_p = s2 * up_p;
    const double rw = rt[k] * up_t + rp[k] * up_p;
    const double ll = std::sqrt(lam2[k]) * std::cosh(surface.r[k]);
    out.tt[k] = hw.tt[k] - ll * (2.0 * rt[k] * w_t - rw) - hr.tt[k] * rw;
    out.tp[k] = hw.tp[k] - ll * (rt[k] * w_p + rp[k] * w_t) - hr.tp[k] * rw;
    out.pp[k] = hw.pp[k] - ll * (2.0 * rp[k] * w_p - s2 * rw) - hr.pp[k] * rw;
  }
  return out;
}

Field surface_laplacian(const RadialSurface& surface, std::span<const double> w) {
  const SurfaceHessian h = surface_hessian(surface, w);
  const std::size_t size = surface.grid->size();
  Field out(size);
  if (surface.grid->mode() == GridMode::axisym) {
    const int n = surface.dim();
    for (std::size_t k = 0; k < size; ++k) out[k] = h.theta[k] + (n - 1) * h.fiber[k];
    return out;
  }
  for (std::size_t k = 0; k < size; ++k) {
    const double det = h.g_tt[k] * h.g_pp[k] - h.g_tp[k] * h.g_tp[k];
    out[k] = (h.g_pp[k] * h.tt[k] - 2.0 * h.g_tp[k] * h.tp[k] + h.g_tt[k] * h.pp[k]) / det;
  }
  return out;
}

HessianIdentityResult hessian_identity_residual(const RadialSurface& surface,
                                                const GeometryFields& geo) {
  const int n = geo.n;
  const std::size_t size = geo.size();
  const SurfaceHessian hess = surface_hessian(surface, geo.lambda_prime);

  HessianIdentityResult out;
  out.residual.resize(size);
  out.contraction.assign(n, Field(size));
  out.max_contraction.assign(n, 0.0);

  if (geo.mode == GridMode::axisym) {
    std::array<double, kMaxDim> kap{};
    for (std::size_t k = 0; k < size; ++k) {
      const double lp = geo.lambda_prime[k];
      const double u = geo.u[k];
      const double rt = hess.theta[k] - (lp - u * geo.kappa[0][k]);
      const double rf = hess.fiber[k] - (lp - u * geo.kappa[1][k]);
      out.residual[k] = std::sqrt(rt * rt + (n - 1) * rf * rf);
      for (int i = 0; i < n; ++i) kap[i] = geo.kappa[i][k];
      const std::span<const double> kv(kap.data(), n);
      for (int l = 1; l <= n; ++l) {
        double c = elementary_symmetric_partial(kv, l, 0) * hess.theta[k];
        c += (n - 1) * elementary_symmetric_partial(kv, l, 1) * hess.fiber[k];
        c -= l * (lp * geo.e[l - 1][k] - u * geo.e[l][k]);
        out.contraction[l - 1][k] = c;
      }
    }
  } else {
    for (std::size_t k = 0; k < size; ++k) {
      Eigen::Matrix2d g, t, a;
      g << hess.g_tt[k], hess.g_tp[k], hess.g_tp[k], hess.g_pp[k];
      t << hess.tt[k], hess.tp[k], hess.tp[k], hess.pp[k];
      a << geo.weingarten[0][k], geo.weingarten[1][k], geo.weingarten[2][k],
          geo.weingarten[3][k];
      const Eigen::Matrix2d mixed = g.inverse() * t;
      const Eigen::Matrix2d target =
          geo.lambda_prime[k] * Eigen::Matrix2d::Identity() - geo.u[k] * a;
      // norm in a g-orthonormal frame: L^T (g^{-1} R) L^{-T} with g = L L^T
      const Eigen::Matrix2d diff = mixed - target;
      const Eigen::Matrix2d l = g.llt().matrixL();
      const Eigen::Matrix2d ortho = l.transpose() * diff * l.transpose().inverse();
      out.residual[k] = ortho.norm();
      for (int order = 1; order <= n; ++order) {
        double c = elementary_symmetric_directional(a, mixed, order);
        c -= order * (geo.lambda_prime[k] * geo.e[order - 1][k] - geo.u[k] * geo.e[order][k]);
        out.contraction[order - 1][k] = c;
      }
    }
  }
  for (std::size_t k = 0; k < size; ++k) {
    out.max_residual = std::max(out.max_residual, out.residual[k]);
    for (int l = 0; l < n; ++l) {
      out.max_contraction[l] = std::max(out.max_contraction[l], std::abs(out.contraction[l][k]));
    }
  }
  return out;
}

HessianIdentityResult hessian_identity_residual(const RadialSurface& surface) {
  return hessian_identity_residual(surface, geometry(surface));
}

Field tangential_gradient_radial(const GeometryFields& geo, std::span<const double> dprofile) {
  Field out(geo.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    // 1 - v^{-2} = |D phi|^2 / v^2
    out[k] = dprofile[k] * std::sqrt(geo.grad_norm2[k]) / geo.v[k];
  }
  return out;
}

Field metric_gradient_norm(const RadialSurface& surface, const GeometryFields& geo,
                           std::span<const double> f) {
  const SphereGrid& grid = *surface.grid;
  const SphereGradient df = grid.gradient(f);
  Field out(grid.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double lam2 = geo.lambda[k] * geo.lambda[k];
    const double v2 = geo.v[k] * geo.v[k];
    if (grid.mode() == GridMode::axisym) {
      const double pt = geo.phi_grad.theta[k];
      const double q = df.theta[k] * df.theta[k] - std::pow(pt * df.theta[k], 2) / v2;
      out[k] = std::sqrt(std::max(0.0, q / lam2));
      continue;
    }
    const double s2 = std::pow(std::sin(grid.theta_of(k)), 2);
    const double ut = geo.phi_grad.theta[k];
    const double up = geo.phi_grad.phi[k] / s2;
    const double ft = df.theta[k];
    const double fp = df.phi[k];
    const double dot = ut * ft + up * fp;
    const double q = ft * ft + fp * fp / s2 - dot * dot / v2;
    out[k] = std::sqrt(std::max(0.0, q / lam2));
  }
  return out;
}

ValidityReport validity(const RadialSurface& surface) {
  const GeometryFields geo = geometry(surface);
  ValidityReport rep;
  std::size_t worst = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < geo.size(); ++k) {
    for (int i = 0; i < geo.n; ++i) {
      if (geo.kappa[i][k] < best) {
        best = geo.kappa[i][k];
        worst = k;
      }
    }
  }
  rep.h_convex_margin = best - 1.0;
  const std::vector<double> kap = geo.kappa_at(worst);
  rep.worst = cone_classify(kap);
  return rep;
}

double legendre(int l, double x) {
  if (l == 0) return 1.0;
  double p0 = 1.0, p1 = x;
  for (int m = 2; m <= l; ++m) {
    const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

namespace {

RadialSurface finish(std::shared_ptr<const SphereGrid> grid, Field r, std::string id,
                     const GeneratorOptions& opts) {
  RadialSurface s;
  s.grid = std::move(grid);
  s.r = std::move(r);
  s.cap_limit = opts.cap_limit;
  s.id = std::move(id);
  for (std::size_t k = 0; k < s.r.size(); ++k) {
    if (!(s.r[k] > 0.0) || !std::isfinite(s.r[k])) {
      throw GenerationError("generated radius is not positive at node " + std::to_string(k));
    }
  }
  if (s.cap_limit && s.grid->mode() != GridMode::axisym) {
    throw ConfigError("caps are supported on axisym grids only");
  }
  if (opts.require_h_convex) {
    const ValidityReport rep = validity(s);
    if (rep.h_convex_margin < 0.0) {
      throw GenerationError("generated surface is not h-convex (margin " +
                            std::to_string(rep.h_convex_margin) + ")");
    }
  }
  return s;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

}  // namespace

RadialSurface make_sphere(std::shared_ptr<const SphereGrid> grid, double radius,
                          const GeneratorOptions& opts) {
  if (!(radius > 0.0)) throw GenerationError("sphere radius must be positive");
  Field r(grid->size(), radius);
  return finish(std::move(grid), std::move(r), "sphere(R=" + fmt(radius) + ")", opts);
}

RadialSurface make_perturbed_sphere(std::shared_ptr<const SphereGrid> grid, double radius,
                                    double eps, int l, const GeneratorOptions& opts) {
  if (l < 0) throw GenerationError("mode index must be nonnegative");
  Field r = grid->sample([&](double th, double) { return radius + eps * legendre(l, std::cos(th)); });
  return finish(std::move(grid), std::move(r),
                "perturbed_sphere(R=" + fmt(radius) + ",eps=" + fmt(eps) + ",l=" +
                    std::to_string(l) + ")",
                opts);
}

RadialSurface make_perturbed_sphere(std::shared_ptr<const SphereGrid> grid, double radius,
                                    double eps,
                                    const std::function<double(double, double)>& profile,
                                    const GeneratorOptions& opts) {
  Field r = grid->sample([&](double th, double ph) { return radius + eps * profile(th, ph); });
  return finish(std::move(grid), std::move(r),
                "perturbed_sphere(R=" + fmt(radius) + ",eps=" + fmt(eps) + ",profile)", opts);
}

RadialSurface make_axisym_blob(std::shared_ptr<const SphereGrid> grid,
                               std::span<const double> coefficients,
                               const GeneratorOptions& opts) {
  if (coefficients.empty()) throw GenerationError("blob needs at least one coefficient");
  Field r = grid->sample([&](double th, double) {
    double acc = 0.0;
    for (std::size_t l = 0; l < coefficients.size(); ++l) {
      acc += coefficients[l] * legendre(static_cast<int>(l), std::cos(th));
    }
    return acc;
  });
  std::string id = "blob(";
  for (std::size_t l = 0; l < coefficients.size(); ++l) {
    id += (l ? "," : "") + fmt(coefficients[l]);
  }
  id += ")";
  return finish(std::move(grid), std::move(r), std::move(id), opts);
}

}  // namespace hypflow
