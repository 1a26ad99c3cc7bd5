#include "hypflow/sgrid.hpp"

#include <cmath>
#include <numbers>

#include "hypflow/error.hpp"
#include "hypflow/hypgeo.hpp"

namespace hypflow {
namespace {

constexpr double kPi = std::numbers::pi;

// Centered stencils, integer weights over a common denominator.
constexpr double kD1o2[] = {-1.0, 0.0, 1.0};
constexpr double kD2o2[] = {1.0, -2.0, 1.0};
constexpr double kD1o4[] = {1.0, -8.0, 0.0, 8.0, -1.0};
constexpr double kD2o4[] = {-1.0, 16.0, -30.0, 16.0, -1.0};

struct Stencil {
  std::span<const double> weights;
  double denominator;
};

Stencil stencil(int order, int derivative) {
  if (order == 2) {
    return derivative == 1 ? Stencil{kD1o2, 2.0} : Stencil{kD2o2, 1.0};
  }
  return derivative == 1 ? Stencil{kD1o4, 12.0} : Stencil{kD2o4, 12.0};
}

}  // namespace

std::string to_string(GridMode mode) { return mode == GridMode::full2d ? "full2d" : "axisym"; }

GridMode grid_mode_from_string(const std::string& name) {
  if (name == "full2d") return GridMode::full2d;
  if (name == "axisym") return GridMode::axisym;
  throw ConfigError("unknown grid mode '" + name + "'");
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int m, double a, double b) {
  std::vector<double> x(m), w(m);
  const double mid = 0.5 * (b + a);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= m; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = m * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = mid - half * z;
    x[m - 1 - i] = mid + half * z;
    w[i] = 2.0 * half / ((1.0 - z * z) * dp * dp);
    w[m - 1 - i] = w[i];
  }
  return {x, w};
}

SphereGrid SphereGrid::build(GridMode mode, int n, int ntheta, int nphi, int fd_order) {
  SphereGrid g;
  g.mode_ = mode;
  if (mode == GridMode::full2d) {
    if (n != 2) throw ConfigError("full2d grids require n = 2");
    if (nphi == 0) nphi = 2 * ntheta;
    if (nphi < 8 || nphi % 2 != 0) throw ConfigError("full2d grids need an even nphi >= 8");
    if (fd_order == 0) fd_order = 2;
  } else {
    if (n < 2 || n > 8) throw ConfigError("axisym grids allow 2 <= n <= 8");
    if (nphi > 1) throw ConfigError("axisym grids carry a single longitude");
    nphi = 1;
    if (fd_order == 0) fd_order = 4;
  }
  if (ntheta < 8) throw ConfigError("ntheta must be at least 8");
  if (fd_order != 2 && fd_order != 4) throw ConfigError("fd_order must be 2 or 4");
  g.n_ = n;
  g.ntheta_ = ntheta;
  g.nphi_ = nphi;
  g.fd_order_ = fd_order;
  g.h_theta_ = kPi / ntheta;
  g.h_phi_ = 2.0 * kPi / nphi;
  g.theta_.resize(ntheta);
  for (int i = 0; i < ntheta; ++i) g.theta_[i] = (i + 0.5) * g.h_theta_;
  g.phi_.resize(nphi);
  for (int j = 0; j < nphi; ++j) g.phi_[j] = j * g.h_phi_;

  const std::vector<double> wt = g.theta_weights(kPi);
  const double fiber = (mode == GridMode::full2d) ? g.h_phi_ : unit_sphere_area(n - 1);
  g.weights_.resize(g.size());
  for (int i = 0; i < ntheta; ++i)
    for (int j = 0; j < nphi; ++j) g.weights_[g.index(i, j)] = wt[i] * fiber;
  return g;
}

// Weights w_i with sum_i w_i F(theta_i) = int_0^end F sin^{n-1} dtheta for
// every F in span{cos(m theta) : m < ntheta}.
std::vector<double> SphereGrid::theta_weights(double theta_end) const {
  const int N = ntheta_;
  const int p = n_ - 1;
  const auto [x, w] = gauss_legendre(3 * N + 64, 0.0, theta_end);
  std::vector<double> moments(N, 0.0);
  for (std::size_t q = 0; q < x.size(); ++q) {
    const double base = w[q] * std::pow(std::sin(x[q]), p);
    // cos(m x) by the Chebyshev recurrence
    double c0 = 1.0, c1 = std::cos(x[q]);
    const double two_c = 2.0 * c1;
    moments[0] += base;
    for (int m = 1; m < N; ++m) {
      moments[m] += base * c1;
      const double c2 = two_c * c1 - c0;
      c0 = c1;
      c1 = c2;
    }
  }
  std::vector<double> out(N);
  for (int i = 0; i < N; ++i) {
    double acc = 0.5 * moments[0];
    for (int m = 1; m < N; ++m) acc += moments[m] * std::cos(m * theta_[i]);
    out[i] = 2.0 * acc / N;
  }
  return out;
}

std::vector<double> SphereGrid::cap_weights(double theta0) const {
  if (mode_ != GridMode::axisym) throw ConfigError("caps are supported on axisym grids only");
  if (!(theta0 > 0.0 && theta0 <= kPi)) throw DomainError("cap angle must lie in (0, pi]");
  std::vector<double> w = theta_weights(theta0);
  const double fiber = unit_sphere_area(n_ - 1);
  for (double& x : w) x *= fiber;
  return w;
}

double SphereGrid::interpolate_theta(std::span<const double> f, double theta) const {
  if (mode_ != GridMode::axisym) throw ConfigError("interpolate_theta is axisym-only");
  const int N = ntheta_;
  double value = 0.0;
  for (int m = 0; m < N; ++m) {
    double a = 0.0;
    for (int i = 0; i < N; ++i) a += f[i] * std::cos(m * theta_[i]);
    a *= 2.0 / N;
    value += (m == 0 ? 0.5 : 1.0) * a * std::cos(m * theta);
  }
  return value;
}

double SphereGrid::min_spacing() const noexcept {
  if (mode_ == GridMode::axisym) return h_theta_;
  return std::min(h_theta_, std::sin(theta_[0]) * h_phi_);
}

double SphereGrid::ghost(std::span<const double> f, int i, int j, double sign) const {
  // Scalar fields are even across the poles; the far side sits at phi + pi.
  if (i < 0) {
    i = -1 - i;
    j = (j + nphi_ / 2) % nphi_;
  } else if (i >= ntheta_) {
    i = 2 * ntheta_ - 1 - i;
    j = (j + nphi_ / 2) % nphi_;
  } else {
    return f[index(i, j)];
  }
  return sign * f[index(i, j)];
}

// Stencils are applied in difference form (odd part for first derivatives,
// deviation from the centre for second ones) so constants map to exact zeros.
Field SphereGrid::d_theta(std::span<const double> f, Parity parity) const {
  const double sign = parity == Parity::even ? 1.0 : -1.0;
  const auto [s, denom] = stencil(fd_order_, 1);
  const int w = static_cast<int>(s.size()) / 2;
  Field out(size());
  for (int i = 0; i < ntheta_; ++i) {
    for (int j = 0; j < nphi_; ++j) {
      double acc = 0.0;
      for (int k = 1; k <= w; ++k) acc += s[w + k] * (ghost(f, i + k, j, sign) - ghost(f, i - k, j, sign));
      out[index(i, j)] = acc / (denom * h_theta_);
    }
  }
  return out;
}

Field SphereGrid::d_theta2(std::span<const double> f) const {
  const auto [s, denom] = stencil(fd_order_, 2);
  const int w = static_cast<int>(s.size()) / 2;
  const double h2 = h_theta_ * h_theta_;
  Field out(size());
  for (int i = 0; i < ntheta_; ++i) {
    for (int j = 0; j < nphi_; ++j) {
      const double c = f[index(i, j)];
      double acc = 0.0;
      for (int k = 1; k <= w; ++k) {
        acc += s[w + k] * ((ghost(f, i + k, j) - c) + (ghost(f, i - k, j) - c));
      }
      out[index(i, j)] = acc / (denom * h2);
    }
  }
  return out;
}

Field SphereGrid::d_phi(std::span<const double> f) const {
  Field out(size(), 0.0);
  if (mode_ == GridMode::axisym) return out;
  const auto [s, denom] = stencil(fd_order_, 1);
  const int w = static_cast<int>(s.size()) / 2;
  for (int i = 0; i < ntheta_; ++i) {
    for (int j = 0; j < nphi_; ++j) {
      double acc = 0.0;
      for (int k = 1; k <= w; ++k) {
        acc += s[w + k] * (f[index(i, (j + k) % nphi_)] - f[index(i, (j - k + nphi_) % nphi_)]);
      }
      out[index(i, j)] = acc / (denom * h_phi_);
    }
  }
  return out;
}

Field SphereGrid::d_phi2(std::span<const double> f) const {
  Field out(size(), 0.0);
  if (mode_ == GridMode::axisym) return out;
  const auto [s, denom] = stencil(fd_order_, 2);
  const int w = static_cast<int>(s.size()) / 2;
  const double h2 = h_phi_ * h_phi_;
  for (int i = 0; i < ntheta_; ++i) {
    for (int j = 0; j < nphi_; ++j) {
      const double c = f[index(i, j)];
      double acc = 0.0;
      for (int k = 1; k <= w; ++k) {
        acc += s[w + k] * ((f[index(i, (j + k) % nphi_)] - c) +
                           (f[index(i, (j - k + nphi_) % nphi_)] - c));
      }
      out[index(i, j)] = acc / (denom * h2);
    }
  }
  return out;
}

SphereGradient SphereGrid::gradient(std::span<const double> f) const {
  SphereGradient g;
  g.theta = d_theta(f);
  if (mode_ == GridMode::full2d) g.phi = d_phi(f);
  return g;
}

SphereHessian SphereGrid::hessian(std::span<const double> f) const {
  SphereHessian h;
  const Field ft = d_theta(f);
  h.tt = d_theta2(f);
  if (mode_ == GridMode::axisym) {
    h.fiber.resize(size());
    for (int i = 0; i < ntheta_; ++i) h.fiber[i] = ft[i] / std::tan(theta_[i]);
    return h;
  }
  const Field fp = d_phi(f);
  h.tp = d_theta(fp);
  h.pp = d_phi2(f);
  for (int i = 0; i < ntheta_; ++i) {
    const double s = std::sin(theta_[i]);
    const double c = std::cos(theta_[i]);
    for (int j = 0; j < nphi_; ++j) {
      const std::size_t k = index(i, j);
      // Gamma^phi_{theta phi} = cot, Gamma^theta_{phi phi} = -sin cos
      h.tp[k] -= (c / s) * fp[k];
      h.pp[k] += s * c * ft[k];
    }
  }
  return h;
}

Field SphereGrid::laplacian(std::span<const double> f) const {
  const SphereHessian h = hessian(f);
  Field out(size());
  if (mode_ == GridMode::axisym) {
    for (std::size_t k = 0; k < size(); ++k) out[k] = h.tt[k] + (n_ - 1) * h.fiber[k];
    return out;
  }
  for (int i = 0; i < ntheta_; ++i) {
    const double s2 = std::pow(std::sin(theta_[i]), 2);
    for (int j = 0; j < nphi_; ++j) {
      const std::size_t k = index(i, j);
      out[k] = h.tt[k] + h.pp[k] / s2;
    }
  }
  return out;
}

double SphereGrid::integrate(std::span<const double> f) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < size(); ++k) acc += f[k] * weights_[k];
  return acc;
}

double SphereGrid::integrate(std::span<const double> f, std::span<const double> density) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < size(); ++k) {
    if (!(density[k] > 0.0)) throw DataError("integrate: density must be positive");
    acc += f[k] * density[k] * weights_[k];
  }
  return acc;
}

}  // namespace hypflow
