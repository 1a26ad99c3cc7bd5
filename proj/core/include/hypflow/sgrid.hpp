#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hypflow {

// One real value per grid node, node index = i_theta * nphi + j_phi.
using Field = std::vector<double>;

enum class GridMode { full2d, axisym };

// Behaviour of a field under reflection through a pole. Scalars are even;
// mixed coordinate components such as g_{theta phi} are odd.
enum class Parity { even, odd };

std::string to_string(GridMode mode);
GridMode grid_mode_from_string(const std::string& name);

// Coordinate derivatives of a scalar field. `phi` is empty in axisym mode.
struct SphereGradient {
  Field theta;
  Field phi;
};

// Covariant Hessian on (S^n, sigma).
//
// full2d: coordinate components (theta,theta), (theta,phi), (phi,phi).
// axisym: `tt` is d^2/dtheta^2 and `fiber` the common eigenvalue
// cot(theta) d/dtheta on the n-1 azimuthal directions; `tp`, `pp` are empty.
struct SphereHessian {
  Field tt;
  Field tp;
  Field pp;
  Field fiber;
};

// Uniform-in-theta midpoint nodes (strictly inside (0, pi)) times uniform
// longitudes in full2d mode. Quadrature weights integrate exactly every
// polynomial of degree < ntheta in cos(theta) against the round measure, so
// smooth fields integrate spectrally. Stencils are centered finite differences
// of order 2 or 4 with reflected ghost values across the poles.
class SphereGrid {
 public:
  static SphereGrid build(GridMode mode, int n, int ntheta, int nphi = 0, int fd_order = 0);

  GridMode mode() const noexcept { return mode_; }
  int dim() const noexcept { return n_; }
  int ntheta() const noexcept { return ntheta_; }
  int nphi() const noexcept { return nphi_; }
  int fd_order() const noexcept { return fd_order_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(ntheta_) * nphi_; }
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * nphi_ + j;
  }

  double h_theta() const noexcept { return h_theta_; }
  double h_phi() const noexcept { return h_phi_; }
  double theta(int i) const noexcept { return theta_[i]; }
  double phi(int j) const noexcept { return phi_[j]; }
  double theta_of(std::size_t node) const noexcept { return theta_[node / nphi_]; }
  double phi_of(std::size_t node) const noexcept { return phi_[node % nphi_]; }
  std::span<const double> thetas() const noexcept { return theta_; }
  std::span<const double> weights() const noexcept { return weights_; }
  // Smallest geodesic distance between neighbouring nodes on the unit sphere.
  double min_spacing() const noexcept;

  Field d_theta(std::span<const double> f, Parity parity = Parity::even) const;
  Field d_theta2(std::span<const double> f) const;
  Field d_phi(std::span<const double> f) const;
  Field d_phi2(std::span<const double> f) const;

  SphereGradient gradient(std::span<const double> f) const;
  SphereHessian hessian(std::span<const double> f) const;
  Field laplacian(std::span<const double> f) const;

  // sum_nodes f * density * weight. Throws DataError on nonpositive density.
  double integrate(std::span<const double> f) const;
  double integrate(std::span<const double> f, std::span<const double> density) const;

  // Weights for the polar cap theta <= theta0 (axisym only), built on the same
  // nodes by integrating the cosine interpolant of the integrand over the cap.
  std::vector<double> cap_weights(double theta0) const;

  // Evaluate the cosine interpolant of an axisymmetric field at theta.
  double interpolate_theta(std::span<const double> f, double theta) const;

  // Map a field by a callable of (theta, phi).
  template <class Fn>
  Field sample(Fn&& fn) const {
    Field out(size());
    for (int i = 0; i < ntheta_; ++i)
      for (int j = 0; j < nphi_; ++j) out[index(i, j)] = fn(theta_[i], phi_[j]);
    return out;
  }

 private:
  SphereGrid() = default;
  double ghost(std::span<const double> f, int i, int j, double sign = 1.0) const;
  std::vector<double> theta_weights(double theta_end) const;

  GridMode mode_ = GridMode::axisym;
  int n_ = 2;
  int ntheta_ = 0;
  int nphi_ = 1;
  int fd_order_ = 4;
  double h_theta_ = 0.0;
  double h_phi_ = 0.0;
  std::vector<double> theta_;
  std::vector<double> phi_;
  std::vector<double> weights_;
};

// Gauss-Legendre nodes and weights on [a, b].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int m, double a, double b);

}  // namespace hypflow
