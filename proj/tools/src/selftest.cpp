#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "hypflow_cli/commands.hpp"

namespace hypflow::cli {

double fitted_order(const std::vector<double>& h, const std::vector<double>& err) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(std::max(err[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

namespace {

using GridPtr = std::shared_ptr<const SphereGrid>;

GridPtr axisym(int n, int ntheta, int fd) {
  return std::make_shared<const SphereGrid>(SphereGrid::build(GridMode::axisym, n, ntheta, 1, fd));
}

// int_{S^n} cos^{2m}(theta) = omega_{n-1} B(m + 1/2, n/2)
SuiteResult quadrature_suite() {
  double worst = 0.0;
  for (int n = 2; n <= 5; ++n) {
    const auto grid = axisym(n, 32, 0);
    for (int m = 0; m <= 6; ++m) {
      Field f(grid->size());
      for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(std::cos(grid->theta_of(i)), 2 * m);
      const double beta = std::exp(std::lgamma(m + 0.5) + std::lgamma(0.5 * n) -
                                   std::lgamma(m + 0.5 + 0.5 * n));
      const double exact = unit_sphere_area(n - 1) * beta;
      worst = std::max(worst, std::abs(grid->integrate(f) - exact) / exact);
    }
  }
  return SuiteResult::at_most("quadrature_beta_moments", worst, 1e-12,
                              "n = 2..5, cos^{2m}, m = 0..6, 32 nodes");
}

// f = exp(cos theta) against its closed-form first and second derivatives.
SuiteResult derivative_order_suite(int fd) {
  std::vector<double> hs, errs;
  for (int N : {32, 64, 128}) {
    const auto grid = axisym(2, N, fd);
    Field f(grid->size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::exp(std::cos(grid->theta_of(i)));
    const Field d1 = grid->d_theta(f);
    const Field d2 = grid->d_theta2(f);
    double err = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double t = grid->theta_of(i);
      err = std::max(err, std::abs(d1[i] + std::sin(t) * f[i]));
      err = std::max(err, std::abs(d2[i] - (std::sin(t) * std::sin(t) - std::cos(t)) * f[i]));
    }
    hs.push_back(grid->h_theta());
    errs.push_back(err);
  }
  return SuiteResult::at_least("fd" + std::to_string(fd) + "_derivative_order",
                               fitted_order(hs, errs), fd - 0.3, "32/64/128 nodes");
}

std::vector<SuiteResult> hessian_suites(int fd) {
  const std::string tag = "fd" + std::to_string(fd);
  const double sphere = hessian_identity_residual(make_sphere(axisym(3, 64, fd), 1.3)).max_residual;
  std::vector<double> hs, errs, contr;
  for (int N : {50, 100, 200}) {
    const auto grid = axisym(3, N, fd);
    const auto h = hessian_identity_residual(make_perturbed_sphere(grid, 1.0, 0.1, 2));
    hs.push_back(grid->h_theta());
    errs.push_back(h.max_residual);
    contr.push_back(*std::max_element(h.max_contraction.begin(), h.max_contraction.end()));
  }
  return {SuiteResult::at_most(tag + "_hessian_sphere", sphere, 1e-12, "n = 3, R = 1.3"),
          SuiteResult::at_least(tag + "_hessian_order", fitted_order(hs, errs), fd - 0.3,
                                "n = 3, l = 2, 50/100/200 nodes"),
          SuiteResult::at_least(tag + "_contraction_order", fitted_order(hs, contr), fd - 0.3,
                                "n = 3, l = 2, 50/100/200 nodes")};
}

SuiteResult minkowski_suite(int fd) {
  std::vector<double> hs, errs;
  for (int N : {100, 200, 400}) {
    const auto grid = axisym(3, N, fd);
    const RadialSurface s = make_perturbed_sphere(grid, 1.0, 0.2, 2);
    const GeometryFields geo = geometry(s);
    double worst = 0.0;
    for (int l = 1; l <= 3; ++l) worst = std::max(worst, std::abs(minkowski_residual(s, geo, l)));
    hs.push_back(grid->h_theta());
    errs.push_back(worst);
  }
  return SuiteResult::at_least("fd" + std::to_string(fd) + "_minkowski_order",
                               fitted_order(hs, errs), fd - 0.3, "n = 3, l = 1..3, 100/200/400 nodes");
}

std::vector<SuiteResult> newton_maclaurin_suites(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = std::numeric_limits<double>::infinity();
  for (int n = 2; n <= 5; ++n) {
    std::vector<double> kappa(n);
    for (int trial = 0; trial < 2000; ++trial) {
      for (double& k : kappa) k = 1.0 - unit(rng);  // (0, 1]
      for (int m = 1; m <= n; ++m)
        for (int l = 1; l <= m; ++l) worst = std::min(worst, newton_maclaurin_margin(kappa, l, m));
    }
  }
  double iso = 0.0;
  for (int n = 2; n <= 5; ++n) {
    const std::vector<double> kappa(n, 0.7);
    // E_{n+1} = 0, so m = n never attains equality.
    for (int m = 1; m <= n - 1; ++m)
      for (int l = 1; l <= m; ++l) iso = std::max(iso, std::abs(newton_maclaurin_margin(kappa, l, m)));
  }
  return {SuiteResult::at_least("newton_maclaurin_random", worst, -1e-14, "2000 samples per n = 2..5"),
          SuiteResult::at_most("newton_maclaurin_isotropic", iso, 1e-15, "kappa = 0.7")};
}

// A = L^{-T} Q D Q^T L^T is self-adjoint for g = L L^T; D >= 1 keeps it h-convex.
SuiteResult contraction_suite(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::MatrixXd l = Eigen::MatrixXd::Identity(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) l(i, j) = 0.3 * normal(rng);
      for (int i = 0; i < n; ++i) l(i, i) = 0.5 + unit(rng);
      Eigen::MatrixXd x(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) x(i, j) = normal(rng);
      const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(x).householderQ();
      Eigen::VectorXd d(n);
      for (int i = 0; i < n; ++i) d(i) = 1.0 + 2.0 * unit(rng);
      WeingartenMatrix w;
      w.metric = l * l.transpose();
      w.entries = l.transpose().inverse() * q * d.asDiagonal() * q.transpose() * l.transpose();
      for (int k = 1; k <= n; ++k) worst = std::max(worst, derivative_contractions(w, k).max_residual());
    }
  }
  return SuiteResult::at_most("derivative_contractions", worst, 1e-8, "50 matrices per n = 2..4");
}

std::vector<SuiteResult> evolution_suites() {
  const RadialSurface s = make_perturbed_sphere(axisym(2, 64, 0), 1.5, 0.05, 2);
  const EvolutionResiduals r = evolution_identity_suite(make_state(s));
  return {SuiteResult::at_most("evolution_area_rate", r.area_residual, 1e-5, "relative to int n E_1 |F|"),
          SuiteResult::at_most("evolution_w1_rate", r.w1_residual, 1e-5, "relative to int E_1 |F|")};
}

}  // namespace

ReportDocument cmd_selftest(const RunConfig& config) {
  ReportDocument doc;
  doc.command = "selftest";
  doc.config = config.source;
  doc.resolved = config.resolved();
  doc.seed = config.seed;
  std::mt19937_64 rng(config.seed);

  auto add = [&](std::vector<SuiteResult> suites) {
    for (auto& s : suites) doc.suites.push_back(std::move(s));
  };
  doc.suites.push_back(quadrature_suite());
  for (int fd : {2, 4}) {
    doc.suites.push_back(derivative_order_suite(fd));
    add(hessian_suites(fd));
    doc.suites.push_back(minkowski_suite(fd));
  }
  add(newton_maclaurin_suites(rng));
  doc.suites.push_back(contraction_suite(rng));
  add(evolution_suites());
  doc.finalize();
  return doc;
}

}  // namespace hypflow::cli
