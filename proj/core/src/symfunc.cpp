#include "hypflow/symfunc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "hypflow/error.hpp"

namespace hypflow {
namespace {

constexpr int kMaxDim = 16;

// sigma_0..sigma_n by the standard product expansion.
void sigmas(std::span<const double> kappa, std::span<double> s) {
  const std::size_t n = kappa.size();
  std::fill(s.begin(), s.begin() + n + 1, 0.0);
  s[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = i + 1; l >= 1; --l) s[l] += kappa[i] * s[l - 1];
  }
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return std::round(b);
}

double elementary_symmetric(std::span<const double> kappa, int l) {
  const int n = static_cast<int>(kappa.size());
  if (l < 0) throw DomainError("elementary_symmetric: negative order");
  if (l == 0) return 1.0;
  if (l > n) return 0.0;
  std::array<double, kMaxDim + 1> s{};
  if (n > kMaxDim) throw DomainError("elementary_symmetric: dimension too large");
  sigmas(kappa, s);
  return s[l] / binomial(n, l);
}

void elementary_symmetric_all(std::span<const double> kappa, std::span<double> out) {
  const int n = static_cast<int>(kappa.size());
  if (n > kMaxDim) throw DomainError("elementary_symmetric_all: dimension too large");
  sigmas(kappa, out);
  for (int l = 1; l <= n; ++l) out[l] /= binomial(n, l);
}

double elementary_symmetric_partial(std::span<const double> kappa, int l, std::size_t i) {
  const int n = static_cast<int>(kappa.size());
  if (l <= 0 || l > n) return 0.0;
  std::array<double, kMaxDim> rest{};
  std::size_t m = 0;
  for (std::size_t j = 0; j < kappa.size(); ++j) {
    if (j != i) rest[m++] = kappa[j];
  }
  std::array<double, kMaxDim + 1> s{};
  sigmas(std::span<const double>(rest.data(), m), s);
  return s[l - 1] / binomial(n, l);
}

double WeingartenMatrix::self_adjoint_residual() const {
  const Eigen::MatrixXd ga = metric * entries;
  return (ga - ga.transpose()).cwiseAbs().maxCoeff();
}

std::vector<double> characteristic_sigmas(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<double> p(n + 1, 0.0);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= n; ++k) {
    power = power * a;
    p[k] = power.trace();
  }
  std::vector<double> s(n + 1, 0.0);
  s[0] = 1.0;
  for (int k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (int i = 1; i <= k; ++i) {
      acc += ((i % 2 == 1) ? 1.0 : -1.0) * s[k - i] * p[i];
    }
    s[k] = acc / k;
  }
  return s;
}

double elementary_symmetric(const Eigen::MatrixXd& a, int l) {
  const int n = static_cast<int>(a.rows());
  if (l < 0) throw DomainError("elementary_symmetric: negative order");
  if (l == 0) return 1.0;
  if (l > n) return 0.0;
  return characteristic_sigmas(a)[l] / binomial(n, l);
}

double elementary_symmetric_directional(const Eigen::MatrixXd& a,
                                        const Eigen::MatrixXd& b, int l) {
  const int n = static_cast<int>(a.rows());
  if (l <= 0 || l > n) return 0.0;
  const std::vector<double> s = characteristic_sigmas(a);
  // T_0 = I, T_j = sigma_j I - A T_{j-1}; d sigma_l [B] = tr(T_{l-1} B).
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(n, n);
  for (int j = 1; j <= l - 1; ++j) {
    t = s[j] * Eigen::MatrixXd::Identity(n, n) - a * t;
  }
  return (t * b).trace() / binomial(n, l);
}

double DerivativeContractions::max_residual() const {
  return std::max({std::abs(trace_g - expected_g), std::abs(trace_a - expected_a),
                   std::abs(trace_a2 - expected_a2)});
}

DerivativeContractions derivative_contractions(const WeingartenMatrix& w, int l,
                                               double step) {
  const int n = w.dim();
  if (l < 1 || l > n) throw DomainError("derivative_contractions: need 1 <= l <= n");
  const Eigen::MatrixXd ginv = w.metric.inverse();
  const Eigen::MatrixXd h = w.lowered();
  const Eigen::MatrixXd h2 = h * ginv * h;

  Eigen::MatrixXd grad(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Eigen::MatrixXd plus = h;
      Eigen::MatrixXd minus = h;
      plus(i, j) += step;
      minus(i, j) -= step;
      grad(i, j) = (elementary_symmetric(Eigen::MatrixXd(ginv * plus), l) -
                    elementary_symmetric(Eigen::MatrixXd(ginv * minus), l)) /
                   (2.0 * step);
    }
  }

  DerivativeContractions c;
  c.trace_g = grad.cwiseProduct(w.metric).sum();
  c.trace_a = grad.cwiseProduct(h).sum();
  c.trace_a2 = grad.cwiseProduct(h2).sum();
  const std::vector<double> s = characteristic_sigmas(w.entries);
  auto e = [&](int m) { return (m < 0 || m > n) ? 0.0 : s[m] / binomial(n, m); };
  c.expected_g = l * e(l - 1);
  c.expected_a = l * e(l);
  c.expected_a2 = n * e(1) * e(l) - (n - l) * e(l + 1);
  return c;
}

ConeLabel cone_classify(std::span<const double> kappa) {
  const int n = static_cast<int>(kappa.size());
  std::array<double, kMaxDim + 1> e{};
  elementary_symmetric_all(kappa, e);
  ConeLabel label;
  while (label.m_max < n && e[label.m_max + 1] > 0.0) ++label.m_max;
  double min_k = std::numeric_limits<double>::infinity();
  for (double k : kappa) min_k = std::min(min_k, k);
  label.margin = min_k - 1.0;
  label.h_convex = label.margin >= 0.0;
  return label;
}

double newton_maclaurin_margin(std::span<const double> kappa, int l, int m) {
  const int n = static_cast<int>(kappa.size());
  if (l < 1 || l > m || m > n) {
    throw PreconditionError("newton_maclaurin_margin: need 1 <= l <= m <= n");
  }
  if (cone_classify(kappa).m_max < m) {
    throw PreconditionError("newton_maclaurin_margin: kappa outside Gamma_m^+");
  }
  std::array<double, kMaxDim + 2> e{};
  elementary_symmetric_all(kappa, e);
  // e[n + 1] stays 0.
  return e[l] * e[m] - e[m + 1] * e[l - 1];
}

}  // namespace hypflow
