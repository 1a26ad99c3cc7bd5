#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hypflow {

// Normalized elementary symmetric functions E_l = sigma_l / binom(n, l).
//
// E_0 = 1 and E_l = 0 for l > n. All routines here are pure.

double binomial(int n, int k);

// E_l of a curvature vector.
double elementary_symmetric(std::span<const double> kappa, int l);

// Fills out[0..n] with E_0..E_n. `out` must hold kappa.size() + 1 entries.
void elementary_symmetric_all(std::span<const double> kappa, std::span<double> out);

// dE_l / dkappa_i = sigma_{l-1}(kappa without i) / binom(n, l).
double elementary_symmetric_partial(std::span<const double> kappa, int l, std::size_t i);

// A Weingarten map h^i_j together with the induced metric g_ij it is
// self-adjoint for.
struct WeingartenMatrix {
  Eigen::MatrixXd entries;
  Eigen::MatrixXd metric;

  int dim() const { return static_cast<int>(entries.rows()); }
  // ||gA - (gA)^T||_max; zero for a g-self-adjoint map.
  double self_adjoint_residual() const;
  // Lowered second fundamental form h_ij = g_ik A^k_j.
  Eigen::MatrixXd lowered() const { return metric * entries; }
};

// Unnormalized characteristic-polynomial coefficients sigma_0..sigma_n of a
// square matrix, from power traces through Newton's identities.
std::vector<double> characteristic_sigmas(const Eigen::MatrixXd& a);

double elementary_symmetric(const Eigen::MatrixXd& a, int l);
inline double elementary_symmetric(const WeingartenMatrix& w, int l) {
  return elementary_symmetric(w.entries, l);
}

// d/de E_l(A + e B) at e = 0, through the Newton tensor
// T_{l-1}(A) = sum_j (-1)^j sigma_{l-1-j} A^j.
double elementary_symmetric_directional(const Eigen::MatrixXd& a,
                                        const Eigen::MatrixXd& b, int l);

// Contractions of dE_l/dh_ij (finite differences in the lowered entries)
// with g_ij, h_ij and (h g^{-1} h)_ij, next to their closed forms
// l E_{l-1}, l E_l and n E_1 E_l - (n - l) E_{l+1}.
struct DerivativeContractions {
  double trace_g = 0.0;
  double trace_a = 0.0;
  double trace_a2 = 0.0;
  double expected_g = 0.0;
  double expected_a = 0.0;
  double expected_a2 = 0.0;

  double max_residual() const;
};

DerivativeContractions derivative_contractions(const WeingartenMatrix& w, int l,
                                               double step = 1e-3);

// E_l E_m - E_{m+1} E_{l-1}. Throws PreconditionError unless 1 <= l <= m <= n
// and kappa lies in the Garding cone Gamma_m^+.
double newton_maclaurin_margin(std::span<const double> kappa, int l, int m);

struct ConeLabel {
  int m_max = 0;          // largest m with E_1..E_m > 0
  bool h_convex = false;  // every kappa_i >= 1
  double margin = 0.0;    // min kappa_i - 1
};

ConeLabel cone_classify(std::span<const double> kappa);

}  // namespace hypflow
