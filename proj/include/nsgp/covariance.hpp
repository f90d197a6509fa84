#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <span>
#include <stdexcept>
#include <vector>

#include "nsgp/geometry.hpp"

namespace nsgp {

// Thrown when a matrix cannot be Cholesky-factorized within the jitter policy.
class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(const std::string& what, double min_eigenvalue_estimate)
      : std::runtime_error(what), min_eigenvalue(min_eigenvalue_estimate) {}
  double min_eigenvalue;
};

// Dense symmetric correlation matrix with unit diagonal, together with the
// Cholesky factor of (R + jitter * I).  `jitter` records the smallest value
// from the escalation ladder that made the factorization succeed (0 for a
// cleanly positive-definite matrix).
class CorrelationMatrix {
 public:
  CorrelationMatrix() = default;

  // Factorizes m + jitter*I, escalating jitter from jitter_start by factors
  // of 10 up to jitter_max.  Throws FactorizationError past the cap.
  static CorrelationMatrix factorize(Eigen::MatrixXd m,
                                     double jitter_start = 1e-12,
                                     double jitter_max = 1e-8);

  int n() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double jitter() const { return jitter_; }
  const Eigen::LLT<Eigen::MatrixXd>& llt() const { return llt_; }

  // log det(R + jitter*I) from the factor.
  double log_det() const;

 private:
  Eigen::MatrixXd m_;
  double jitter_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

// Correlation between sites s and t carrying Gaussian kernels with
// covariances sigma_s and sigma_t.  This is the kernel-overlap integral
// normalized to unit self-correlation:
//
//   rho(s, t) = 2 |Sigma_s|^{1/4} |Sigma_t|^{1/4} |Sigma_s + Sigma_t|^{-1/2}
//               * exp{ -1/2 (s-t)^T (Sigma_s + Sigma_t)^{-1} (s-t) }
//
// Symmetric in its arguments, equal to 1 at s = t, and in (0, 1] always.
double nonstationary_correlation(const Point& s, const Cov2x2& sigma_s,
                                 const Point& t, const Cov2x2& sigma_t);

// Stationary special case (both kernels equal):
// exp{-1/4 d^T inv(sigma) d}; for sigma = v*I this is exp(-||d||^2 / (4v)).
double stationary_correlation(const Eigen::Vector2d& d, const Cov2x2& sigma);

// Correlation of the focus fields: exp{-(dist / tau_psi)^2}.
double psi_field_correlation(double dist, double tau_psi);

// Reference evaluation of the kernel-overlap correlation by 2-D midpoint
// quadrature of the kernel product, normalized by the two self-integrals.
// The grid is a square of half-width grid_half_width centered at the
// midpoint of s and t with grid_n cells per axis.  Preconditions: the grid
// must reach at least 6 kernel standard deviations past both kernel centers
// and grid_n >= 200.  Slow by design; used to validate the closed form.
double quadrature_correlation(const Point& s, const Cov2x2& sigma_s,
                              const Point& t, const Cov2x2& sigma_t,
                              double grid_half_width, int grid_n);

// Smallest half-width accepted by quadrature_correlation for this input,
// plus a little padding.
double quadrature_grid_half_width(const Point& s, const Cov2x2& sigma_s,
                                  const Point& t, const Cov2x2& sigma_t);

// Pairwise nonstationary correlations between two site/kernel lists
// (rows index a, columns index b).  No positive-definiteness handling.
Eigen::MatrixXd correlation_cross_block(std::span<const Point> sites_a,
                                        std::span<const Cov2x2> kernels_a,
                                        std::span<const Point> sites_b,
                                        std::span<const Cov2x2> kernels_b);

// Assembles the n x n correlation matrix for sites with per-site kernels and
// factorizes it under the jitter policy (start 1e-12, escalate by 10, cap
// 1e-8).  Throws FactorizationError with a minimum-eigenvalue estimate if the
// cap is exceeded.
CorrelationMatrix build_correlation_matrix(std::span<const Point> sites,
                                           std::span<const Cov2x2> kernels);

// Same, with psi_field_correlation(||s_i - s_j||, tau_psi) entries.
CorrelationMatrix build_psi_correlation_matrix(std::span<const Point> sites,
                                               double tau_psi);

// Cross block of psi-field correlations (rows: sites_a, cols: sites_b).
Eigen::MatrixXd psi_correlation_cross_block(std::span<const Point> sites_a,
                                            std::span<const Point> sites_b,
                                            double tau_psi);

}  // namespace nsgp
