#include "nsgp/covariance.hpp"

#include <cmath>
#include <sstream>

namespace nsgp {

CorrelationMatrix CorrelationMatrix::factorize(Eigen::MatrixXd m,
                                               double jitter_start,
                                               double jitter_max) {
  CorrelationMatrix out;
  out.m_ = std::move(m);
  const auto n = out.m_.rows();

  double jitter = 0.0;
  while (true) {
    Eigen::MatrixXd work = out.m_;
    if (jitter > 0.0) work.diagonal().array() += jitter;
    out.llt_.compute(work);
    if (out.llt_.info() == Eigen::Success) {
      out.jitter_ = jitter;
      return out;
    }
    if (jitter >= jitter_max) break;
    jitter = (jitter == 0.0) ? jitter_start : jitter * 10.0;
    if (jitter > jitter_max) jitter = jitter_max;
  }

  const double min_eig =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
          out.m_, Eigen::EigenvaluesOnly)
          .eigenvalues()
          .minCoeff();
  std::ostringstream msg;
  msg << "correlation matrix of order " << n
      << " not factorizable with jitter <= " << jitter_max
      << " (min eigenvalue ~ " << min_eig << ")";
  throw FactorizationError(msg.str(), min_eig);
}

double CorrelationMatrix::log_det() const {
  return 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
}

double nonstationary_correlation(const Point& s, const Cov2x2& sigma_s,
                                 const Point& t, const Cov2x2& sigma_t) {
  if (!sigma_s.positive_definite() || !sigma_t.positive_definite())
    throw std::domain_error(
        "nonstationary_correlation: kernel covariance not positive definite");

  const Cov2x2 sum = sigma_s + sigma_t;
  const Eigen::Vector2d d = s - t;
  const double prefactor =
      2.0 *
      std::sqrt(std::sqrt(sigma_s.det()) * std::sqrt(sigma_t.det()) / sum.det());
  return prefactor * std::exp(-0.5 * sum.inv_quad_form(d));
}

double stationary_correlation(const Eigen::Vector2d& d, const Cov2x2& sigma) {
  if (!sigma.positive_definite())
    throw std::domain_error(
        "stationary_correlation: kernel covariance not positive definite");
  return std::exp(-0.25 * sigma.inv_quad_form(d));
}

double psi_field_correlation(double dist, double tau_psi) {
  if (!(tau_psi > 0.0))
    throw std::domain_error("psi_field_correlation: tau_psi must be > 0");
  const double u = dist / tau_psi;
  return std::exp(-u * u);
}

namespace {

// Normalized bivariate Gaussian density centered at c.
double gauss2(const Point& u, const Point& c, const Cov2x2& sigma,
              double inv_two_pi_sqrt_det) {
  return inv_two_pi_sqrt_det * std::exp(-0.5 * sigma.inv_quad_form(u - c));
}

double max_sd(const Cov2x2& sigma) {
  const double tr = sigma.trace();
  const double gap = std::hypot(sigma.xx - sigma.yy, 2.0 * sigma.xy);
  return std::sqrt(0.5 * (tr + gap));
}

}  // namespace

double quadrature_grid_half_width(const Point& s, const Cov2x2& sigma_s,
                                  const Point& t, const Cov2x2& sigma_t) {
  const Point mid = 0.5 * (s + t);
  const double reach_s = (s - mid).norm() + 6.0 * max_sd(sigma_s);
  const double reach_t = (t - mid).norm() + 6.0 * max_sd(sigma_t);
  return 1.05 * std::max(reach_s, reach_t);
}

double quadrature_correlation(const Point& s, const Cov2x2& sigma_s,
                              const Point& t, const Cov2x2& sigma_t,
                              double grid_half_width, int grid_n) {
  if (!sigma_s.positive_definite() || !sigma_t.positive_definite())
    throw std::domain_error(
        "quadrature_correlation: kernel covariance not positive definite");
  if (grid_n < 200)
    throw std::domain_error("quadrature_correlation: grid_n must be >= 200");

  const Point mid = 0.5 * (s + t);
  const double need_s = (s - mid).norm() + 6.0 * max_sd(sigma_s);
  const double need_t = (t - mid).norm() + 6.0 * max_sd(sigma_t);
  if (grid_half_width < std::max(need_s, need_t))
    throw std::domain_error(
        "quadrature_correlation: grid does not cover 6 standard deviations of "
        "both kernels");

  const double ks_norm = 1.0 / (2.0 * M_PI * std::sqrt(sigma_s.det()));
  const double kt_norm = 1.0 / (2.0 * M_PI * std::sqrt(sigma_t.det()));

  // Midpoint rule; for smooth rapidly decaying integrands this converges far
  // faster than its nominal order once the tails are inside the grid.
  const double h = 2.0 * grid_half_width / grid_n;
  double cross = 0.0, self_s = 0.0, self_t = 0.0;
  for (int i = 0; i < grid_n; ++i) {
    const double x = mid[0] - grid_half_width + (i + 0.5) * h;
    for (int j = 0; j < grid_n; ++j) {
      const double y = mid[1] - grid_half_width + (j + 0.5) * h;
      const Point u(x, y);
      const double ks = gauss2(u, s, sigma_s, ks_norm);
      const double kt = gauss2(u, t, sigma_t, kt_norm);
      cross += ks * kt;
      self_s += ks * ks;
      self_t += kt * kt;
    }
  }
  return cross / std::sqrt(self_s * self_t);
}

Eigen::MatrixXd correlation_cross_block(std::span<const Point> sites_a,
                                        std::span<const Cov2x2> kernels_a,
                                        std::span<const Point> sites_b,
                                        std::span<const Cov2x2> kernels_b) {
  if (sites_a.size() != kernels_a.size() || sites_b.size() != kernels_b.size())
    throw std::domain_error("correlation_cross_block: sites/kernels length mismatch");
  Eigen::MatrixXd block(sites_a.size(), sites_b.size());
  for (std::size_t i = 0; i < sites_a.size(); ++i)
    for (std::size_t j = 0; j < sites_b.size(); ++j)
      block(i, j) = nonstationary_correlation(sites_a[i], kernels_a[i],
                                              sites_b[j], kernels_b[j]);
  return block;
}

CorrelationMatrix build_correlation_matrix(std::span<const Point> sites,
                                           std::span<const Cov2x2> kernels) {
  const auto n = sites.size();
  if (n == 0 || kernels.size() != n)
    throw std::domain_error("build_correlation_matrix: need equal-length, nonempty inputs");

  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) {
      const double r =
          nonstationary_correlation(sites[i], kernels[i], sites[j], kernels[j]);
      m(i, j) = r;
      m(j, i) = r;
    }
  }
  return CorrelationMatrix::factorize(std::move(m));
}

CorrelationMatrix build_psi_correlation_matrix(std::span<const Point> sites,
                                               double tau_psi) {
  const auto n = sites.size();
  if (n == 0)
    throw std::domain_error("build_psi_correlation_matrix: need at least one site");

  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) {
      const double r =
          psi_field_correlation((sites[i] - sites[j]).norm(), tau_psi);
      m(i, j) = r;
      m(j, i) = r;
    }
  }
  return CorrelationMatrix::factorize(std::move(m));
}

Eigen::MatrixXd psi_correlation_cross_block(std::span<const Point> sites_a,
                                            std::span<const Point> sites_b,
                                            double tau_psi) {
  Eigen::MatrixXd block(sites_a.size(), sites_b.size());
  for (std::size_t i = 0; i < sites_a.size(); ++i)
    for (std::size_t j = 0; j < sites_b.size(); ++j)
      block(i, j) = psi_field_correlation((sites_a[i] - sites_b[j]).norm(),
                                          tau_psi);
  return block;
}

}  // namespace nsgp
