#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "nsgp/covariance.hpp"
#include "nsgp/geometry.hpp"

namespace nsgp {

// Observation locations and log-concentration values.  Duplicate sites are
// allowed; the correlation-matrix jitter policy absorbs them.
struct Dataset {
  std::vector<Point> sites;
  Eigen::VectorXd values;

  int n() const { return static_cast<int>(sites.size()); }
  void validate() const;
};

// Gamma distribution parameterized by shape and rate (mean = shape / rate).
struct GammaPrior {
  double shape = 0.1;
  double rate = 0.1;

  double mean() const { return shape / rate; }
  double log_pdf(double x) const;
};

struct Interval {
  double lo = 3.0;
  double hi = 200.0;

  bool contains(double x) const { return x > lo && x < hi; }
};

// Hyperparameters of the hierarchical model: diffuse-but-proper Gamma priors
// for the precisions, uniform interval priors for the range parameters, and
// the fixed kernel ellipse area.
struct HyperPriors {
  GammaPrior lambda_y_prior{0.1, 0.1};
  GammaPrior lambda_z_prior{0.1, 0.1};
  Interval tau_z_bounds{3.0, 200.0};
  Interval tau_psi_bounds{3.0, 200.0};
  double area = 3.5;

  void validate() const;
};

// All non-integrated parameters: overall mean, error precision, spatial
// precision, kernel scale, focus-field range, and the focus fields at the
// data sites.  The latent surface z and the errors are integrated out of the
// likelihood and never appear here.
struct ModelState {
  double mu = 0.0;
  double lambda_y = 1.0;  // measurement error precision
  double lambda_z = 1.0;  // spatial precision
  double tau_z = 100.0;
  double tau_psi = 100.0;
  Eigen::VectorXd psi_x;
  Eigen::VectorXd psi_y;

  int n_sites() const { return static_cast<int>(psi_x.size()); }
};

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Per-site kernel covariances implied by a state.
std::vector<Cov2x2> state_kernels(const ModelState& state, double area);

// Log density of y under N(mu * 1, V) with V = R_z / lambda_z + I / lambda_y,
// evaluated through the Cholesky factor of V.  The r_z argument must be the
// correlation matrix built from the state's kernels; the two-argument form
// builds it on the fly.
double marginal_loglik(const Dataset& data, const ModelState& state,
                       const Eigen::MatrixXd& r_z);
double marginal_loglik(const Dataset& data, const ModelState& state,
                       double area);

// Log prior: Gamma terms for the precisions, flat mu, uniform-interval
// indicators for the taus (0 inside, -inf outside), and two zero-mean
// multivariate normal terms N(0, R_psi(tau_psi)) for the focus fields.  The
// R_psi normalizing constant is included, as required for tau_psi moves.
// psi_corr must be built for the state's tau_psi.
double log_prior(const ModelState& state, const HyperPriors& priors,
                 const CorrelationMatrix& psi_corr);

// marginal_loglik + log_prior; -inf short-circuits without touching the
// likelihood.  Builds both correlation matrices fresh.
double log_posterior(const Dataset& data, const ModelState& state,
                     const HyperPriors& priors);

}  // namespace nsgp
