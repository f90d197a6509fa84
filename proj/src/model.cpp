#include "nsgp/model.hpp"

#include <cmath>
#include <stdexcept>

namespace nsgp {

void Dataset::validate() const {
  if (sites.empty()) throw std::domain_error("Dataset: need at least one site");
  if (values.size() != static_cast<Eigen::Index>(sites.size()))
    throw std::domain_error("Dataset: sites/values length mismatch");
  if (!values.allFinite())
    throw std::domain_error("Dataset: non-finite observation value");
  for (const auto& s : sites)
    if (!s.allFinite()) throw std::domain_error("Dataset: non-finite site");
}

double GammaPrior::log_pdf(double x) const {
  if (!(x > 0.0)) return kNegInf;
  return shape * std::log(rate) - std::lgamma(shape) +
         (shape - 1.0) * std::log(x) - rate * x;
}

void HyperPriors::validate() const {
  if (!(lambda_y_prior.shape > 0.0) || !(lambda_y_prior.rate > 0.0) ||
      !(lambda_z_prior.shape > 0.0) || !(lambda_z_prior.rate > 0.0))
    throw std::domain_error("HyperPriors: Gamma shapes/rates must be > 0");
  if (!(tau_z_bounds.lo > 0.0) || !(tau_z_bounds.lo < tau_z_bounds.hi) ||
      !(tau_psi_bounds.lo > 0.0) || !(tau_psi_bounds.lo < tau_psi_bounds.hi))
    throw std::domain_error("HyperPriors: need 0 < lo < hi for tau bounds");
  if (!(area > 0.0)) throw std::domain_error("HyperPriors: area must be > 0");
}

std::vector<Cov2x2> state_kernels(const ModelState& state, double area) {
  std::vector<Cov2x2> kernels(state.n_sites());
  for (int i = 0; i < state.n_sites(); ++i)
    kernels[i] = foci_to_covariance({state.psi_x[i], state.psi_y[i]},
                                    state.tau_z, area);
  return kernels;
}

double marginal_loglik(const Dataset& data, const ModelState& state,
                       const Eigen::MatrixXd& r_z) {
  data.validate();
  const int n = data.n();
  if (state.n_sites() != n || state.psi_y.size() != n)
    throw std::domain_error("marginal_loglik: state psi fields must match dataset size");
  if (!(state.lambda_y > 0.0) || !(state.lambda_z > 0.0))
    throw std::domain_error("marginal_loglik: precisions must be > 0");

  Eigen::MatrixXd v = r_z / state.lambda_z;
  v.diagonal().array() += 1.0 / state.lambda_y;

  Eigen::LLT<Eigen::MatrixXd> llt(v);
  if (llt.info() != Eigen::Success)
    throw FactorizationError("marginal_loglik: V not factorizable", 0.0);

  const Eigen::VectorXd centered =
      data.values.array() - state.mu;
  const Eigen::VectorXd alpha = llt.matrixL().solve(centered);
  const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return -0.5 * (n * std::log(2.0 * M_PI) + log_det + alpha.squaredNorm());
}

double marginal_loglik(const Dataset& data, const ModelState& state,
                       double area) {
  const CorrelationMatrix r_z =
      build_correlation_matrix(data.sites, state_kernels(state, area));
  return marginal_loglik(data, state, r_z.matrix());
}

namespace {

// log N(psi; 0, R) via the stored factor of (R + jitter I).
double psi_gp_log_pdf(const Eigen::VectorXd& psi,
                      const CorrelationMatrix& corr) {
  const Eigen::VectorXd alpha = corr.llt().matrixL().solve(psi);
  return -0.5 * (psi.size() * std::log(2.0 * M_PI) + corr.log_det() +
                 alpha.squaredNorm());
}

}  // namespace

double log_prior(const ModelState& state, const HyperPriors& priors,
                 const CorrelationMatrix& psi_corr) {
  priors.validate();
  if (!priors.tau_z_bounds.contains(state.tau_z)) return kNegInf;
  if (!priors.tau_psi_bounds.contains(state.tau_psi)) return kNegInf;
  if (!(state.lambda_y > 0.0) || !(state.lambda_z > 0.0)) return kNegInf;
  if (psi_corr.n() != state.n_sites())
    throw std::domain_error("log_prior: psi_corr size must match state");

  double lp = priors.lambda_y_prior.log_pdf(state.lambda_y) +
              priors.lambda_z_prior.log_pdf(state.lambda_z);
  // mu is flat; the tau indicators contribute 0 inside their intervals.
  lp += psi_gp_log_pdf(state.psi_x, psi_corr);
  lp += psi_gp_log_pdf(state.psi_y, psi_corr);
  return lp;
}

double log_posterior(const Dataset& data, const ModelState& state,
                     const HyperPriors& priors) {
  if (!priors.tau_z_bounds.contains(state.tau_z) ||
      !priors.tau_psi_bounds.contains(state.tau_psi) ||
      !(state.lambda_y > 0.0) || !(state.lambda_z > 0.0))
    return kNegInf;

  const CorrelationMatrix psi_corr =
      build_psi_correlation_matrix(data.sites, state.tau_psi);
  const double lp = log_prior(state, priors, psi_corr);
  if (lp == kNegInf) return kNegInf;
  return lp + marginal_loglik(data, state, priors.area);
}

}  // namespace nsgp
