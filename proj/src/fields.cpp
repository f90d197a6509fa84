#include "nsgp/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace nsgp {

void LatticeSpec::validate() const {
  if (!(x_min < x_max) || !(y_min < y_max))
    throw std::domain_error("LatticeSpec: need x_min < x_max and y_min < y_max");
  if (nx < 1 || ny < 1)
    throw std::domain_error("LatticeSpec: need nx >= 1 and ny >= 1");
}

std::vector<Point> LatticeSpec::sites() const {
  validate();
  std::vector<Point> s;
  s.reserve(static_cast<std::size_t>(nx) * ny);
  for (int iy = 0; iy < ny; ++iy) {
    const double y = ny > 1 ? y_min + iy * spacing_y() : y_min;
    for (int ix = 0; ix < nx; ++ix) {
      const double x = nx > 1 ? x_min + ix * spacing_x() : x_min;
      s.emplace_back(x, y);
    }
  }
  return s;
}

Eigen::VectorXd sample_gp(const CorrelationMatrix& corr, double scale,
                          Rng& rng) {
  if (!(scale > 0.0)) throw std::domain_error("sample_gp: scale must be > 0");
  Eigen::VectorXd u(corr.n());
  for (int i = 0; i < corr.n(); ++i) u[i] = rng.normal();
  return scale * (corr.llt().matrixL() * u);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> sample_psi_fields(
    std::span<const Point> sites, double tau_psi, Rng& rng) {
  const CorrelationMatrix r_psi = build_psi_correlation_matrix(sites, tau_psi);
  Eigen::VectorXd psi_x = sample_gp(r_psi, 1.0, rng);
  Eigen::VectorXd psi_y = sample_gp(r_psi, 1.0, rng);
  return {std::move(psi_x), std::move(psi_y)};
}

FieldRealization simulate_realization(const LatticeSpec& lattice,
                                      double tau_psi, double tau_z,
                                      double area, std::uint64_t seed,
                                      double display_shrink) {
  if (!(tau_psi > 0.0) || !(tau_z > 0.0) || !(area > 0.0))
    throw std::domain_error("simulate_realization: scale parameters must be > 0");

  FieldRealization out;
  out.sites = lattice.sites();
  out.seed = seed;

  Rng root(seed);
  Rng psi_rng = root.split(0);
  Rng z_rng = root.split(1);

  const auto [psi_x, psi_y] = sample_psi_fields(out.sites, tau_psi, psi_rng);

  std::vector<Cov2x2> kernels(out.sites.size());
  std::vector<Ellipse> ellipses(out.sites.size());
  for (std::size_t i = 0; i < out.sites.size(); ++i) {
    kernels[i] = foci_to_covariance({psi_x[i], psi_y[i]}, tau_z, area);
    ellipses[i] =
        covariance_to_ellipse(kernels[i], out.sites[i]).scaled_down(display_shrink);
  }

  const CorrelationMatrix r_z = build_correlation_matrix(out.sites, kernels);
  out.values = sample_gp(r_z, 1.0, z_rng);
  out.kernel_ellipses = std::move(ellipses);
  return out;
}

namespace {

double min_kernel_sd(std::span<const Cov2x2> kernels) {
  double lam_min = std::numeric_limits<double>::infinity();
  for (const auto& k : kernels) {
    const double gap = std::hypot(k.xx - k.yy, 2.0 * k.xy);
    lam_min = std::min(lam_min, 0.5 * (k.trace() - gap));
  }
  return std::sqrt(lam_min);
}

double max_kernel_sd(std::span<const Cov2x2> kernels) {
  double lam_max = 0.0;
  for (const auto& k : kernels) {
    const double gap = std::hypot(k.xx - k.yy, 2.0 * k.xy);
    lam_max = std::max(lam_max, 0.5 * (k.trace() + gap));
  }
  return std::sqrt(lam_max);
}

}  // namespace

WhiteNoiseConvolution::WhiteNoiseConvolution(std::span<const Point> output_sites,
                                             std::span<const Cov2x2> kernels,
                                             const LatticeSpec& noise_grid) {
  if (output_sites.empty() || kernels.size() != output_sites.size())
    throw std::domain_error(
        "WhiteNoiseConvolution: need equal-length, nonempty sites/kernels");
  noise_grid.validate();
  if (noise_grid.nx < 2 || noise_grid.ny < 2)
    throw std::domain_error("WhiteNoiseConvolution: noise grid too coarse");

  const double sd_min = min_kernel_sd(kernels);
  const double sd_max = max_kernel_sd(kernels);
  const double hx = noise_grid.spacing_x();
  const double hy = noise_grid.spacing_y();
  if (std::max(hx, hy) > sd_min / 4.0)
    throw std::domain_error(
        "WhiteNoiseConvolution: noise grid needs >= 4 cells per smallest "
        "kernel standard deviation");
  for (const auto& s : output_sites) {
    if (s[0] - 4.0 * sd_max < noise_grid.x_min ||
        s[0] + 4.0 * sd_max > noise_grid.x_max ||
        s[1] - 4.0 * sd_max < noise_grid.y_min ||
        s[1] + 4.0 * sd_max > noise_grid.y_max)
      throw std::domain_error(
          "WhiteNoiseConvolution: noise grid must extend >= 4 kernel standard "
          "deviations beyond every output site");
  }

  const std::vector<Point> cells = noise_grid.sites();
  const double cell_area = hx * hy;
  const double sqrt_area = std::sqrt(cell_area);

  weights_.resize(output_sites.size(), cells.size());
  for (std::size_t i = 0; i < output_sites.size(); ++i) {
    const Cov2x2& sig = kernels[i];
    const double norm = 1.0 / (2.0 * M_PI * std::sqrt(sig.det()));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const Eigen::Vector2d d = cells[c] - output_sites[i];
      weights_(i, c) = norm * std::exp(-0.5 * sig.inv_quad_form(d)) * sqrt_area;
    }
    // Standardize: the discrete self-overlap becomes exactly 1.
    weights_.row(i) /= weights_.row(i).norm();
  }
}

Eigen::VectorXd WhiteNoiseConvolution::draw(Rng& rng) const {
  Eigen::VectorXd e(weights_.cols());
  for (int c = 0; c < e.size(); ++c) e[c] = rng.normal();
  return weights_ * e;
}

FieldRealization convolve_white_noise(const LatticeSpec& lattice,
                                      std::span<const Cov2x2> kernels,
                                      const LatticeSpec& noise_grid,
                                      std::uint64_t seed) {
  FieldRealization out;
  out.sites = lattice.sites();
  out.seed = seed;
  const WhiteNoiseConvolution op(out.sites, kernels, noise_grid);
  Rng rng(seed);
  out.values = op.draw(rng);
  return out;
}

}  // namespace nsgp
