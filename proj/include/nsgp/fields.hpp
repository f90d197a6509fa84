#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nsgp/covariance.hpp"
#include "nsgp/geometry.hpp"
#include "nsgp/rng.hpp"

namespace nsgp {

// Regular lattice of nx * ny sites spanning [x_min, x_max] x [y_min, y_max]
// inclusive.  Sites are ordered row-major: x varies fastest.
struct LatticeSpec {
  double x_min = 0.0, x_max = 20.0;
  double y_min = 0.0, y_max = 20.0;
  int nx = 21, ny = 21;

  void validate() const;
  int size() const { return nx * ny; }
  std::vector<Point> sites() const;
  double spacing_x() const { return nx > 1 ? (x_max - x_min) / (nx - 1) : 0.0; }
  double spacing_y() const { return ny > 1 ? (y_max - y_min) / (ny - 1) : 0.0; }
};

// One simulated field: values at sites, the seed that produced it, and
// (when the simulation built per-site kernels) their one-sd ellipses.
struct FieldRealization {
  std::vector<Point> sites;
  Eigen::VectorXd values;
  std::uint64_t seed = 0;
  std::optional<std::vector<Ellipse>> kernel_ellipses;
};

// Multivariate normal draw: values = scale * L * u with L the Cholesky
// factor of corr and u iid standard normal from rng.  Pure in (inputs, rng
// state).
Eigen::VectorXd sample_gp(const CorrelationMatrix& corr, double scale,
                          Rng& rng);

// Two independent draws from N(0, R_psi(tau_psi)) over the sites; each site
// is marginally standard normal, so (psi_x, psi_y) is marginally bivariate
// standard normal.
std::pair<Eigen::VectorXd, Eigen::VectorXd> sample_psi_fields(
    std::span<const Point> sites, double tau_psi, Rng& rng);

// Full pipeline of one realization on a lattice: draw the focus fields, map
// them to per-site kernels with scale tau_z and area, assemble the
// correlation matrix, and make a unit-variance multivariate normal draw.
// kernel_ellipses are shrunk by display_shrink for plotting.
FieldRealization simulate_realization(const LatticeSpec& lattice,
                                      double tau_psi, double tau_z,
                                      double area, std::uint64_t seed,
                                      double display_shrink = 10.0);

// Discrete white-noise convolution operator.  The noise process is
// approximated by iid cell impulses (integral of the process over a cell is
// N(0, cell_area)); an output value is the kernel-weighted sum over cells,
// standardized to unit marginal variance by its discrete self-overlap.
// Draws from this operator target the same covariance as sample_gp with
// build_correlation_matrix, which is the constructive definition the closed
// form must agree with.
class WhiteNoiseConvolution {
 public:
  // Preconditions: noise grid cell size <= (smallest kernel sd) / 4, and the
  // noise grid must extend >= 4 (largest kernel sd) beyond every output site.
  WhiteNoiseConvolution(std::span<const Point> output_sites,
                        std::span<const Cov2x2> kernels,
                        const LatticeSpec& noise_grid);

  int n_cells() const { return static_cast<int>(weights_.cols()); }
  // One standardized realization over the output sites.
  Eigen::VectorXd draw(Rng& rng) const;

 private:
  Eigen::MatrixXd weights_;  // n_sites x n_cells, rows have unit 2-norm
};

// Single realization through the convolution operator.
FieldRealization convolve_white_noise(const LatticeSpec& lattice,
                                      std::span<const Cov2x2> kernels,
                                      const LatticeSpec& noise_grid,
                                      std::uint64_t seed);

}  // namespace nsgp
