#include "nsgp/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace nsgp {

double Ellipse::radius_at(double theta) const {
  const double u = theta - angle;
  const double c = std::cos(u);
  const double s = std::sin(u);
  const double a = semi_major;
  const double b = semi_minor;
  return a * b / std::sqrt(b * b * c * c + a * a * s * s);
}

Ellipse Ellipse::scaled_down(double factor) const {
  if (!(factor > 0.0)) throw std::domain_error("Ellipse: factor must be > 0");
  Ellipse out = *this;
  out.semi_major /= factor;
  out.semi_minor /= factor;
  return out;
}

Cov2x2 foci_to_covariance(const FocusPair& focus, double tau_z, double area) {
  if (!(tau_z > 0.0)) throw std::domain_error("foci_to_covariance: tau_z must be > 0");
  if (!(area > 0.0)) throw std::domain_error("foci_to_covariance: area must be > 0");

  const double p = focus.norm_sq();
  const double root =
      std::sqrt(4.0 * area * area + p * p * M_PI * M_PI) / (2.0 * M_PI);
  const double d1_sq = root + 0.5 * p;  // along the focus direction
  const double d2_sq = root - 0.5 * p;

  // alpha from the two-argument arctangent: well defined at psi_x = 0, and
  // the quadrant ambiguity is absorbed by the psi -> -psi symmetry.
  const double alpha = focus.angle();
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  const double t2 = tau_z * tau_z;

  // Sigma = tau_z^2 R^T D^2 R with R = [[c, s], [-s, c]].
  Cov2x2 sigma;
  sigma.xx = t2 * (d1_sq * c * c + d2_sq * s * s);
  sigma.xy = t2 * (d1_sq - d2_sq) * c * s;
  sigma.yy = t2 * (d1_sq * s * s + d2_sq * c * c);
  return sigma;
}

Ellipse covariance_to_ellipse(const Cov2x2& sigma, const Point& center) {
  if (!sigma.positive_definite())
    throw std::domain_error("covariance_to_ellipse: matrix not positive definite");

  const double tr = sigma.trace();
  const double gap = std::hypot(sigma.xx - sigma.yy, 2.0 * sigma.xy);
  const double lam1 = 0.5 * (tr + gap);
  const double lam2 = 0.5 * (tr - gap);

  Ellipse e;
  e.semi_major = std::sqrt(lam1);
  e.semi_minor = std::sqrt(std::max(lam2, 0.0));
  e.center = center;
  // Principal-axis direction; for a circle the angle is arbitrary and
  // atan2(0, 0) = 0 is returned.
  double ang = 0.5 * std::atan2(2.0 * sigma.xy, sigma.xx - sigma.yy);
  if (ang <= -M_PI / 2.0) ang += M_PI;
  if (ang > M_PI / 2.0) ang -= M_PI;
  e.angle = ang;
  return e;
}

std::vector<Point> ellipse_boundary(const Ellipse& e, int n_points) {
  if (n_points < 3) throw std::domain_error("ellipse_boundary: need n_points >= 3");
  std::vector<Point> pts;
  pts.reserve(n_points);
  for (int k = 0; k < n_points; ++k) {
    const double theta = 2.0 * M_PI * k / n_points;
    const double r = e.radius_at(theta);
    pts.emplace_back(e.center[0] + r * std::cos(theta),
                     e.center[1] + r * std::sin(theta));
  }
  return pts;
}

}  // namespace nsgp
