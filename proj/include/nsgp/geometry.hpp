#pragma once

#include <Eigen/Dense>
#include <vector>

namespace nsgp {

using Point = Eigen::Vector2d;

// Focus point (psi_x, psi_y) of an origin-centered ellipse.  (psi_x, psi_y)
// and (-psi_x, -psi_y) describe the same ellipse, so all derived quantities
// are even in the sign of the pair.
struct FocusPair {
  double psi_x = 0.0;
  double psi_y = 0.0;

  double norm_sq() const { return psi_x * psi_x + psi_y * psi_y; }
  double angle() const { return std::atan2(psi_y, psi_x); }
};

// Parameters of one local smoothing kernel: focus pair, scale tau_z and the
// fixed ellipse area A.
struct KernelSpec {
  FocusPair focus;
  double tau_z = 1.0;
  double area = 3.5;
};

// Symmetric positive-definite 2x2 covariance; only the upper triangle is
// stored.  Layout matches [[a^2, rho*a*b], [rho*a*b, b^2]].
struct Cov2x2 {
  double xx = 1.0;
  double xy = 0.0;
  double yy = 1.0;

  double det() const { return xx * yy - xy * xy; }
  double trace() const { return xx + yy; }
  bool positive_definite() const { return xx > 0.0 && yy > 0.0 && det() > 0.0; }

  Cov2x2 operator+(const Cov2x2& o) const {
    return {xx + o.xx, xy + o.xy, yy + o.yy};
  }

  // d^T inv(Sigma) d without forming the inverse.
  double inv_quad_form(const Eigen::Vector2d& d) const {
    return (yy * d[0] * d[0] - 2.0 * xy * d[0] * d[1] + xx * d[1] * d[1]) /
           det();
  }

  Eigen::Matrix2d matrix() const {
    Eigen::Matrix2d m;
    m << xx, xy, xy, yy;
    return m;
  }
};

// Axis-aligned description of an ellipse: semi-axes, orientation of the major
// axis in radians, center.
struct Ellipse {
  double semi_major = 1.0;
  double semi_minor = 1.0;
  double angle = 0.0;
  Point center = Point::Zero();

  double area() const { return M_PI * semi_major * semi_minor; }

  // Boundary radius in the global direction theta (measured from the center).
  double radius_at(double theta) const;

  // Same shape with both semi-axes divided by factor (display shrinking).
  Ellipse scaled_down(double factor) const;
};

// Kernel covariance from the focus-pair parameterization.  The foci (+/-psi)
// and the fixed area A determine an origin-centered ellipse with semi-axes
//   d1^2 = sqrt(4A^2 + ||psi||^4 pi^2)/(2 pi) + ||psi||^2 / 2
//   d2^2 = sqrt(4A^2 + ||psi||^4 pi^2)/(2 pi) - ||psi||^2 / 2
// oriented along alpha = atan2(psi_y, psi_x); tau_z scales the whole ellipse.
// The result is Sigma = tau_z^2 R(alpha)^T diag(d1^2, d2^2) R(alpha), the
// unique composition in which the rotation acts on the scaled axes.  Always
// positive definite; the one-sd ellipse of Sigma has area A * tau_z^2 and
// focal half-distance tau_z * ||psi||.
Cov2x2 foci_to_covariance(const FocusPair& focus, double tau_z, double area);

inline Cov2x2 foci_to_covariance(const KernelSpec& k) {
  return foci_to_covariance(k.focus, k.tau_z, k.area);
}

// One-standard-deviation ellipse of a bivariate normal with covariance sigma:
// semi-axes are the square roots of the eigenvalues, the angle is the
// direction of the principal eigenvector (reported in (-pi/2, pi/2]).
// Inverse of foci_to_covariance up to the psi -> -psi symmetry.
Ellipse covariance_to_ellipse(const Cov2x2& sigma, const Point& center);

// n_points boundary points at equally spaced polar angles about the center,
// starting at angle 0.  The polyline is open; repeat the first point to
// close it.
std::vector<Point> ellipse_boundary(const Ellipse& e, int n_points);

}  // namespace nsgp
