#pragma once

#include <functional>

#include "cacp/solver.hpp"

namespace cacp {

/// Surface of revolution described by its generating curve
/// (x(s), y(s)) in the meridian half-plane, revolved about the y axis.
/// The curve is parameterized over [0, pi] with x >= 0 and poles at the
/// ends; the smooth periodic extension to [0, 2pi) (x changing sign)
/// parameterizes the full meridian section and is used for closest-point
/// searches and closed-curve finite differences.
class AxisymGeometry {
 public:
  virtual ~AxisymGeometry() = default;

  virtual double x_of(double s) const = 0;
  virtual double y_of(double s) const = 0;
  virtual double xs(double s) const = 0;
  virtual double ys(double s) const = 0;
  virtual double xss(double s) const = 0;
  virtual double yss(double s) const = 0;

  double speed(double s) const;  // |r_s|
  Vec point(double s) const { return {x_of(s), y_of(s), 0.0}; }
  Vec tangent(double s) const;
  Vec normal(double s) const;  // outward: (y_s, -x_s)/|r_s|

  /// Meridian principal curvature -(x_ss y_s - y_ss x_s)/|r_s|^3.
  double kappa(double s) const;

  /// Azimuthal principal curvature y_s/(x |r_s|); equals kappa at the poles
  /// (umbilic limit, taken when |x| < 1e-8).
  double h(double s) const;

  double total_curvature(double s) const { return kappa(s) + h(s); }

  struct ClosestParam {
    double sigma = 0.0;
    bool tie = false;
  };

  /// Minimizer of |p - r(s)|^2 over the closed meridian curve; equidistant
  /// candidates resolve to the smallest parameter.
  ClosestParam closest_param(const Vec& p) const;
};

class SphereMeridian final : public AxisymGeometry {
 public:
  double x_of(double s) const override { return std::sin(s); }
  double y_of(double s) const override { return -std::cos(s); }
  double xs(double s) const override { return std::cos(s); }
  double ys(double s) const override { return std::sin(s); }
  double xss(double s) const override { return -std::sin(s); }
  double yss(double s) const override { return std::cos(s); }
};

/// Prolate ellipsoid of revolution, equatorial radius a, polar radius c.
class EllipsoidMeridian final : public AxisymGeometry {
 public:
  EllipsoidMeridian(double a, double c) : a_(a), c_(c) {}
  double x_of(double s) const override { return a_ * std::sin(s); }
  double y_of(double s) const override { return -c_ * std::cos(s); }
  double xs(double s) const override { return a_ * std::cos(s); }
  double ys(double s) const override { return c_ * std::sin(s); }
  double xss(double s) const override { return -a_ * std::sin(s); }
  double yss(double s) const override { return c_ * std::cos(s); }
  double a() const { return a_; }
  double c() const { return c_; }

 private:
  double a_, c_;
};

using ScalarField = std::function<double(double, double)>;
using CurveField = std::function<double(double)>;

/// Planar geometry adapter: the closed meridian curve as a 2D Surface, with
/// kappa/h the revolved surface's principal curvatures at cp(x). Used to
/// classify a band around the curve and to embed axisymmetric data fields.
class AxisymSurface2D final : public Surface {
 public:
  AxisymSurface2D(const AxisymGeometry& geom, CurveField c_tilde, CurveField m_tilde,
                  CurveField gamma_tilde);

  int dim() const override { return 2; }
  Vec cp(const Vec& x) const override;
  double phi(const Vec& x) const override;
  double kappa(const Vec& x) const override;
  double second_curvature(const Vec& x) const override;
  double c_field(const Vec& x) const override;
  double m_field(const Vec& x) const override;
  double gamma_exact(const Vec& p) const override;

  double closest_sigma(const Vec& x) const;
  const AxisymGeometry& geometry() const { return geom_; }

 private:
  const AxisymGeometry& geom_;
  CurveField c_tilde_, m_tilde_, gamma_tilde_;
};

/// Embedded surface gradient (1 + phi kappa) * centered gradient at node
/// (i, j). On the axis column the radial derivative vanishes by symmetry.
Vec embed_gradient_axisym(const AxisymGeometry& geom, const GridSpec& grid, const ScalarField& f,
                          int i, int j);

/// Embedded Laplace-Beltrami operator at node (i, j):
/// (1+phi kappa)(1+phi h) div((1+phi kappa)/(1+phi h) grad f) in cylindrical
/// form, with node-averaged face coefficients and the quadratic-profile
/// limit of the radial term on the axis column.
double embed_laplace_beltrami_axisym(const AxisymGeometry& geom, const GridSpec& grid,
                                     const ScalarField& f, int i, int j);

/// Embedded surface divergence at node (i, j) for a meridian-plane vector
/// field with Cartesian components (fx, fy). The tangential part runs
/// through (1+phi kappa)(1+phi h) div(f_tau tau/(1+phi h)) with centered
/// differences and the linear-profile axis limit for the radial term; that
/// divergence form is exact only on tangential fields, so the normal part
/// adds its surface divergence H (f . n) at the closest point directly.
double embed_surface_divergence_axisym(const AxisymGeometry& geom, const GridSpec& grid,
                                       const ScalarField& fx, const ScalarField& fy, int i, int j);

/// Inextensibility residual (1/x)(1/|r_s|)(x u_tau)_s + H u_n on the closed
/// meridian curve, from samples of (u . tau, u . n) at sigma_l = 2 pi l / N.
/// Centered periodic differences; pole nodes use the limit
/// 2 (u_tau)_s / |r_s| + H u_n.
std::vector<double> inextensibility_residual(const AxisymGeometry& geom,
                                             const std::vector<double>& u_tau,
                                             const std::vector<double>& u_n);

/// Result of the axisymmetric tension solve on the half-plane band.
struct TensionResult {
  Eigen::VectorXd gamma;                     // indexed by half-plane band row
  std::vector<std::int64_t> half_row_to_node;  // flat node ids on the full grid
  GridSpec grid;
  SpMat A;
  Eigen::VectorXd b;
  double rel_residual = 0.0;
  ErrorNorms errors;  // against gamma_tilde(cp), when provided
};

/// Solves c_tilde gamma - Delta_s gamma = m_tilde on the surface of
/// revolution with the curvature-augmented band discretization: the band is
/// classified on the full-plane grid [-2,2]^2 against the closed meridian
/// curve, rows are assembled for nodes with x >= 0, and references to the
/// single ghost column at x = -dx are folded onto +dx (even symmetry).
TensionResult solve_tension_axisym(const AxisymGeometry& geom, const CurveField& c_tilde,
                                   const CurveField& m_tilde, const CurveField& gamma_tilde,
                                   int M);

}  // namespace cacp
