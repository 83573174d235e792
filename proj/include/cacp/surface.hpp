#pragma once

#include <memory>
#include <utility>

#include "cacp/core.hpp"

namespace cacp {

/// Geometry provider for a closed surface in R^2 or R^3.
///
/// All field accessors (curvatures, c, m) are defined on a tube around the
/// surface by composition with the closest point map, so kappa(x) is the
/// surface curvature at cp(x), not a curvature of a level set through x.
class Surface {
 public:
  virtual ~Surface() = default;

  virtual int dim() const = 0;

  /// Closest point on the surface to x. Single-valued on the band tube;
  /// equidistant candidates are resolved by a deterministic tie-break.
  virtual Vec cp(const Vec& x) const = 0;

  /// Signed distance to the surface, positive outside.
  virtual double phi(const Vec& x) const = 0;

  /// Curvature at cp(x) (the only curvature in 2D, first principal in 3D).
  virtual double kappa(const Vec& x) const = 0;

  /// Second principal curvature at cp(x); 3D surfaces only.
  virtual double second_curvature(const Vec& x) const;

  /// Outward unit normal at cp(x).
  virtual Vec normal(const Vec& x) const;

  /// Reaction coefficient c(x) = c_tilde(cp(x)).
  virtual double c_field(const Vec& x) const { return 1.0; }

  /// Right-hand side m(x) = m_tilde(cp(x)).
  virtual double m_field(const Vec& x) const = 0;

  /// Manufactured solution evaluated at a point p on the surface.
  virtual double gamma_exact(const Vec& p) const = 0;

  /// Cheap lower bound on |phi(x)| used to prescreen band candidates.
  /// Must never exceed the true |phi|; returning 0 disables the screen.
  virtual double phi_lower_bound(const Vec&) const { return 0.0; }
};

/// (c, m) data pair embedded at x.
std::pair<double, double> data_fields(const Surface& s, const Vec& x);

/// Closest point on the surface to x (free-function form of Surface::cp).
Vec closest_point(const Surface& s, const Vec& x);

/// Unit circle centered at the origin.
/// phi(x) = |x| - 1, kappa = 1, exact solution sin(th) + sin(12 th).
class CircleSurface final : public Surface {
 public:
  int dim() const override { return 2; }
  Vec cp(const Vec& x) const override;
  double phi(const Vec& x) const override;
  double kappa(const Vec&) const override { return 1.0; }
  double m_field(const Vec& x) const override;
  double gamma_exact(const Vec& p) const override;
  double phi_lower_bound(const Vec& x) const override;
};

/// Closed curve r(th) = g(th) (cos th, sin th) with g = 1 + A cos(4 th - pi).
/// The closest point is found by a global scan plus safeguarded Newton
/// refinement of the first-order optimality condition.
class CloverSurface final : public Surface {
 public:
  explicit CloverSurface(double amplitude = 0.25) : amp_(amplitude) {}

  int dim() const override { return 2; }
  Vec cp(const Vec& x) const override;
  double phi(const Vec& x) const override;
  double kappa(const Vec& x) const override;
  double m_field(const Vec& x) const override;
  double gamma_exact(const Vec& p) const override;
  double phi_lower_bound(const Vec& x) const override;

  double g(double th) const;
  double g_t(double th) const;
  double g_tt(double th) const;
  double g_ttt(double th) const;

  Vec point_on_curve(double th) const;

  struct ClosestParam {
    double theta = 0.0;
    int iterations = 0;
    bool tie = false;
  };

  /// Minimizer of |x - r(th)|^2 over th, to 1e-12 in the optimality residual.
  ClosestParam closest_param(const Vec& x) const;

  /// Curve curvature at parameter th.
  double curvature_param(double th) const;

  /// Data field m_tilde at parameter th for the manufactured solution
  /// u = sin(th) + sin(12 th).
  double m_tilde(double th) const;

  /// m_tilde for arbitrary solution values (u, u_th, u_thth) at th.
  double m_from_solution(double th, double u, double u_t, double u_tt) const;

 private:
  double amp_;
};

/// Curve curvature of the clover at parameter theta.
double clover_curvature(const CloverSurface& s, double theta);

/// Minimizing parameter of |x - r(theta)|^2 for the clover.
double clover_closest_param(const CloverSurface& s, const Vec& x);

/// Unit sphere centered at the origin. Both principal curvatures are 1.
/// Exact solution (x^3 - 3 x y^2)(9 z^2 - 1), an eigenfunction of the
/// Laplace-Beltrami operator with eigenvalue -30, so m = 31 gamma.
class SphereSurface final : public Surface {
 public:
  int dim() const override { return 3; }
  Vec cp(const Vec& x) const override;
  double phi(const Vec& x) const override;
  double kappa(const Vec&) const override { return 1.0; }
  double second_curvature(const Vec&) const override { return 1.0; }
  double m_field(const Vec& x) const override;
  double gamma_exact(const Vec& p) const override;
  double phi_lower_bound(const Vec& x) const override;
};

}  // namespace cacp
