#include "doctest.h"

#include <cmath>

#include "cacp/axisym.hpp"

using namespace cacp;

namespace {
constexpr double kPi = 3.14159265358979323846;

// grid index pair of the node nearest to the meridian point at parameter s
std::array<int, 2> node_near(const AxisymGeometry& geom, const GridSpec& grid, double s) {
  const int i = static_cast<int>(std::lround((geom.x_of(s) - grid.lower[0]) / grid.dx));
  const int j = static_cast<int>(std::lround((geom.y_of(s) - grid.lower[1]) / grid.dx));
  return {i, j};
}
}  // namespace

TEST_CASE("closest meridian parameter: poles, ties, and optimality") {
  const SphereMeridian sph;
  const auto above = sph.closest_param({0.0, 1.5, 0.0});
  CHECK(above.sigma == doctest::Approx(kPi).epsilon(1e-12));
  CHECK_FALSE(above.tie);
  CHECK(norm(sub(Vec{0.0, 1.5, 0.0}, sph.point(above.sigma))) == doctest::Approx(0.5));

  const auto generic = sph.closest_param({0.3, 0.4, 0.0});
  CHECK(sph.x_of(generic.sigma) == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(sph.y_of(generic.sigma) == doctest::Approx(0.8).epsilon(1e-9));

  // the ellipsoid center is equidistant from both equator crossings; ties
  // resolve to the smaller parameter
  const EllipsoidMeridian ell(0.5, 1.0);
  const auto center = ell.closest_param({0.0, 0.0, 0.0});
  CHECK(center.tie);
  CHECK(center.sigma == doctest::Approx(kPi / 2).epsilon(1e-9));

  for (const Vec p : {Vec{0.7, 0.9, 0}, Vec{-0.4, -1.3, 0}, Vec{0.2, 1.1, 0}}) {
    const auto cp = ell.closest_param(p);
    const double h = 1e-6;
    const Vec rp = scale(0.5 / h, sub(ell.point(cp.sigma + h), ell.point(cp.sigma - h)));
    CHECK(std::abs(dot(sub(p, ell.point(cp.sigma)), rp)) < 1e-7);
  }
}

TEST_CASE("principal curvatures of the meridian geometries") {
  const SphereMeridian sph;
  for (double s : {0.0, 0.7, kPi / 2, 2.9, 4.4}) {
    CHECK(sph.kappa(s) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sph.h(s) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sph.total_curvature(s) == doctest::Approx(2.0).epsilon(1e-9));
  }

  const EllipsoidMeridian ell(0.5, 1.0);
  CHECK(ell.kappa(kPi / 2) == doctest::Approx(0.5).epsilon(1e-12));   // equator, meridian
  CHECK(ell.h(kPi / 2) == doctest::Approx(2.0).epsilon(1e-12));       // equator, azimuthal
  CHECK(ell.kappa(0.0) == doctest::Approx(4.0).epsilon(1e-12));       // pole
  CHECK(ell.h(0.0) == doctest::Approx(4.0).epsilon(1e-9));            // umbilic limit
  // outward normal points away from the axis on the equator
  CHECK(ell.normal(kPi / 2)[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("embedded Laplace-Beltrami converges for gamma = y on the sphere") {
  const SphereMeridian sph;
  auto f = [&](double x, double y) {
    return sph.y_of(sph.closest_param({x, y, 0.0}).sigma);
  };
  std::vector<double> errs;
  for (int M : {80, 160}) {
    const GridSpec grid = build_grid(2, {-2, -2, 0}, {2, 2, 0}, M);
    double emax = 0;
    for (double s : {0.4, 0.9, 1.4, 2.0, 2.7}) {
      const auto [i, j] = node_near(sph, grid, s);
      const double sc = sph.closest_param(grid.node(i, j)).sigma;
      const double got = embed_laplace_beltrami_axisym(sph, grid, f, i, j);
      emax = std::max(emax, std::abs(got - (-2.0 * sph.y_of(sc))));
    }
    // axis column: the exact south pole node uses the radial limit
    const double pole = embed_laplace_beltrami_axisym(sph, grid, f, M / 2, M / 4);
    emax = std::max(emax, std::abs(pole - 2.0));
    errs.push_back(emax);
  }
  CHECK(errs[0] / errs[1] > 2.8);  // second order
  CHECK(errs[1] < 5e-3);
}

TEST_CASE("embedded surface gradient converges for gamma = y") {
  const SphereMeridian sph;
  auto f = [&](double x, double y) {
    return sph.y_of(sph.closest_param({x, y, 0.0}).sigma);
  };
  std::vector<double> errs;
  for (int M : {80, 160}) {
    const GridSpec grid = build_grid(2, {-2, -2, 0}, {2, 2, 0}, M);
    double emax = 0;
    for (double s : {0.4, 0.9, 1.4, 2.0, 2.7}) {
      const auto [i, j] = node_near(sph, grid, s);
      const double sc = sph.closest_param(grid.node(i, j)).sigma;
      const Vec n = sph.normal(sc);
      const Vec want = sub(Vec{0.0, 1.0, 0.0}, scale(n[1], n));  // e_y - (n.e_y) n
      const Vec got = embed_gradient_axisym(sph, grid, f, i, j);
      emax = std::max(emax, norm(sub(got, want)));
    }
    errs.push_back(emax);
  }
  CHECK(errs[0] / errs[1] > 2.8);
  CHECK(errs[1] < 5e-3);
}

TEST_CASE("embedded surface divergence: tangential oracle and normal field") {
  const SphereMeridian sph;
  // tangential field psi(s) tau with psi = sin s: divergence (x psi)_s/(x w)
  // equals 2 cos s on the unit sphere
  auto fx = [&](double x, double y) {
    const double s = sph.closest_param({x, y, 0.0}).sigma;
    return std::sin(s) * sph.tangent(s)[0];
  };
  auto fy = [&](double x, double y) {
    const double s = sph.closest_param({x, y, 0.0}).sigma;
    return std::sin(s) * sph.tangent(s)[1];
  };
  std::vector<double> errs;
  for (int M : {80, 160}) {
    const GridSpec grid = build_grid(2, {-2, -2, 0}, {2, 2, 0}, M);
    double emax = 0;
    for (double s : {0.5, 1.0, 1.6, 2.2, 2.8}) {
      const auto [i, j] = node_near(sph, grid, s);
      const double sc = sph.closest_param(grid.node(i, j)).sigma;
      const double got = embed_surface_divergence_axisym(sph, grid, fx, fy, i, j);
      emax = std::max(emax, std::abs(got - 2.0 * std::cos(sc)));
    }
    errs.push_back(emax);
  }
  CHECK(errs[0] / errs[1] > 2.5);
  CHECK(errs[1] < 5e-3);

  // the normal field n has no tangential part; its divergence is the total
  // curvature, exactly 2 everywhere on the unit sphere
  auto nx = [&](double x, double y) {
    return sph.normal(sph.closest_param({x, y, 0.0}).sigma)[0];
  };
  auto ny = [&](double x, double y) {
    return sph.normal(sph.closest_param({x, y, 0.0}).sigma)[1];
  };
  const GridSpec grid = build_grid(2, {-2, -2, 0}, {2, 2, 0}, 80);
  for (double s : {0.3, 1.1, 1.9, 2.6}) {
    const auto [i, j] = node_near(sph, grid, s);
    const double got = embed_surface_divergence_axisym(sph, grid, nx, ny, i, j);
    CHECK(got == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("inextensibility residual: rigid translation and the normal field") {
  const EllipsoidMeridian ell(0.5, 1.0);
  std::vector<double> res_max;
  for (int N : {128, 256, 512}) {
    std::vector<double> ut(N), un(N);
    for (int l = 0; l < N; ++l) {
      const double s = 2.0 * kPi * l / N;
      // u = e_y, a rigid translation along the axis
      ut[l] = ell.ys(s) / ell.speed(s);
      un[l] = -ell.xs(s) / ell.speed(s);
    }
    double mx = 0;
    for (double r : inextensibility_residual(ell, ut, un)) mx = std::max(mx, std::abs(r));
    res_max.push_back(mx);
  }
  CHECK(res_max[0] / res_max[1] > 3.0);
  CHECK(res_max[1] / res_max[2] > 3.0);
  CHECK(res_max[2] < 1e-2);

  const SphereMeridian sph;
  const int N = 512;
  std::vector<double> ut(N, 0.0), un(N, 1.0);
  for (double r : inextensibility_residual(sph, ut, un))
    CHECK(r == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("tension solve reproduces constants exactly") {
  const SphereMeridian sph;
  const TensionResult res = solve_tension_axisym(
      sph, [](double) { return 1.0; }, [](double) { return 1.0; },
      [](double) { return 1.0; }, 80);
  CHECK(res.rel_residual <= 1e-10);
  CHECK(res.errors.l2 <= 1e-12);
  CHECK(res.errors.linf <= 1e-12);
}

TEST_CASE("tension solve converges on a manufactured sphere problem") {
  // gamma = y solves c gamma - Delta_s gamma = m with c = 4, m = 6y
  const SphereMeridian sph;
  std::vector<double> errs;
  for (int M : {40, 80}) {
    const TensionResult res = solve_tension_axisym(
        sph, [](double) { return 4.0; }, [](double s) { return -6.0 * std::cos(s); },
        [](double s) { return -std::cos(s); }, M);
    errs.push_back(res.errors.l2);
  }
  CHECK(errs[0] < 1e-3);
  CHECK(errs[0] / errs[1] > 3.5);
}

TEST_CASE("planar adapter exposes the revolved surface") {
  const SphereMeridian sph;
  const AxisymSurface2D surf(
      sph, [](double) { return 4.0; }, [](double s) { return -6.0 * std::cos(s); },
      [](double s) { return -std::cos(s); });
  CHECK(surf.dim() == 2);
  const Vec x = {0.0, 1.5, 0.0};
  const Vec p = surf.cp(x);
  CHECK(p[0] == doctest::Approx(0.0).scale(1.0));
  CHECK(p[1] == doctest::Approx(1.0));
  CHECK(surf.phi(x) == doctest::Approx(0.5));
  CHECK(surf.kappa(x) == doctest::Approx(1.0));
  CHECK(surf.second_curvature(x) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(surf.c_field(x) == doctest::Approx(4.0));
  CHECK(surf.m_field(x) == doctest::Approx(6.0));       // -6 cos(pi)
  CHECK(surf.gamma_exact(p) == doctest::Approx(1.0));   // -cos(pi)
}
