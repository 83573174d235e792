#include "doctest.h"

#include <cmath>

#include "cacp/surface.hpp"

using namespace cacp;

namespace {
constexpr double kPi = 3.14159265358979323846;

// deterministic scattered samples in [-1.8, 1.8]^dim
double lcg_unit(std::uint64_t& s) {
  s = s * 6364136223846793005ull + 1442695040888963407ull;
  return static_cast<double>(s >> 11) / 9007199254740992.0;
}
}  // namespace

TEST_CASE("circle geometry and data fields") {
  const CircleSurface surf;
  std::uint64_t state = 7;
  for (int k = 0; k < 50; ++k) {
    const Vec x = {3.6 * lcg_unit(state) - 1.8, 3.6 * lcg_unit(state) - 1.8, 0};
    const double r = std::hypot(x[0], x[1]);
    if (r < 0.2) continue;  // keep away from the center singularity
    const Vec p = surf.cp(x);
    CHECK(std::hypot(p[0], p[1]) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(surf.phi(x) == doctest::Approx(r - 1.0).epsilon(1e-14));
    CHECK(std::abs(surf.phi(x)) == doctest::Approx(norm(sub(x, p))).epsilon(1e-12));
    CHECK(surf.phi_lower_bound(x) <= std::abs(surf.phi(x)) + 1e-14);
    // fields are closest point extensions: constant along normals
    const Vec far = scale(1.0 + 0.3 / r, x);
    CHECK(surf.m_field(x) == doctest::Approx(surf.m_field(far)).epsilon(1e-12));
  }

  // m = c gamma - gamma'' on the unit circle with c = 1 and
  // gamma = sin(th) + sin(12 th)
  for (double th : {0.3, 1.1, 2.9, 4.2, 5.8}) {
    const Vec p = {std::cos(th), std::sin(th), 0};
    const double expected = 2.0 * std::sin(th) + 145.0 * std::sin(12.0 * th);
    CHECK(surf.m_field(p) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(surf.gamma_exact(p) ==
          doctest::Approx(std::sin(th) + std::sin(12.0 * th)).epsilon(1e-12));
    CHECK(surf.c_field(p) == 1.0);
  }
}

TEST_CASE("clover closest point satisfies first-order optimality") {
  const CloverSurface surf;
  std::uint64_t state = 11;
  for (int k = 0; k < 30; ++k) {
    const Vec x = {3.6 * lcg_unit(state) - 1.8, 3.6 * lcg_unit(state) - 1.8, 0};
    if (std::hypot(x[0], x[1]) < 0.3) continue;
    const auto cp = surf.closest_param(x);
    const double d_opt = norm(sub(x, surf.point_on_curve(cp.theta)));

    // brute-force scan oracle: no curve sample may be closer
    double d_min = 1e30;
    for (int s = 0; s < 4096; ++s) {
      const double th = 2.0 * kPi * s / 4096;
      d_min = std::min(d_min, norm(sub(x, surf.point_on_curve(th))));
    }
    CHECK(d_opt <= d_min + 1e-6);

    // stationarity of |x - r(th)|^2, with r' from central differences
    const double h = 1e-6;
    const Vec rp = scale(0.5 / h, sub(surf.point_on_curve(cp.theta + h),
                                      surf.point_on_curve(cp.theta - h)));
    CHECK(std::abs(dot(sub(x, surf.point_on_curve(cp.theta)), rp)) < 1e-7);

    CHECK(std::abs(surf.phi(x)) == doctest::Approx(d_opt).epsilon(1e-10));
  }
}

TEST_CASE("clover curvature matches a finite-difference oracle") {
  const CloverSurface surf;
  for (double th : {0.0, 0.37, 1.2, kPi / 4, 2.8, 4.9}) {
    const double h = 1e-5;
    const Vec rm = surf.point_on_curve(th - h), r0 = surf.point_on_curve(th),
              rp = surf.point_on_curve(th + h);
    const double xp = (rp[0] - rm[0]) / (2 * h), yp = (rp[1] - rm[1]) / (2 * h);
    const double xpp = (rp[0] - 2 * r0[0] + rm[0]) / (h * h);
    const double ypp = (rp[1] - 2 * r0[1] + rm[1]) / (h * h);
    const double fd = (xp * ypp - yp * xpp) / std::pow(xp * xp + yp * yp, 1.5);
    CHECK(surf.curvature_param(th) == doctest::Approx(fd).epsilon(1e-4));
    CHECK(clover_curvature(surf, th) == doctest::Approx(surf.curvature_param(th)));
  }
  // notch curvature of g = 1 + cos(4 th - pi)/4 at th = 0: kappa = -52/9
  CHECK(surf.curvature_param(0.0) == doctest::Approx(-52.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("clover data field matches c gamma - Delta_s gamma") {
  const CloverSurface surf;
  // Delta_s u = (1/w) d/dth (u'/w) with w = |r'(th)|, both outer derivative
  // and w from finite differences
  auto w_of = [&](double th) {
    const double h = 1e-6;
    return norm(scale(0.5 / h,
                      sub(surf.point_on_curve(th + h), surf.point_on_curve(th - h))));
  };
  auto u_t = [](double th) { return std::cos(th) + 12.0 * std::cos(12.0 * th); };
  for (double th : {0.21, 1.4, 2.2, 3.9, 5.5}) {
    const double h = 1e-5;
    const double lb =
        (u_t(th + h) / w_of(th + h) - u_t(th - h) / w_of(th - h)) / (2 * h) / w_of(th);
    const double u = std::sin(th) + std::sin(12.0 * th);
    const double expected = u - lb;
    CHECK(surf.m_tilde(th) == doctest::Approx(expected).epsilon(1e-4));
    CHECK(surf.m_field(surf.point_on_curve(th)) == doctest::Approx(surf.m_tilde(th)));
  }
}

TEST_CASE("sphere solution is a degree-5 eigenfunction") {
  const SphereSurface surf;
  // spherical-coordinate Laplace-Beltrami oracle at scattered points:
  // (1/sin t)(sin t u_t)_t + u_pp/sin^2 t, expect -30 u
  auto u = [&](double t, double p) {
    const Vec x = {std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
    return surf.gamma_exact(x);
  };
  const double h = 1e-4;
  for (double t : {0.6, 1.1, 1.9, 2.4}) {
    for (double p : {0.4, 2.0, 3.7, 5.3}) {
      const double ut_p = (u(t + h, p) - u(t - h, p)) / (2 * h);
      const double utt = (u(t + h, p) - 2 * u(t, p) + u(t - h, p)) / (h * h);
      const double upp = (u(t, p + h) - 2 * u(t, p) + u(t, p - h)) / (h * h);
      const double lb = utt + ut_p / std::tan(t) + upp / (std::sin(t) * std::sin(t));
      CHECK(lb == doctest::Approx(-30.0 * u(t, p)).epsilon(1e-5));
      const Vec x = {std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
      CHECK(surf.m_field(x) == doctest::Approx(31.0 * u(t, p)).epsilon(1e-12));
    }
  }

  std::uint64_t state = 3;
  for (int k = 0; k < 30; ++k) {
    const Vec x = {3.6 * lcg_unit(state) - 1.8, 3.6 * lcg_unit(state) - 1.8,
                   3.6 * lcg_unit(state) - 1.8};
    if (norm(x) < 0.2) continue;
    const Vec p = surf.cp(x);
    CHECK(norm(p) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(surf.phi(x) == doctest::Approx(norm(x) - 1.0).epsilon(1e-13));
    CHECK(surf.phi_lower_bound(x) <= std::abs(surf.phi(x)) + 1e-14);
    const auto [c, m] = data_fields(surf, x);
    CHECK(c == surf.c_field(x));
    CHECK(m == surf.m_field(x));
  }
}
