#include "cacp/surface.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace cacp {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double wrap_angle(double th) {
  th = std::fmod(th, kTwoPi);
  if (th < 0.0) th += kTwoPi;
  return th;
}

}  // namespace

double Surface::second_curvature(const Vec&) const {
  throw Error("second principal curvature is only defined for surfaces in R^3");
}

Vec Surface::normal(const Vec& x) const {
  const double d = phi(x);
  if (std::abs(d) < 1e-14)
    throw Error("default normal is undefined on the surface itself; override required");
  return scale(1.0 / d, sub(x, cp(x)));
}

std::pair<double, double> data_fields(const Surface& s, const Vec& x) {
  return {s.c_field(x), s.m_field(x)};
}

Vec closest_point(const Surface& s, const Vec& x) { return s.cp(x); }

// ---------------------------------------------------------------------------
// Circle

Vec CircleSurface::cp(const Vec& x) const {
  const double r = std::hypot(x[0], x[1]);
  if (r == 0.0) return {1.0, 0.0, 0.0};  // every direction ties; pick theta = 0
  return {x[0] / r, x[1] / r, 0.0};
}

double CircleSurface::phi(const Vec& x) const { return std::hypot(x[0], x[1]) - 1.0; }

double CircleSurface::phi_lower_bound(const Vec& x) const {
  return std::abs(std::hypot(x[0], x[1]) - 1.0);
}

double CircleSurface::m_field(const Vec& x) const {
  const Vec p = cp(x);
  const double th = std::atan2(p[1], p[0]);
  return 2.0 * std::sin(th) + 145.0 * std::sin(12.0 * th);
}

double CircleSurface::gamma_exact(const Vec& p) const {
  const double th = std::atan2(p[1], p[0]);
  return std::sin(th) + std::sin(12.0 * th);
}

// ---------------------------------------------------------------------------
// Clover

double CloverSurface::g(double th) const { return 1.0 + amp_ * std::cos(4.0 * th - kPi); }
double CloverSurface::g_t(double th) const { return -4.0 * amp_ * std::sin(4.0 * th - kPi); }
double CloverSurface::g_tt(double th) const { return -16.0 * amp_ * std::cos(4.0 * th - kPi); }
double CloverSurface::g_ttt(double th) const { return 64.0 * amp_ * std::sin(4.0 * th - kPi); }

Vec CloverSurface::point_on_curve(double th) const {
  const double r = g(th);
  return {r * std::cos(th), r * std::sin(th), 0.0};
}

namespace {

struct CurveEval {
  Vec r, rt, rtt;
};

CurveEval eval_curve(const CloverSurface& s, double th) {
  const double c = std::cos(th), sn = std::sin(th);
  const double r = s.g(th), rt = s.g_t(th), rtt = s.g_tt(th);
  CurveEval e;
  e.r = {r * c, r * sn, 0.0};
  e.rt = {rt * c - r * sn, rt * sn + r * c, 0.0};
  e.rtt = {rtt * c - 2.0 * rt * sn - r * c, rtt * sn + 2.0 * rt * c - r * sn, 0.0};
  return e;
}

}  // namespace

CloverSurface::ClosestParam CloverSurface::closest_param(const Vec& x) const {
  // Global coarse scan, then safeguarded Newton on the optimality condition
  // (x - r(th)) . r'(th) = 0 within each sampled local-minimum bracket.
  constexpr int N = 256;
  std::array<double, N> dist2;
  for (int l = 0; l < N; ++l) {
    const Vec d = sub(x, point_on_curve(kTwoPi * l / N));
    dist2[static_cast<std::size_t>(l)] = dot(d, d);
  }

  auto objective = [&](double th) {
    const Vec d = sub(x, point_on_curve(th));
    return dot(d, d);
  };
  auto opt_residual = [&](double th, double* deriv) {
    const CurveEval e = eval_curve(*this, th);
    const Vec d = sub(x, e.r);
    if (deriv) *deriv = -dot(e.rt, e.rt) + dot(d, e.rtt);
    return dot(d, e.rt);
  };

  struct Candidate {
    double theta, d2;
    int iters;
  };
  std::vector<Candidate> cands;

  for (int l = 0; l < N; ++l) {
    const double dm = dist2[static_cast<std::size_t>((l + N - 1) % N)];
    const double dp = dist2[static_cast<std::size_t>((l + 1) % N)];
    const double d0 = dist2[static_cast<std::size_t>(l)];
    if (!(d0 <= dm && d0 <= dp)) continue;

    const double h = kTwoPi / N;
    double a = kTwoPi * l / N - h, b = kTwoPi * l / N + h;
    double fa = opt_residual(a, nullptr), fb = opt_residual(b, nullptr);
    double th = kTwoPi * l / N;
    int it = 0;
    for (; it < 100; ++it) {
      double deriv = 0.0;
      const double f = opt_residual(th, &deriv);
      if (std::abs(f) <= 1e-12) break;
      if (fa * fb < 0.0) {  // keep the root bracketed
        if (fa * f > 0.0) {
          a = th;
          fa = f;
        } else {
          b = th;
          fb = f;
        }
      }
      double next = (deriv != 0.0) ? th - f / deriv : 0.5 * (a + b);
      if (!(next > a && next < b)) next = 0.5 * (a + b);
      if (std::abs(next - th) < 1e-15) {
        th = next;
        break;
      }
      th = next;
    }
    cands.push_back({wrap_angle(th), objective(th), it});
  }

  Candidate best = cands.front();
  for (const Candidate& c : cands)
    if (c.d2 < best.d2) best = c;

  ClosestParam res;
  res.theta = best.theta;
  res.iterations = best.iters;
  for (const Candidate& c : cands) {
    if (c.d2 - best.d2 <= 1e-12 && std::abs(c.theta - best.theta) > 1e-9) {
      res.tie = true;
      if (c.theta < res.theta) {
        res.theta = c.theta;
        res.iterations = c.iters;
      }
    }
  }
  return res;
}

double CloverSurface::curvature_param(double th) const {
  const double r = g(th), rt = g_t(th), rtt = g_tt(th);
  const double s2 = r * r + rt * rt;
  return (r * r + 2.0 * rt * rt - r * rtt) / (s2 * std::sqrt(s2));
}

double CloverSurface::m_from_solution(double th, double u, double u_t, double u_tt) const {
  const double r = g(th), rt = g_t(th), rtt = g_tt(th);
  const double s2 = rt * rt + r * r;
  const double lap = u_tt / s2 - u_t * (rt * rtt + r * rt) / (s2 * s2);
  return u - lap;
}

double CloverSurface::m_tilde(double th) const {
  const double u = std::sin(th) + std::sin(12.0 * th);
  const double u_t = std::cos(th) + 12.0 * std::cos(12.0 * th);
  const double u_tt = -std::sin(th) - 144.0 * std::sin(12.0 * th);
  return m_from_solution(th, u, u_t, u_tt);
}

Vec CloverSurface::cp(const Vec& x) const { return point_on_curve(closest_param(x).theta); }

double CloverSurface::phi(const Vec& x) const {
  const double th = closest_param(x).theta;
  const double d = norm(sub(x, point_on_curve(th)));
  const bool inside = std::hypot(x[0], x[1]) < g(std::atan2(x[1], x[0]));
  return inside ? -d : d;
}

double CloverSurface::kappa(const Vec& x) const { return curvature_param(closest_param(x).theta); }

double CloverSurface::m_field(const Vec& x) const { return m_tilde(closest_param(x).theta); }

double CloverSurface::gamma_exact(const Vec& p) const {
  const double th = std::atan2(p[1], p[0]);
  return std::sin(th) + std::sin(12.0 * th);
}

double CloverSurface::phi_lower_bound(const Vec& x) const {
  return std::max(0.0, std::abs(std::hypot(x[0], x[1]) - 1.0) - amp_);
}

double clover_curvature(const CloverSurface& s, double theta) { return s.curvature_param(theta); }

double clover_closest_param(const CloverSurface& s, const Vec& x) {
  return s.closest_param(x).theta;
}

// ---------------------------------------------------------------------------
// Sphere

Vec SphereSurface::cp(const Vec& x) const {
  const double r = norm(x);
  if (r == 0.0) return {1.0, 0.0, 0.0};  // every direction ties; pick the x axis
  return scale(1.0 / r, x);
}

double SphereSurface::phi(const Vec& x) const { return norm(x) - 1.0; }

double SphereSurface::phi_lower_bound(const Vec& x) const { return std::abs(norm(x) - 1.0); }

double SphereSurface::gamma_exact(const Vec& p) const {
  return (p[0] * p[0] * p[0] - 3.0 * p[0] * p[1] * p[1]) * (9.0 * p[2] * p[2] - 1.0);
}

double SphereSurface::m_field(const Vec& x) const { return 31.0 * gamma_exact(cp(x)); }

}  // namespace cacp
