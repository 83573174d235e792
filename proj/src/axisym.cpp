#include "cacp/axisym.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace cacp {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap_param(double s) {
  s = std::fmod(s, kTwoPi);
  return s < 0.0 ? s + kTwoPi : s;
}

}  // namespace

double AxisymGeometry::speed(double s) const { return std::hypot(xs(s), ys(s)); }

Vec AxisymGeometry::tangent(double s) const {
  const double w = speed(s);
  return {xs(s) / w, ys(s) / w, 0.0};
}

Vec AxisymGeometry::normal(double s) const {
  const double w = speed(s);
  return {ys(s) / w, -xs(s) / w, 0.0};
}

double AxisymGeometry::kappa(double s) const {
  const double w = speed(s);
  return -(xss(s) * ys(s) - yss(s) * xs(s)) / (w * w * w);
}

double AxisymGeometry::h(double s) const {
  const double x = x_of(s);
  if (std::fabs(x) < 1e-8) return kappa(s);  // umbilic pole limit
  return ys(s) / (x * speed(s));
}

AxisymGeometry::ClosestParam AxisymGeometry::closest_param(const Vec& p) const {
  // Coarse scan of the closed meridian, then safeguarded Newton on the
  // optimality condition (p - r(s)) . r'(s) = 0 in each sampled
  // local-minimum bracket. Same search the planar curve surfaces use.
  constexpr int N = 256;
  std::array<double, N> dist2;
  for (int l = 0; l < N; ++l) {
    const Vec d = sub(p, point(kTwoPi * l / N));
    dist2[static_cast<std::size_t>(l)] = dot(d, d);
  }

  auto objective = [&](double s) {
    const Vec d = sub(p, point(s));
    return dot(d, d);
  };
  auto opt_residual = [&](double s, double* deriv) {
    const Vec r{x_of(s), y_of(s), 0.0};
    const Vec rs{xs(s), ys(s), 0.0};
    const Vec rss{xss(s), yss(s), 0.0};
    const Vec d = sub(p, r);
    if (deriv) *deriv = -dot(rs, rs) + dot(d, rss);
    return dot(d, rs);
  };

  struct Candidate {
    double sigma, d2;
  };
  std::vector<Candidate> cands;

  for (int l = 0; l < N; ++l) {
    const double dm = dist2[static_cast<std::size_t>((l + N - 1) % N)];
    const double dp = dist2[static_cast<std::size_t>((l + 1) % N)];
    const double d0 = dist2[static_cast<std::size_t>(l)];
    if (!(d0 <= dm && d0 <= dp)) continue;

    const double hstep = kTwoPi / N;
    double a = kTwoPi * l / N - hstep, b = kTwoPi * l / N + hstep;
    double fa = opt_residual(a, nullptr), fb = opt_residual(b, nullptr);
    double s = kTwoPi * l / N;
    for (int it = 0; it < 100; ++it) {
      double deriv = 0.0;
      const double f = opt_residual(s, &deriv);
      if (std::abs(f) <= 1e-12) break;
      if (fa * fb < 0.0) {  // keep the root bracketed
        if (fa * f > 0.0) {
          a = s;
          fa = f;
        } else {
          b = s;
          fb = f;
        }
      }
      double next = (deriv != 0.0) ? s - f / deriv : 0.5 * (a + b);
      if (!(next > a && next < b)) next = 0.5 * (a + b);
      if (std::abs(next - s) < 1e-15) {
        s = next;
        break;
      }
      s = next;
    }
    cands.push_back({wrap_param(s), objective(s)});
  }

  Candidate best = cands.front();
  for (const Candidate& c : cands)
    if (c.d2 < best.d2) best = c;

  ClosestParam res;
  res.sigma = best.sigma;
  for (const Candidate& c : cands) {
    if (c.d2 - best.d2 <= 1e-12 && std::abs(c.sigma - res.sigma) > 1e-9) {
      res.tie = true;
      if (c.sigma < res.sigma) res.sigma = c.sigma;
    }
  }
  return res;
}

AxisymSurface2D::AxisymSurface2D(const AxisymGeometry& geom, CurveField c_tilde,
                                 CurveField m_tilde, CurveField gamma_tilde)
    : geom_(geom),
      c_tilde_(std::move(c_tilde)),
      m_tilde_(std::move(m_tilde)),
      gamma_tilde_(std::move(gamma_tilde)) {}

Vec AxisymSurface2D::cp(const Vec& x) const {
  return geom_.point(geom_.closest_param(x).sigma);
}

double AxisymSurface2D::phi(const Vec& x) const {
  const double s = geom_.closest_param(x).sigma;
  const Vec d = sub(x, geom_.point(s));
  const double dist = norm(d);
  return dot(d, geom_.normal(s)) >= 0.0 ? dist : -dist;
}

double AxisymSurface2D::kappa(const Vec& x) const {
  return geom_.kappa(geom_.closest_param(x).sigma);
}

double AxisymSurface2D::second_curvature(const Vec& x) const {
  return geom_.h(geom_.closest_param(x).sigma);
}

double AxisymSurface2D::c_field(const Vec& x) const { return c_tilde_(closest_sigma(x)); }

double AxisymSurface2D::m_field(const Vec& x) const { return m_tilde_(closest_sigma(x)); }

double AxisymSurface2D::gamma_exact(const Vec& p) const {
  if (!gamma_tilde_) throw Error("axisym surface has no exact solution attached");
  return gamma_tilde_(closest_sigma(p));
}

double AxisymSurface2D::closest_sigma(const Vec& x) const {
  return geom_.closest_param(x).sigma;
}

namespace {

// Signed distance and the two curvature factors at a meridian-plane point.
struct TubeEval {
  double sigma = 0.0;
  double phi = 0.0;
  double a = 1.0;  // 1 + phi kappa
  double b = 1.0;  // 1 + phi h
};

TubeEval tube_eval(const AxisymGeometry& geom, double x, double y) {
  const Vec p{x, y, 0.0};
  const double s = geom.closest_param(p).sigma;
  const Vec d = sub(p, geom.point(s));
  const double dist = norm(d);
  TubeEval t;
  t.sigma = s;
  t.phi = dot(d, geom.normal(s)) >= 0.0 ? dist : -dist;
  t.a = 1.0 + t.phi * geom.kappa(s);
  t.b = 1.0 + t.phi * geom.h(s);
  if (t.a <= 0.0 || t.b <= 0.0)
    throw Error("axisym embedding left the curvature tube at (" + std::to_string(x) + ", " +
                std::to_string(y) + ")");
  return t;
}

bool on_axis(const GridSpec& grid, double x) { return std::fabs(x) < 0.5 * grid.dx; }

}  // namespace

Vec embed_gradient_axisym(const AxisymGeometry& geom, const GridSpec& grid, const ScalarField& f,
                          int i, int j) {
  const double dx = grid.dx;
  const double x_c = grid.coord(0, i), y_c = grid.coord(1, j);
  const TubeEval t = tube_eval(geom, x_c, y_c);
  double gx = 0.0;
  if (!on_axis(grid, x_c))
    gx = (f(grid.coord(0, i + 1), y_c) - f(grid.coord(0, i - 1), y_c)) / (2.0 * dx);
  const double gy = (f(x_c, grid.coord(1, j + 1)) - f(x_c, grid.coord(1, j - 1))) / (2.0 * dx);
  return {t.a * gx, t.a * gy, 0.0};
}

double embed_laplace_beltrami_axisym(const AxisymGeometry& geom, const GridSpec& grid,
                                     const ScalarField& f, int i, int j) {
  const double dx = grid.dx;
  const double x_c = grid.coord(0, i), y_c = grid.coord(1, j);
  const double x_e = grid.coord(0, i + 1), x_w = grid.coord(0, i - 1);
  const double y_n = grid.coord(1, j + 1), y_s = grid.coord(1, j - 1);

  const TubeEval tc = tube_eval(geom, x_c, y_c);
  const double Tc = tc.a / tc.b;
  auto ratio = [&](double x, double y) {
    const TubeEval t = tube_eval(geom, x, y);
    return t.a / t.b;
  };

  const double fc = f(x_c, y_c);
  double radial;
  if (on_axis(grid, x_c)) {
    // Quadratic-profile limit of (1/x)(x T f_x)_x across the axis.
    radial = 4.0 * Tc * (f(x_e, y_c) - fc) / (dx * dx);
  } else {
    const double ce = 0.5 * (x_e * ratio(x_e, y_c) + x_c * Tc);
    const double cw = 0.5 * (x_c * Tc + x_w * ratio(x_w, y_c));
    radial = (ce * (f(x_e, y_c) - fc) - cw * (fc - f(x_w, y_c))) / (x_c * dx * dx);
  }
  const double cn = 0.5 * (ratio(x_c, y_n) + Tc);
  const double cs = 0.5 * (Tc + ratio(x_c, y_s));
  const double axial = (cn * (f(x_c, y_n) - fc) - cs * (fc - f(x_c, y_s))) / (dx * dx);

  return tc.a * tc.b * (radial + axial);
}

double embed_surface_divergence_axisym(const AxisymGeometry& geom, const GridSpec& grid,
                                       const ScalarField& fx, const ScalarField& fy, int i,
                                       int j) {
  const double dx = grid.dx;
  const double x_c = grid.coord(0, i), y_c = grid.coord(1, j);
  const double x_e = grid.coord(0, i + 1), x_w = grid.coord(0, i - 1);
  const double y_n = grid.coord(1, j + 1), y_s = grid.coord(1, j - 1);

  const TubeEval tc = tube_eval(geom, x_c, y_c);

  // The divergence-form embedding is exact only for the tangential part of
  // the field; the normal part contributes its surface divergence H (f . n)
  // directly, with no differencing needed.
  auto tang = [&](double x, double y) {
    const TubeEval t = tube_eval(geom, x, y);
    const Vec tau = geom.tangent(t.sigma);
    const double ft = fx(x, y) * tau[0] + fy(x, y) * tau[1];
    return std::pair<double, double>{ft * tau[0] / t.b, ft * tau[1] / t.b};
  };

  double radial;
  if (on_axis(grid, x_c)) {
    // Linear-profile limit: the radial component is odd across the axis.
    radial = 2.0 * tang(x_e, y_c).first / dx;
  } else {
    radial = (x_e * tang(x_e, y_c).first - x_w * tang(x_w, y_c).first) / (2.0 * dx * x_c);
  }
  const double axial = (tang(x_c, y_n).second - tang(x_c, y_s).second) / (2.0 * dx);

  const Vec nc = geom.normal(tc.sigma);
  const double fn = fx(x_c, y_c) * nc[0] + fy(x_c, y_c) * nc[1];
  return tc.a * tc.b * (radial + axial) + geom.total_curvature(tc.sigma) * fn;
}

std::vector<double> inextensibility_residual(const AxisymGeometry& geom,
                                             const std::vector<double>& u_tau,
                                             const std::vector<double>& u_n) {
  const std::size_t N = u_tau.size();
  if (N < 4 || u_n.size() != N)
    throw Error("inextensibility residual needs matching sample vectors of length >= 4");
  const double ds = kTwoPi / static_cast<double>(N);

  std::vector<double> res(N);
  for (std::size_t l = 0; l < N; ++l) {
    const std::size_t lp = (l + 1) % N;
    const std::size_t lm = (l + N - 1) % N;
    const double s = ds * static_cast<double>(l);
    const double w = geom.speed(s);
    const double H = geom.total_curvature(s);
    const double x = geom.x_of(s);
    if (std::fabs(x) < 1e-8) {
      // (x u_tau)_s / x -> 2 (u_tau)_s at a pole, since u_tau vanishes there.
      const double dut = (u_tau[lp] - u_tau[lm]) / (2.0 * ds);
      res[l] = 2.0 * dut / w + H * u_n[l];
    } else {
      const double xp = geom.x_of(ds * static_cast<double>(lp));
      const double xm = geom.x_of(ds * static_cast<double>(lm));
      const double d = (xp * u_tau[lp] - xm * u_tau[lm]) / (2.0 * ds);
      res[l] = d / (x * w) + H * u_n[l];
    }
  }
  return res;
}

TensionResult solve_tension_axisym(const AxisymGeometry& geom, const CurveField& c_tilde,
                                   const CurveField& m_tilde, const CurveField& gamma_tilde,
                                   int M) {
  if (M < 8 || M % 2 != 0)
    throw Error("axisym tension solve needs an even M >= 8 so the axis is a grid column");

  AxisymSurface2D surface(geom, c_tilde, m_tilde, gamma_tilde);
  const GridSpec grid = build_grid(2, {-2.0, -2.0, 0.0}, {2.0, 2.0, 0.0}, M);
  const NodeClassification cls = classify_nodes(grid, surface, 3);
  const BandMap band = enumerate_band(cls);
  const double dx = grid.dx;
  const int axis_i = M / 2;

  // One closest-point solve per band node. No tube validity check here: the
  // curvature factors only enter interpolation-node rows, and deep axis nodes
  // can sit on the azimuthal focal set (1 + phi h = x / x_cp vanishes there)
  // while carrying nothing but a side-condition row.
  std::vector<TubeEval> tube(static_cast<std::size_t>(band.size()));
  for (std::int64_t r = 0; r < band.size(); ++r) {
    const auto idx = grid.unflat(band.row_to_node[static_cast<std::size_t>(r)]);
    const Vec p = grid.node(idx[0], idx[1]);
    const double s = geom.closest_param(p).sigma;
    const Vec d = sub(p, geom.point(s));
    const double dist = norm(d);
    TubeEval& t = tube[static_cast<std::size_t>(r)];
    t.sigma = s;
    t.phi = dot(d, geom.normal(s)) >= 0.0 ? dist : -dist;
    t.a = 1.0 + t.phi * geom.kappa(s);
    t.b = 1.0 + t.phi * geom.h(s);
  }

  // Rows live on the x >= 0 part of the band, axis column included.
  std::vector<std::int32_t> band_to_half(static_cast<std::size_t>(band.size()), -1);
  std::vector<std::int64_t> half_to_band;
  std::vector<std::int64_t> half_row_to_node;
  for (std::int64_t r = 0; r < band.size(); ++r) {
    const auto idx = grid.unflat(band.row_to_node[static_cast<std::size_t>(r)]);
    if (idx[0] < axis_i) continue;
    band_to_half[static_cast<std::size_t>(r)] = static_cast<std::int32_t>(half_to_band.size());
    half_to_band.push_back(r);
    half_row_to_node.push_back(band.row_to_node[static_cast<std::size_t>(r)]);
  }

  // Column lookup; the single ghost column at x = -dx folds onto +dx by the
  // even symmetry of scalars across the axis.
  auto half_col = [&](int i, int j) {
    if (i == axis_i - 1) i = axis_i + 1;
    if (i < axis_i) throw Error("axisym assembly reached past the ghost column");
    const std::int32_t r = band.row_of(grid.flat(i, j));
    if (r < 0) throw Error("axisym assembly touched a node outside the band");
    const std::int32_t hc = band_to_half[static_cast<std::size_t>(r)];
    if (hc < 0) throw Error("axisym assembly touched a row outside the half plane");
    return hc;
  };

  const std::int64_t n = static_cast<std::int64_t>(half_to_band.size());
  const double omega = 4.0 / (dx * dx);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(n) * 8);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);

  auto ratio_of = [&](int i, int j) {
    const std::int32_t r = band.row_of(grid.flat(i, j));
    if (r < 0) throw Error("axisym stencil neighbor is missing from the band");
    const TubeEval& t = tube[static_cast<std::size_t>(r)];
    if (t.a <= 0.0 || t.b <= 0.0)
      throw Error("axisym tension stencil left the curvature tube at (" +
                  std::to_string(grid.coord(0, i)) + ", " + std::to_string(grid.coord(1, j)) +
                  "); refine the grid so the band clears the focal set");
    return t.a / t.b;
  };

  for (std::int64_t hr = 0; hr < n; ++hr) {
    const std::int64_t r = half_to_band[static_cast<std::size_t>(hr)];
    const auto idx = grid.unflat(band.row_to_node[static_cast<std::size_t>(r)]);
    const int i = idx[0], j = idx[1];
    const double x_c = grid.coord(0, i);
    const TubeEval& tc = tube[static_cast<std::size_t>(r)];
    const int row = static_cast<int>(hr);

    if (band.label_of_row(r) == NodeLabel::Interpolation) {
      if (tc.a <= 0.0 || tc.b <= 0.0)
        throw Error("axisym tension row left the curvature tube at (" + std::to_string(x_c) +
                    ", " + std::to_string(grid.coord(1, j)) + ")");
      const double scale = tc.a * tc.b;
      const double Tc = tc.a / tc.b;
      double diag = c_tilde(tc.sigma);

      auto couple = [&](int ii, int jj, double coef) {
        trips.emplace_back(row, static_cast<int>(half_col(ii, jj)), -scale * coef);
        diag += scale * coef;
      };

      if (on_axis(grid, x_c)) {
        couple(i + 1, j, 4.0 * Tc / (dx * dx));
      } else {
        const double x_e = grid.coord(0, i + 1), x_w = grid.coord(0, i - 1);
        couple(i + 1, j, 0.5 * (x_e * ratio_of(i + 1, j) + x_c * Tc) / (x_c * dx * dx));
        couple(i - 1, j, 0.5 * (x_c * Tc + x_w * ratio_of(i - 1, j)) / (x_c * dx * dx));
      }
      couple(i, j + 1, 0.5 * (ratio_of(i, j + 1) + Tc) / (dx * dx));
      couple(i, j - 1, 0.5 * (Tc + ratio_of(i, j - 1)) / (dx * dx));

      trips.emplace_back(row, row, diag);
      rhs[hr] = m_tilde(tc.sigma);
    } else {
      // Side-condition row omega (I - E3), zero right-hand side.
      trips.emplace_back(row, row, omega);
      const InterpStencil st = interpolation_weights(grid, geom.point(tc.sigma), cls.q);
      const int per = st.per_axis();
      for (int di = 0; di < per; ++di)
        for (int dj = 0; dj < per; ++dj) {
          const double w = st.w[st.weight_index(di, dj)];
          if (w == 0.0) continue;
          trips.emplace_back(row, static_cast<int>(half_col(st.base[0] + di, st.base[1] + dj)),
                             -omega * w);
        }
    }
  }

  SparseSystem sys;
  sys.A.resize(static_cast<int>(n), static_cast<int>(n));
  sys.A.setFromTriplets(trips.begin(), trips.end());
  sys.A.makeCompressed();
  sys.b = std::move(rhs);
  sys.band = nullptr;
  sys.method = Method::CACP;
  sys.omega = omega;

  const SolveReport rep = solve(sys);

  TensionResult out;
  out.gamma = rep.gamma;
  out.half_row_to_node = std::move(half_row_to_node);
  out.grid = grid;
  out.A = std::move(sys.A);
  out.b = std::move(sys.b);
  out.rel_residual = rep.rel_residual;
  if (gamma_tilde) {
    double sq = 0.0, mx = 0.0;
    for (std::int64_t hr = 0; hr < n; ++hr) {
      const std::int64_t r = half_to_band[static_cast<std::size_t>(hr)];
      const double e = gamma_tilde(tube[static_cast<std::size_t>(r)].sigma) - out.gamma[hr];
      sq += e * e;
      mx = std::max(mx, std::fabs(e));
    }
    out.errors.l2 = std::sqrt(sq / static_cast<double>(n));
    out.errors.linf = mx;
  }
  return out;
}

}  // namespace cacp
