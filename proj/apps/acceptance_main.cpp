// Acceptance suite: ten numbered checks against the published tables and
// operator properties, one PASS/FAIL line each on stdout, exit code equal to
// the number of failed checks. Progress goes to stderr; pass --allow-large
// to extend check 5 with the memory-bound sphere M=320 row.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "cacp/assembly.hpp"
#include "cacp/axisym.hpp"
#include "cacp/bench.hpp"
#include "cacp/solver.hpp"

using namespace cacp;

namespace {

double now_s() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void note(const char* fmt, ...) {
  va_list ap;
  va_start(ap, fmt);
  std::fprintf(stderr, "[accept] ");
  std::vfprintf(stderr, fmt, ap);
  std::fprintf(stderr, "\n");
  std::fflush(stderr);
  va_end(ap);
}

std::string fmt(const char* spec, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, spec);
  std::vsnprintf(buf, sizeof(buf), spec, ap);
  va_end(ap);
  return buf;
}

struct Line {
  bool pass = false;
  std::string text;
};

// least-squares slope of log(err) against log(1/M): the observed order
double lsq_order(const std::vector<int>& sizes, const std::vector<double>& errs) {
  const int n = static_cast<int>(sizes.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = -std::log(static_cast<double>(sizes[i]));
    const double y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ------------------------------------------------------------------
// shared evidence: one solve pass per (surface, M), reused by the checks

struct SizeRow {
  int M = 0;
  double l2 = 0, linf = 0, defect = 0;
  std::int64_t nnz_cacp = 0, nnz_cp = 0;
  double cond_cacp = 0, cond_cp = 0;  // 0 when not estimated
  double cp_l2 = 0, cp_linf = 0;      // filled at the finest grid only
};

struct Evidence {
  std::vector<SizeRow> rows;
  double table_seconds = 0;  // cacp classify+assemble+solve+norms only
};

bool wants(const std::vector<int>& list, int M) {
  for (int v : list)
    if (v == M) return true;
  return false;
}

Evidence gather(const Surface& surf, const char* name, const std::vector<int>& sizes,
                const std::vector<int>& cond_sizes) {
  Evidence ev;
  for (int M : sizes) {
    SizeRow row;
    row.M = M;
    const double t0 = now_s();
    const GridSpec grid = surf.dim() == 3 ? build_grid(3, {-2, -2, -2}, {2, 2, 2}, M)
                                          : build_grid(2, {-2, -2, 0}, {2, 2, 0}, M);
    const NodeClassification cls = classify_nodes(grid, surf);
    const BandMap band = enumerate_band(cls);
    {
      SparseSystem sys = assemble(Method::CACP, grid, surf, band);
      const SolveReport rep = solve(sys);
      const ErrorNorms e = error_norms(rep.gamma, surf, band);
      row.l2 = e.l2;
      row.linf = e.linf;
      ev.table_seconds += now_s() - t0;
      row.nnz_cacp = sys.nnz();
      row.defect = side_condition_defect(grid, surf, band, rep.gamma);
      note("%s M=%d cacp: l2=%.6e linf=%.6e defect=%.3e (%.1fs)", name, M, e.l2, e.linf,
           row.defect, now_s() - t0);
      if (wants(cond_sizes, M)) {
        row.cond_cacp = estimate_cond1(sys.A);
        note("%s M=%d cacp condest=%.4e", name, M, row.cond_cacp);
      }
    }
    {
      SparseSystem sys = assemble(Method::CP, grid, surf, band);
      row.nnz_cp = sys.nnz();
      if (M == sizes.back()) {
        const SolveReport rep = solve(sys);
        const ErrorNorms e = error_norms(rep.gamma, surf, band);
        row.cp_l2 = e.l2;
        row.cp_linf = e.linf;
        note("%s M=%d cp: l2=%.6e linf=%.6e", name, M, e.l2, e.linf);
      }
      if (wants(cond_sizes, M)) {
        row.cond_cp = estimate_cond1(sys.A);
        note("%s M=%d cp condest=%.4e", name, M, row.cond_cp);
      }
    }
    ev.rows.push_back(row);
  }
  return ev;
}

// ------------------------------------------------------------------
// printed reference values

struct TableRef {
  int M;
  double l2, linf;
};
const std::vector<TableRef> kCircleTable = {{40, 6.529582e-02, 1.530827e-01},
                                            {80, 1.536154e-02, 2.676026e-02},
                                            {160, 3.756485e-03, 6.485326e-03},
                                            {320, 9.423799e-04, 1.593578e-03},
                                            {640, 2.358238e-04, 3.977083e-04}};
const std::vector<TableRef> kSphereTable = {{40, 7.775448e-03, 2.057475e-02},
                                            {80, 1.835869e-03, 4.032997e-03},
                                            {160, 4.496780e-04, 9.728364e-04}};
const TableRef kSphere320 = {320, 1.118339e-04, 2.420839e-04};

const std::vector<double> kCircleRatio2 = {4.250604, 4.089339, 3.986168, 3.996119};
const std::vector<double> kCircleRatioInf = {5.720524, 4.126278, 4.069663, 4.006902};
const std::vector<double> kSphereRatio2 = {4.235295, 4.082630};
const std::vector<double> kSphereRatioInf = {5.101603, 4.145606};

struct CondRef {
  int M;
  double cp, cacp;
};
const std::vector<CondRef> kCircleCond = {{80, 2.5643243749762e4, 1.8254602642126e4},
                                          {160, 1.01872387028823e5, 0.75342598827694e5},
                                          {320, 4.09613369447210e5, 3.10202797309217e5}};
const std::vector<CondRef> kCloverCond = {{80, 2.7552687828114e4, 2.4622776065804e4},
                                          {160, 1.11806458152813e5, 0.88592266379691e5},
                                          {320, 4.23433628575171e5, 3.14586335519011e5}};
const std::vector<CondRef> kSphereCond = {{40, 1.8703980422981e4, 0.95450358517746e4},
                                          {80, 7.1973688729913e4, 3.42552441831559e4},
                                          {160, 2.88559823145381e5, 1.404234973213166e5}};

// ------------------------------------------------------------------
// checks 1..7: table and matrix-family comparisons

Line check_table(const Evidence& ev, const std::vector<TableRef>& refs, double seconds,
                 double limit_s, const char* what, const std::string& extra) {
  int pass_cells = 0, cells = 0;
  double worst = 0;
  std::string worst_at;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const double dev2 = ev.rows[i].l2 / refs[i].l2 - 1.0;
    const double devi = ev.rows[i].linf / refs[i].linf - 1.0;
    cells += 2;
    if (std::abs(dev2) <= 0.02) ++pass_cells;
    if (std::abs(devi) <= 0.02) ++pass_cells;
    if (std::abs(dev2) > std::abs(worst)) {
      worst = dev2;
      worst_at = fmt("l2 M=%d", refs[i].M);
    }
    if (std::abs(devi) > std::abs(worst)) {
      worst = devi;
      worst_at = fmt("linf M=%d", refs[i].M);
    }
  }
  Line ln;
  const bool time_ok = limit_s <= 0 || seconds < limit_s;
  ln.pass = pass_cells == cells && time_ok;
  ln.text = fmt("%s: %d/%d cells within 2%% (worst %+.2f%% at %s)", what, pass_cells, cells,
                100 * worst, worst_at.c_str());
  if (limit_s > 0) ln.text += fmt("; table time %.1fs (limit %.0fs)", seconds, limit_s);
  ln.text += extra;
  return ln;
}

Line check_ratios(const Evidence& circle, const Evidence& sphere, const Evidence& clover) {
  double worst = 0;
  std::string worst_at;
  auto compare = [&](const Evidence& ev, const std::vector<double>& ref2,
                     const std::vector<double>& refi, const char* name) {
    for (std::size_t i = 0; i < ref2.size(); ++i) {
      const double r2 = ev.rows[i].l2 / ev.rows[i + 1].l2;
      const double ri = ev.rows[i].linf / ev.rows[i + 1].linf;
      if (std::abs(r2 - ref2[i]) > std::abs(worst)) {
        worst = r2 - ref2[i];
        worst_at = fmt("%s l2 M=%d", name, ev.rows[i + 1].M);
      }
      if (std::abs(ri - refi[i]) > std::abs(worst)) {
        worst = ri - refi[i];
        worst_at = fmt("%s linf M=%d", name, ev.rows[i + 1].M);
      }
    }
  };
  compare(circle, kCircleRatio2, kCircleRatioInf, "circle");
  compare(sphere, kSphereRatio2, kSphereRatioInf, "sphere");

  // clover order: the coarsest grid sits against the tube-degeneracy limit
  // at the notch and is pre-asymptotic, so the observed order is fit over
  // the three finest grids
  std::vector<int> ms;
  std::vector<double> e2, ei;
  for (std::size_t i = 1; i < clover.rows.size(); ++i) {
    ms.push_back(clover.rows[i].M);
    e2.push_back(clover.rows[i].l2);
    ei.push_back(clover.rows[i].linf);
  }
  const double o2 = lsq_order(ms, e2), oi = lsq_order(ms, ei);

  Line ln;
  ln.pass = std::abs(worst) <= 0.3 && o2 >= 1.8 && o2 <= 2.2 && oi >= 1.8 && oi <= 2.2;
  ln.text = fmt(
      "printed ratios: worst dev %+.3f at %s (limit 0.3); clover order l2 %.2f, linf %.2f over "
      "M=%d..%d (window [1.8,2.2])",
      worst, worst_at.c_str(), o2, oi, ms.front(), ms.back());
  return ln;
}

Line check_error_ratios(const Evidence& circle, const Evidence& clover, const Evidence& sphere) {
  struct Band {
    const char* name;
    const Evidence* ev;
    double mid2, tol2, midi, toli;
  };
  const Band bands[] = {{"circle", &circle, 0.62, 0.05, 0.68, 0.05},
                        {"clover", &clover, 0.65, 0.05, 0.80, 0.07},
                        {"sphere", &sphere, 0.60, 0.05, 0.56, 0.05}};
  Line ln;
  ln.pass = true;
  ln.text = "cacp/cp error ratios at finest M:";
  for (const Band& b : bands) {
    const SizeRow& r = b.ev->rows.back();
    const double q2 = r.l2 / r.cp_l2, qi = r.linf / r.cp_linf;
    const bool ok =
        std::abs(q2 - b.mid2) <= b.tol2 && std::abs(qi - b.midi) <= b.toli;
    ln.pass = ln.pass && ok;
    ln.text += fmt(" %s %.3f/%.3f (want %.2f+-%.2f, %.2f+-%.2f)", b.name, q2, qi, b.mid2, b.tol2,
                   b.midi, b.toli);
  }
  return ln;
}

Line check_nnz(const Evidence& circle, const Evidence& clover, const Evidence& sphere) {
  struct Fit {
    const char* name;
    const Evidence* ev;
    int degree;
    double ref_cp, ref_cacp;
  };
  const Fit fits[] = {{"circle", &circle, 1, 177, 88},
                      {"clover", &clover, 1, 217, 109},
                      {"sphere", &sphere, 2, 386, 118}};
  Line ln;
  ln.pass = true;
  ln.text = "nnz growth fits:";
  for (const Fit& f : fits) {
    std::vector<std::pair<int, std::int64_t>> cp_pts, cacp_pts;
    for (const SizeRow& r : f.ev->rows) {
      cp_pts.emplace_back(r.M, r.nnz_cp);
      cacp_pts.emplace_back(r.M, r.nnz_cacp);
    }
    const double scp = fit_nnz_growth(cp_pts, f.degree).slope;
    const double scacp = fit_nnz_growth(cacp_pts, f.degree).slope;
    const bool ok = std::abs(scp / f.ref_cp - 1.0) <= 0.10 &&
                    std::abs(scacp / f.ref_cacp - 1.0) <= 0.10;
    ln.pass = ln.pass && ok;
    ln.text += fmt(" %s %.1f/%.1f (want %g/%g +-10%%)", f.name, scp, scacp, f.ref_cp, f.ref_cacp);
  }
  return ln;
}

Line check_cond(const Evidence& circle, const Evidence& clover, const Evidence& sphere) {
  double worst = 1.0;
  std::string worst_at;
  auto compare = [&](const Evidence& ev, const std::vector<CondRef>& refs, const char* name) {
    for (const CondRef& ref : refs) {
      for (const SizeRow& r : ev.rows) {
        if (r.M != ref.M) continue;
        const std::pair<double, const char*> factors[] = {{r.cond_cp / ref.cp, "cp"},
                                                          {r.cond_cacp / ref.cacp, "cacp"}};
        for (const auto& [f, meth] : factors) {
          const double dev = f > 1.0 ? f : 1.0 / f;
          if (dev > worst) {
            worst = dev;
            worst_at = fmt("%s %s M=%d", name, meth, ref.M);
          }
        }
      }
    }
  };
  compare(circle, kCircleCond, "circle");
  compare(clover, kCloverCond, "clover");
  compare(sphere, kSphereCond, "sphere");
  Line ln;
  ln.pass = worst <= 3.0;
  ln.text = fmt("condition estimates vs printed values: worst factor x%.2f at %s (limit x3)",
                worst, worst_at.c_str());
  return ln;
}

Line check_defect(const Evidence& circle, const Evidence& sphere) {
  auto order_of = [](const Evidence& ev) {
    std::vector<int> ms;
    std::vector<double> ds;
    for (const SizeRow& r : ev.rows) {
      ms.push_back(r.M);
      ds.push_back(r.defect);
    }
    return lsq_order(ms, ds);
  };
  const double oc = order_of(circle), os = order_of(sphere);
  Line ln;
  ln.pass = oc >= 1.8 && os >= 1.8;
  ln.text = fmt("side-condition defect order: circle %.2f, sphere %.2f (need >= 1.8)", oc, os);
  return ln;
}

// ------------------------------------------------------------------
// check 8: interpolation exactness and row sums

Line check_interp() {
  double worst_mono = 0;
  for (int dim : {2, 3}) {
    const GridSpec grid = dim == 3 ? build_grid(3, {-2, -2, -2}, {2, 2, 2}, 40)
                                   : build_grid(2, {-2, -2, 0}, {2, 2, 0}, 40);
    std::uint64_t state = 0x243F6A8885A308D3ull + dim;
    auto unit = [&]() {  // deterministic points in (-1.8, 1.8)
      state = state * 6364136223846793005ull + 1442695040888963407ull;
      return 3.6 * (static_cast<double>(state >> 11) / 9007199254740992.0) - 1.8;
    };
    for (int pt = 0; pt < 20; ++pt) {
      Vec p = {unit(), unit(), dim == 3 ? unit() : 0.0};
      const InterpStencil st = interpolation_weights(grid, p, 3);
      const int kmax = dim == 3 ? 4 : 1;
      for (int a = 0; a <= 3; ++a) {
        for (int b = 0; b <= 3; ++b) {
          for (int c = 0; c <= 3 * (dim - 2); ++c) {
            double sum = 0;
            for (int di = 0; di < 4; ++di) {
              for (int dj = 0; dj < 4; ++dj) {
                for (int dk = 0; dk < kmax; ++dk) {
                  const Vec x = grid.node(st.base[0] + di, st.base[1] + dj, st.base[2] + dk);
                  sum += st.w[st.weight_index(di, dj, dk)] * std::pow(x[0], a) *
                         std::pow(x[1], b) * (dim == 3 ? std::pow(x[2], c) : 1.0);
                }
              }
            }
            const double exact =
                std::pow(p[0], a) * std::pow(p[1], b) * (dim == 3 ? std::pow(p[2], c) : 1.0);
            worst_mono = std::max(worst_mono, std::abs(sum - exact));
          }
        }
      }
    }
  }

  // row sums of E1/E3 at the closest points of an actual band
  double worst_sum = 0;
  for (int dim : {2, 3}) {
    const int M = dim == 3 ? 40 : 80;
    const GridSpec grid = dim == 3 ? build_grid(3, {-2, -2, -2}, {2, 2, 2}, M)
                                   : build_grid(2, {-2, -2, 0}, {2, 2, 0}, M);
    const CircleSurface circ;
    const SphereSurface sph;
    const Surface& surf = dim == 3 ? static_cast<const Surface&>(sph) : circ;
    const NodeClassification cls = classify_nodes(grid, surf);
    const BandMap band = enumerate_band(cls);
    for (std::int64_t r = 0; r < band.size(); ++r) {
      const auto idx = grid.unflat(band.row_to_node[static_cast<std::size_t>(r)]);
      const Vec cp = surf.cp(grid.node(idx[0], idx[1], idx[2]));
      for (int q : {1, 3}) {
        const InterpStencil st = interpolation_weights(grid, cp, q);
        double s = 0;
        for (double w : st.w) s += w;
        worst_sum = std::max(worst_sum, std::abs(s - 1.0));
      }
    }
  }

  Line ln;
  ln.pass = worst_mono <= 1e-12 && worst_sum <= 1e-12;
  ln.text = fmt("interpolation: cubic monomial defect %.2e, E1/E3 row-sum defect %.2e (limit "
                "1e-12)",
                worst_mono, worst_sum);
  return ln;
}

// ------------------------------------------------------------------
// check 9: axisymmetric suite

Line check_axisym() {
  const double pi = 3.14159265358979323846;
  const SphereMeridian sph;
  const EllipsoidMeridian ell(0.5, 1.0);

  // (a) simplified vs unsimplified inextensibility forms on the ellipsoid
  std::vector<int> ns = {64, 128, 256, 512};
  std::vector<double> diffs;
  for (int N : ns) {
    std::vector<double> ut(N), un(N);
    for (int l = 0; l < N; ++l) {
      const double s = 2.0 * pi * l / N;
      ut[l] = std::sin(s) * (1.3 + std::cos(2 * s)) + 0.7 * std::sin(3 * s);
      un[l] = std::cos(s) + 0.4 * std::cos(2 * s) - 0.2;
    }
    const std::vector<double> res = inextensibility_residual(ell, ut, un);
    const double ds = 2.0 * pi / N;
    double mx = 0;
    for (int l = 0; l < N; ++l) {
      const double s = ds * l;
      if (std::abs(ell.x_of(s)) < 1e-8) continue;  // the 1/x form is singular at the poles
      const int lp = (l + 1) % N, lm = (l + N - 1) % N;
      auto uvec = [&](int idx) {
        const double ss = ds * idx;
        return add(scale(ut[idx], ell.tangent(ss)), scale(un[idx], ell.normal(ss)));
      };
      const Vec us = scale(1.0 / (2.0 * ds), sub(uvec(lp), uvec(lm)));
      const double w = ell.speed(s);
      const double unsimpl = dot(us, ell.tangent(s)) / w +
                             (ut[l] * ell.xs(s) + un[l] * ell.ys(s)) / (w * ell.x_of(s));
      mx = std::max(mx, std::abs(res[l] - unsimpl));
    }
    diffs.push_back(mx);
  }
  const double order_id = lsq_order(ns, diffs);

  // (b) rigid translation along the axis is inextensible
  std::vector<int> nt = {128, 256, 512};
  std::vector<double> tres;
  for (int N : nt) {
    std::vector<double> ut(N), un(N);
    for (int l = 0; l < N; ++l) {
      const double s = 2.0 * pi * l / N;
      ut[l] = ell.ys(s) / ell.speed(s);
      un[l] = -ell.xs(s) / ell.speed(s);
    }
    const std::vector<double> res = inextensibility_residual(ell, ut, un);
    double mx = 0;
    for (double r : res) mx = std::max(mx, std::abs(r));
    tres.push_back(mx);
  }
  const double order_tr = lsq_order(nt, tres);

  // (c) u = n on the unit sphere: residual is the total curvature 2
  double udev = 0;
  {
    const int N = 512;
    std::vector<double> ut(N, 0.0), un(N, 1.0);
    for (double r : inextensibility_residual(sph, ut, un))
      udev = std::max(udev, std::abs(r - 2.0));
  }

  // (d) manufactured tension solve gamma = y, m = 6y on the unit sphere
  std::vector<int> ms = {40, 80, 160};
  std::vector<double> terr;
  for (int M : ms) {
    const TensionResult res = solve_tension_axisym(
        sph, [](double) { return 4.0; }, [&](double s) { return -6.0 * std::cos(s); },
        [&](double s) { return -std::cos(s); }, M);
    terr.push_back(res.errors.l2);
    note("axisym tension M=%d l2=%.4e", M, res.errors.l2);
  }
  const double order_tension = lsq_order(ms, terr);

  Line ln;
  ln.pass = order_id >= 1.8 && order_tr >= 1.8 && udev <= 0.02 && order_tension >= 1.8;
  ln.text = fmt("axisym: identity order %.2f, translation order %.2f (need >= 1.8); u=n residual "
                "dev %.1e (limit 0.02); tension order %.2f (need >= 1.8)",
                order_id, order_tr, udev, order_tension);
  return ln;
}

// ------------------------------------------------------------------
// check 10: assembled matrices vs a dense brute-force construction (M = 12)

// product-form Lagrange weights, coded independently of the library's
// barycentric evaluation
void oracle_axis(double p, double t0, double dx, int q, double* w) {
  for (int r = 0; r <= q; ++r) {
    double prod = 1.0;
    for (int s = 0; s <= q; ++s) {
      if (s == r) continue;
      prod *= (p - (t0 + s * dx)) / ((t0 + r * dx) - (t0 + s * dx));
    }
    w[r] = prod;
  }
}

Eigen::MatrixXd oracle_interp(const GridSpec& grid, const BandMap& band,
                              const std::vector<Vec>& targets, int q) {
  const Eigen::Index n = static_cast<Eigen::Index>(band.size());
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(targets.size()), n);
  for (std::size_t r = 0; r < targets.size(); ++r) {
    const Vec& p = targets[r];
    std::array<int, 2> base;
    std::array<std::vector<double>, 2> w;
    for (int a = 0; a < 2; ++a) {
      int cell = static_cast<int>(std::floor((p[a] - grid.lower[a]) / grid.dx));
      cell = std::min(std::max(cell, 0), grid.M - 1);
      base[a] = std::min(std::max(cell - (q - 1) / 2, 0), grid.M - q);
      w[a].resize(static_cast<std::size_t>(q) + 1);
      oracle_axis(p[a], grid.coord(a, base[a]), grid.dx, q, w[a].data());
    }
    for (int di = 0; di <= q; ++di) {
      for (int dj = 0; dj <= q; ++dj) {
        const std::int32_t col = band.row_of(grid.flat(base[0] + di, base[1] + dj));
        if (col < 0) throw Error("oracle stencil left the band");
        E(static_cast<Eigen::Index>(r), col) += w[0][di] * w[1][dj];
      }
    }
  }
  return E;
}

Line check_oracle() {
  const CircleSurface surf;
  const GridSpec grid = build_grid(2, {-2, -2, 0}, {2, 2, 0}, 12);
  const NodeClassification cls = classify_nodes(grid, surf);
  const BandMap band = enumerate_band(cls);
  const Eigen::Index n = static_cast<Eigen::Index>(band.size());
  const double dx2 = grid.dx * grid.dx;
  const double omega = 4.0 / dx2;

  std::vector<Vec> cps;
  std::vector<Vec> nodes;
  for (std::int64_t r = 0; r < band.size(); ++r) {
    const auto idx = grid.unflat(band.row_to_node[static_cast<std::size_t>(r)]);
    nodes.push_back(grid.node(idx[0], idx[1]));
    cps.push_back(surf.cp(nodes.back()));
  }
  const Eigen::MatrixXd E1 = oracle_interp(grid, band, cps, 1);
  const Eigen::MatrixXd E3 = oracle_interp(grid, band, cps, 3);

  // dense closest point operator: C - E1 L + omega (I - E3)
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  for (std::int64_t r = 0; r < band.size(); ++r) {
    C(r, r) = surf.c_field(nodes[static_cast<std::size_t>(r)]);
    if (band.label_of_row(r) == NodeLabel::Edge) {
      L(r, r) = 1.0;
      continue;
    }
    const auto idx = grid.unflat(band.row_to_node[static_cast<std::size_t>(r)]);
    L(r, r) = -4.0 / dx2;
    const int off[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (const auto& d : off)
      L(r, band.row_of(grid.flat(idx[0] + d[0], idx[1] + d[1]))) += 1.0 / dx2;
  }
  const Eigen::MatrixXd cp_dense =
      C - E1 * L + omega * (Eigen::MatrixXd::Identity(n, n) - E3);

  // dense curvature-augmented operator: side-condition rows at edge nodes,
  // c - (1+phi kappa) div((1+phi kappa)~ grad) rows elsewhere, node-averaged
  // face coefficients
  auto tube = [&](const Vec& x) { return 1.0 + surf.phi(x) * surf.kappa(x); };
  Eigen::MatrixXd cacp_dense = Eigen::MatrixXd::Zero(n, n);
  for (std::int64_t r = 0; r < band.size(); ++r) {
    if (band.label_of_row(r) == NodeLabel::Edge) {
      cacp_dense(r, r) += omega;
      for (Eigen::Index c = 0; c < n; ++c) cacp_dense(r, c) -= omega * E3(r, c);
      continue;
    }
    const auto idx = grid.unflat(band.row_to_node[static_cast<std::size_t>(r)]);
    const Vec x0 = nodes[static_cast<std::size_t>(r)];
    const double t0 = tube(x0);
    double center = surf.c_field(x0);
    const int off[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (const auto& d : off) {
      const Vec xn = grid.node(idx[0] + d[0], idx[1] + d[1]);
      const double tf = 0.5 * (t0 + tube(xn));
      cacp_dense(r, band.row_of(grid.flat(idx[0] + d[0], idx[1] + d[1]))) -= t0 * tf / dx2;
      center += t0 * tf / dx2;
    }
    cacp_dense(r, r) += center;
  }

  const SparseSystem cp_sys = assemble_cp(grid, surf, band);
  const SparseSystem cacp_sys = assemble_cacp_2d(grid, surf, band, CoeffVariant::NodeAverage);
  const double dev_cp = (Eigen::MatrixXd(cp_sys.A) - cp_dense).cwiseAbs().maxCoeff();
  const double dev_cacp = (Eigen::MatrixXd(cacp_sys.A) - cacp_dense).cwiseAbs().maxCoeff();

  Line ln;
  ln.pass = dev_cp <= 1e-12 && dev_cacp <= 1e-12;
  ln.text = fmt("M=12 circle dense oracle: cp matrix dev %.2e, cacp dev %.2e over %lld rows "
                "(limit 1e-12)",
                dev_cp, dev_cacp, static_cast<long long>(band.size()));
  return ln;
}

}  // namespace

int main(int argc, char** argv) {
  bool allow_large = false;
  for (int i = 1; i < argc; ++i)
    if (std::string(argv[i]) == "--allow-large") allow_large = true;

  const CircleSurface circle;
  const CloverSurface clover;
  const SphereSurface sphere;

  note("gathering circle evidence");
  const Evidence ev_circle = gather(circle, "circle", {40, 80, 160, 320, 640}, {80, 160, 320});
  note("gathering clover evidence");
  const Evidence ev_clover = gather(clover, "clover", {80, 160, 320, 640}, {80, 160, 320});
  note("gathering sphere evidence (M=160 direct solves take several minutes)");
  const Evidence ev_sphere = gather(sphere, "sphere", {40, 80, 160}, {40, 80, 160});

  std::string extra5;
  bool extra5_ok = true;
  if (allow_large) {
    note("sphere M=320 (allow-large): iterative solve");
    const GridSpec grid = build_grid(3, {-2, -2, -2}, {2, 2, 2}, 320);
    const NodeClassification cls = classify_nodes(grid, sphere);
    const BandMap band = enumerate_band(cls);
    SparseSystem sys = assemble(Method::CACP, grid, sphere, band);
    const ErrorNorms e = error_norms(solve(sys).gamma, sphere, band);
    const double d2 = e.l2 / kSphere320.l2 - 1.0, di = e.linf / kSphere320.linf - 1.0;
    extra5_ok = std::abs(d2) <= 0.02 && std::abs(di) <= 0.02;
    extra5 = fmt("; M=320 dev l2 %+.2f%%, linf %+.2f%%", 100 * d2, 100 * di);
  } else {
    extra5 = "; M=320 skipped (pass --allow-large)";
  }

  note("axisym suite");
  Line c9 = check_axisym();
  note("interpolation checks");
  Line c8 = check_interp();
  note("dense oracle check");
  Line c10 = check_oracle();

  Line lines[10];
  lines[0] = check_table(ev_circle, kCircleTable, ev_circle.table_seconds, 120.0,
                         "circle error table", "");
  lines[1] = check_ratios(ev_circle, ev_sphere, ev_clover);
  lines[2] = check_error_ratios(ev_circle, ev_clover, ev_sphere);
  lines[3] = check_nnz(ev_circle, ev_clover, ev_sphere);
  lines[4] = check_table(ev_sphere, kSphereTable, 0, 0, "sphere error table", extra5);
  lines[4].pass = lines[4].pass && extra5_ok;
  lines[5] = check_cond(ev_circle, ev_clover, ev_sphere);
  lines[6] = check_defect(ev_circle, ev_sphere);
  lines[7] = c8;
  lines[8] = c9;
  lines[9] = c10;

  int failures = 0;
  for (int i = 0; i < 10; ++i) {
    if (!lines[i].pass) ++failures;
    std::printf("criterion %2d %s %s\n", i + 1, lines[i].pass ? "PASS" : "FAIL",
                lines[i].text.c_str());
  }
  std::printf("result: %d of 10 criteria passed\n", 10 - failures);
  return failures;
}
