#include "cacp/bench.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <utility>

#include "cacp/io.hpp"

namespace cacp {
namespace {

// Both orderings of the axisym names are accepted on input; the canonical
// spelling is axisym-<shape>.
std::string canonical(const std::string& name) {
  if (name == "sphere-axisym") return "axisym-sphere";
  if (name == "ellipsoid-axisym") return "axisym-ellipsoid";
  return name;
}

const AxisymGeometry& named_geometry(const std::string& canon) {
  static const SphereMeridian sphere;
  static const EllipsoidMeridian ellipsoid(0.5, 1.0);
  if (canon == "axisym-sphere") return sphere;
  return ellipsoid;
}

struct AxisymProblem {
  CurveField c, m, gamma;
};

// Manufactured tension problem on a surface of revolution: gamma = y with
// c = H^2. Since Delta_s of a coordinate function is -H n on the surface,
// m = H^2 y + H n_y; on the unit sphere this is the familiar m = 6y.
AxisymProblem axisym_problem(const AxisymGeometry& geom) {
  AxisymProblem p;
  p.c = [&geom](double s) {
    const double H = geom.total_curvature(s);
    return H * H;
  };
  p.m = [&geom](double s) {
    const double H = geom.total_curvature(s);
    return H * (H * geom.y_of(s) + geom.normal(s)[1]);
  };
  p.gamma = [&geom](double s) { return geom.y_of(s); };
  return p;
}

const char* method_name(Method m) { return m == Method::CP ? "cp" : "cacp"; }

GridSpec grid_for(int dim, int M) {
  if (dim == 3) return build_grid(3, {-2.0, -2.0, -2.0}, {2.0, 2.0, 2.0}, M);
  return build_grid(2, {-2.0, -2.0, 0.0}, {2.0, 2.0, 0.0}, M);
}

void check_size(int M) {
  if (M < 40 || M % 4 != 0)
    throw Error("grid size M=" + std::to_string(M) +
                " is invalid: sizes must be >= 40 and multiples of 4");
}

bool needs_large_flag(const std::string& canon, int M) { return canon == "sphere" && M >= 320; }

void check_large(const RunConfig& cfg, const std::string& canon, int M) {
  if (needs_large_flag(canon, M) && !cfg.allow_large)
    throw Error("sphere grids with M >= 320 are memory-bound and gated; pass --allow-large");
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// One grid of the model problem. dump, when non-null, requests matrix and
// band dumps into dump->out_dir.
ConvRow run_one(const std::string& canon, Method method, int M, CoeffVariant variant,
                bool with_cond, const RunConfig* dump) {
  ConvRow row;
  row.M = M;
  const auto tic = std::chrono::steady_clock::now();
  try {
    check_size(M);
    const bool dumping = dump && dump->with_matrices && !dump->out_dir.empty();
    if (dumping) std::filesystem::create_directories(dump->out_dir);
    const std::string tag = canon + "-" + method_name(method) + "-M" + std::to_string(M);
    if (is_axisym(canon)) {
      if (method != Method::CACP)
        throw Error("axisym tension solves support only the cacp method");
      const AxisymGeometry& geom = named_geometry(canon);
      const AxisymProblem prob = axisym_problem(geom);
      TensionResult res = solve_tension_axisym(geom, prob.c, prob.m, prob.gamma, M);
      row.l2 = res.errors.l2;
      row.linf = res.errors.linf;
      row.nnz = res.A.nonZeros();
      if (with_cond) row.cond = estimate_cond1(res.A);
      if (dumping) {
        save_matrix_market(res.A, join_path(dump->out_dir, tag + ".mtx"));
        std::string rows = "i,j,row\n";
        for (std::size_t r = 0; r < res.half_row_to_node.size(); ++r) {
          const auto idx = res.grid.unflat(res.half_row_to_node[r]);
          rows += std::to_string(idx[0]) + "," + std::to_string(idx[1]) + "," +
                  std::to_string(r) + "\n";
        }
        write_text_file(join_path(dump->out_dir, canon + "-M" + std::to_string(M) + "-band.csv"),
                        rows);
      }
    } else {
      std::unique_ptr<Surface> surf = make_surface(canon);
      const GridSpec grid = grid_for(surf->dim(), M);
      const NodeClassification cls = classify_nodes(grid, *surf);
      const BandMap band = enumerate_band(cls);
      SparseSystem sys = assemble(method, grid, *surf, band, variant);
      const SolveReport rep = solve(sys);
      const ErrorNorms e = error_norms(rep.gamma, *surf, band);
      row.l2 = e.l2;
      row.linf = e.linf;
      row.nnz = sys.nnz();
      if (with_cond) row.cond = estimate_cond1(sys.A);
      if (dumping) {
        save_matrix_market(sys.A, join_path(dump->out_dir, tag + ".mtx"));
        write_band_csv(band,
                       join_path(dump->out_dir, canon + "-M" + std::to_string(M) + "-band.csv"));
      }
    }
    row.ok = true;
  } catch (const std::exception& ex) {
    row.ok = false;
    row.error = ex.what();
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - tic).count();
  return row;
}

std::vector<int> sizes_for(const RunConfig& cfg, const std::string& canon) {
  return cfg.sizes.empty() ? default_sizes(canon) : cfg.sizes;
}

}  // namespace

bool ConvergenceReport::all_ok() const {
  if (rows.empty()) return false;
  for (const ConvRow& r : rows)
    if (!r.ok) return false;
  return true;
}

std::vector<int> default_sizes(const std::string& surface) {
  const std::string canon = canonical(surface);
  if (canon == "circle") return {40, 80, 160, 320, 640};
  if (canon == "clover") return {80, 160, 320, 640};  // coarser grids are pre-asymptotic
                                                      // at the notch curvature
  if (canon == "sphere") return {40, 80, 160};        // 320 is flag-gated
  if (canon == "axisym-sphere") return {40, 80, 160};
  if (canon == "axisym-ellipsoid") return {80, 160, 320};  // focal set clears at M >~ 48
  throw Error("unknown surface '" + surface + "'");
}

std::unique_ptr<Surface> make_surface(const std::string& name) {
  const std::string canon = canonical(name);
  if (canon == "circle") return std::make_unique<CircleSurface>();
  if (canon == "clover") return std::make_unique<CloverSurface>();
  if (canon == "sphere") return std::make_unique<SphereSurface>();
  if (is_axisym(canon)) {
    const AxisymGeometry& geom = named_geometry(canon);
    AxisymProblem prob = axisym_problem(geom);
    return std::make_unique<AxisymSurface2D>(geom, std::move(prob.c), std::move(prob.m),
                                             std::move(prob.gamma));
  }
  throw Error("unknown surface '" + name +
              "' (expected circle, clover, sphere, axisym-sphere or axisym-ellipsoid)");
}

bool is_axisym(const std::string& surface) {
  const std::string canon = canonical(surface);
  return canon == "axisym-sphere" || canon == "axisym-ellipsoid";
}

ConvRow run_single(const std::string& surface, Method method, int M, CoeffVariant variant,
                   bool with_cond) {
  return run_one(canonical(surface), method, M, variant, with_cond, nullptr);
}

ConvergenceReport run_convergence(const RunConfig& cfg) {
  const std::string canon = canonical(cfg.surface);
  ConvergenceReport rep;
  rep.surface = canon;
  rep.method = cfg.method;
  const ConvRow* prev = nullptr;
  for (int M : sizes_for(cfg, canon)) {
    ConvRow row;
    try {
      check_large(cfg, canon, M);
      row = run_one(canon, cfg.method, M, cfg.variant, cfg.with_cond, &cfg);
    } catch (const std::exception& ex) {
      row.M = M;
      row.ok = false;
      row.error = ex.what();
    }
    if (row.ok && prev) {
      row.ratio2 = prev->l2 / row.l2;
      row.ratio_inf = prev->linf / row.linf;
    }
    rep.rows.push_back(row);
    prev = rep.rows.back().ok ? &rep.rows.back() : nullptr;
  }
  write_report_files(cfg, rep);
  return rep;
}

CompareReport compare_methods(const RunConfig& cfg) {
  const std::string canon = canonical(cfg.surface);
  CompareReport rep;
  rep.surface = canon;
  if (is_axisym(canon)) {
    rep.ok = false;
    rep.error = "method comparison needs both cp and cacp; axisym surfaces have no cp variant";
    write_report_files(cfg, rep);
    return rep;
  }
  std::unique_ptr<Surface> surf = make_surface(canon);
  bool failed = false;
  for (int M : sizes_for(cfg, canon)) {
    try {
      check_size(M);
      check_large(cfg, canon, M);
      // one band shared by both methods so the comparison is like for like
      const GridSpec grid = grid_for(surf->dim(), M);
      const NodeClassification cls = classify_nodes(grid, *surf);
      const BandMap band = enumerate_band(cls);
      SparseSystem cacp = assemble(Method::CACP, grid, *surf, band, cfg.variant);
      const ErrorNorms ea = error_norms(solve(cacp).gamma, *surf, band);
      SparseSystem cp = assemble(Method::CP, grid, *surf, band, cfg.variant);
      const ErrorNorms ep = error_norms(solve(cp).gamma, *surf, band);
      rep.sizes.push_back(M);
      rep.l2_cacp.push_back(ea.l2);
      rep.linf_cacp.push_back(ea.linf);
      rep.l2_cp.push_back(ep.l2);
      rep.linf_cp.push_back(ep.linf);
    } catch (const std::exception& ex) {
      failed = true;
      if (!rep.error.empty()) rep.error += "; ";
      rep.error += "M=" + std::to_string(M) + ": " + ex.what();
    }
  }
  if (!rep.sizes.empty()) {
    rep.ratio2 = rep.l2_cacp.back() / rep.l2_cp.back();
    rep.ratio_inf = rep.linf_cacp.back() / rep.linf_cp.back();
  }
  rep.ok = !failed && !rep.sizes.empty();
  write_report_files(cfg, rep);
  return rep;
}

NnzReport nnz_table(const RunConfig& cfg) {
  const std::string canon = canonical(cfg.surface);
  NnzReport rep;
  rep.surface = canon;
  if (is_axisym(canon)) {
    rep.ok = false;
    rep.error = "nnz growth fits cover circle, clover and sphere only";
    write_report_files(cfg, rep);
    return rep;
  }
  std::unique_ptr<Surface> surf = make_surface(canon);
  rep.degree = surf->dim() == 3 ? 2 : 1;
  bool failed = false;
  for (int M : sizes_for(cfg, canon)) {
    try {
      check_size(M);
      check_large(cfg, canon, M);
      const GridSpec grid = grid_for(surf->dim(), M);
      const NodeClassification cls = classify_nodes(grid, *surf);
      const BandMap band = enumerate_band(cls);
      rep.sizes.push_back(M);
      rep.nnz_cacp.push_back(assemble(Method::CACP, grid, *surf, band, cfg.variant).nnz());
      rep.nnz_cp.push_back(assemble(Method::CP, grid, *surf, band, cfg.variant).nnz());
    } catch (const std::exception& ex) {
      failed = true;
      if (!rep.error.empty()) rep.error += "; ";
      rep.error += "M=" + std::to_string(M) + ": " + ex.what();
    }
  }
  try {
    std::vector<std::pair<int, std::int64_t>> pts;
    for (std::size_t k = 0; k < rep.sizes.size(); ++k)
      pts.emplace_back(rep.sizes[k], rep.nnz_cacp[k]);
    rep.fit_cacp = fit_nnz_growth(pts, rep.degree);
    for (std::size_t k = 0; k < rep.sizes.size(); ++k) pts[k].second = rep.nnz_cp[k];
    rep.fit_cp = fit_nnz_growth(pts, rep.degree);
  } catch (const std::exception& ex) {
    failed = true;
    if (!rep.error.empty()) rep.error += "; ";
    rep.error += ex.what();
  }
  rep.ok = !failed && !rep.sizes.empty();
  write_report_files(cfg, rep);
  return rep;
}

CondReport condest_table(const RunConfig& cfg) {
  const std::string canon = canonical(cfg.surface);
  CondReport rep;
  rep.surface = canon;
  if (is_axisym(canon)) {
    rep.ok = false;
    rep.error = "condition tables cover circle, clover and sphere only";
    write_report_files(cfg, rep);
    return rep;
  }
  std::unique_ptr<Surface> surf = make_surface(canon);
  bool failed = false;
  for (int M : sizes_for(cfg, canon)) {
    try {
      check_size(M);
      check_large(cfg, canon, M);
      const GridSpec grid = grid_for(surf->dim(), M);
      const NodeClassification cls = classify_nodes(grid, *surf);
      const BandMap band = enumerate_band(cls);
      rep.sizes.push_back(M);
      rep.cond_cacp.push_back(estimate_cond1(assemble(Method::CACP, grid, *surf, band, cfg.variant).A));
      rep.cond_cp.push_back(estimate_cond1(assemble(Method::CP, grid, *surf, band, cfg.variant).A));
    } catch (const std::exception& ex) {
      failed = true;
      if (!rep.error.empty()) rep.error += "; ";
      rep.error += "M=" + std::to_string(M) + ": " + ex.what();
    }
  }
  rep.ok = !failed && !rep.sizes.empty();
  write_report_files(cfg, rep);
  return rep;
}

FitResult fit_nnz_growth(const std::vector<std::pair<int, std::int64_t>>& points, int degree) {
  if (degree != 1 && degree != 2) throw Error("nnz fit degree must be 1 or 2");
  if (points.size() < 3) throw Error("nnz growth fit needs at least 3 points");
  // ordinary least squares on the basis {M^degree, 1}
  Eigen::Matrix2d ata = Eigen::Matrix2d::Zero();
  Eigen::Vector2d atb = Eigen::Vector2d::Zero();
  for (const auto& [M, n] : points) {
    const double t = degree == 1 ? double(M) : double(M) * double(M);
    const Eigen::Vector2d r(t, 1.0);
    ata += r * r.transpose();
    atb += r * double(n);
  }
  if (std::abs(ata.determinant()) < 1e-9 * ata.norm() * ata.norm())
    throw Error("nnz growth fit is underdetermined (need distinct grid sizes)");
  const Eigen::Vector2d sol = ata.ldlt().solve(atb);
  return {sol[0], sol[1]};
}

std::string render_convergence_csv(const ConvergenceReport& rep) {
  std::string out = "# schema: convergence v1; columns M,l2,linf,ratio2,ratioInf,nnz,cond,seconds\n";
  out += "# surface: " + rep.surface + ", method: " + std::string(method_name(rep.method)) + "\n";
  for (const ConvRow& r : rep.rows) {
    if (!r.ok) {
      out += "# error: M=" + std::to_string(r.M) + " " + r.error + "\n";
      continue;
    }
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%d,%.6e,%.6e,%.6f,%.6f,%" PRId64 ",%.6e,%.3f\n", r.M, r.l2,
                  r.linf, r.ratio2, r.ratio_inf, r.nnz, r.cond, r.seconds);
    out += buf;
  }
  return out;
}

std::string render_ratios_csv(const CompareReport& rep) {
  std::string out =
      "# schema: ratios v1; columns M,l2_cacp,linf_cacp,l2_cp,linf_cp,ratio2,ratioInf\n";
  out += "# surface: " + rep.surface + "\n";
  if (!rep.error.empty()) out += "# error: " + rep.error + "\n";
  for (std::size_t k = 0; k < rep.sizes.size(); ++k) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%d,%.6e,%.6e,%.6e,%.6e,%.6f,%.6f\n", rep.sizes[k],
                  rep.l2_cacp[k], rep.linf_cacp[k], rep.l2_cp[k], rep.linf_cp[k],
                  rep.l2_cacp[k] / rep.l2_cp[k], rep.linf_cacp[k] / rep.linf_cp[k]);
    out += buf;
  }
  if (!rep.sizes.empty())
    out += "# finest: ratio2=" + fmt("%.6f", rep.ratio2) + " ratioInf=" +
           fmt("%.6f", rep.ratio_inf) + "\n";
  return out;
}

std::string render_nnzfit_csv(const NnzReport& rep) {
  std::string out = "# schema: nnzfit v1; columns M,nnz_cp,nnz_cacp\n";
  out += "# surface: " + rep.surface + ", degree: " + std::to_string(rep.degree) + "\n";
  if (!rep.error.empty()) out += "# error: " + rep.error + "\n";
  for (std::size_t k = 0; k < rep.sizes.size(); ++k) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d,%" PRId64 ",%" PRId64 "\n", rep.sizes[k], rep.nnz_cp[k],
                  rep.nnz_cacp[k]);
    out += buf;
  }
  if (rep.ok)
    out += "# fit: cp slope=" + fmt("%.4f", rep.fit_cp.slope) + " intercept=" +
           fmt("%.4f", rep.fit_cp.intercept) + "; cacp slope=" + fmt("%.4f", rep.fit_cacp.slope) +
           " intercept=" + fmt("%.4f", rep.fit_cacp.intercept) + "\n";
  return out;
}

std::string render_condest_csv(const CondReport& rep) {
  std::string out = "# schema: condest v1; columns M,cond_cp,cond_cacp\n";
  out += "# surface: " + rep.surface + "\n";
  if (!rep.error.empty()) out += "# error: " + rep.error + "\n";
  for (std::size_t k = 0; k < rep.sizes.size(); ++k) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d,%.6e,%.6e\n", rep.sizes[k], rep.cond_cp[k],
                  rep.cond_cacp[k]);
    out += buf;
  }
  return out;
}

std::string render_convergence_dat(const ConvergenceReport& rep) {
  std::string out = "# M l2 linf ratio2 ratioInf nnz cond seconds\n";
  for (const ConvRow& r : rep.rows) {
    if (!r.ok) {
      out += "# error: M=" + std::to_string(r.M) + " " + r.error + "\n";
      continue;
    }
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%d %.6e %.6e %.6f %.6f %" PRId64 " %.6e %.3f\n", r.M, r.l2,
                  r.linf, r.ratio2, r.ratio_inf, r.nnz, r.cond, r.seconds);
    out += buf;
  }
  return out;
}

namespace {

void write_one(const RunConfig& cfg, const std::string& name, const std::string& content) {
  if (cfg.out_dir.empty()) return;
  std::filesystem::create_directories(cfg.out_dir);
  write_text_file(join_path(cfg.out_dir, name), content);
}

}  // namespace

void write_report_files(const RunConfig& cfg, const ConvergenceReport& rep) {
  write_one(cfg, "convergence.csv", render_convergence_csv(rep));
  if (cfg.gnuplot) write_one(cfg, "convergence.dat", render_convergence_dat(rep));
}

void write_report_files(const RunConfig& cfg, const CompareReport& rep) {
  write_one(cfg, "ratios.csv", render_ratios_csv(rep));
}

void write_report_files(const RunConfig& cfg, const NnzReport& rep) {
  write_one(cfg, "nnzfit.csv", render_nnzfit_csv(rep));
}

void write_report_files(const RunConfig& cfg, const CondReport& rep) {
  write_one(cfg, "condest.csv", render_condest_csv(rep));
}

}  // namespace cacp
