#pragma once

#include <memory>
#include <string>

#include "cacp/assembly.hpp"
#include "cacp/axisym.hpp"
#include "cacp/solver.hpp"

namespace cacp {

/// Configuration shared by the benchmark drivers. Grid sizes must be
/// multiples of 4 and at least 40; an empty list selects per-surface
/// defaults.
struct RunConfig {
  std::string surface = "circle";  // circle | clover | sphere | axisym-sphere | axisym-ellipsoid
  Method method = Method::CACP;
  std::vector<int> sizes;
  std::string out_dir;  // empty: no files written
  CoeffVariant variant = CoeffVariant::NodeAverage;
  bool with_cond = true;
  bool with_matrices = false;   // dump .mtx and band CSVs alongside tables
  bool allow_large = false;     // gates 3D grids with M >= 320
  bool gnuplot = false;         // also emit whitespace-separated .dat tables
};

struct ConvRow {
  int M = 0;
  double l2 = 0.0;
  double linf = 0.0;
  double ratio2 = 0.0;  // previous l2 / this l2; 0 on the first row
  double ratio_inf = 0.0;
  std::int64_t nnz = 0;
  double cond = 0.0;  // 0 when not estimated
  double seconds = 0.0;
  bool ok = false;
  std::string error;
};

struct ConvergenceReport {
  std::string surface;
  Method method = Method::CACP;
  std::vector<ConvRow> rows;
  bool all_ok() const;
};

struct CompareReport {
  std::string surface;
  std::vector<int> sizes;
  std::vector<double> l2_cacp, linf_cacp, l2_cp, linf_cp;
  double ratio2 = 0.0;  // CACP/CP error ratio on the finest grid
  double ratio_inf = 0.0;
  bool ok = false;
  std::string error;
};

struct FitResult {
  double slope = 0.0;  // leading coefficient of the monomial fit
  double intercept = 0.0;
};

struct NnzReport {
  std::string surface;
  int degree = 1;  // nnz growth: linear in M for curves, quadratic for surfaces
  std::vector<int> sizes;
  std::vector<std::int64_t> nnz_cacp, nnz_cp;
  FitResult fit_cacp, fit_cp;
  bool ok = false;
  std::string error;
};

struct CondReport {
  std::string surface;
  std::vector<int> sizes;
  std::vector<double> cond_cacp, cond_cp;
  bool ok = false;
  std::string error;
};

std::vector<int> default_sizes(const std::string& surface);
std::unique_ptr<Surface> make_surface(const std::string& name);
bool is_axisym(const std::string& surface);

/// Solves the model problem on one grid and reports errors, nnz and timing.
ConvRow run_single(const std::string& surface, Method method, int M, CoeffVariant variant,
                   bool with_cond);

ConvergenceReport run_convergence(const RunConfig& cfg);
CompareReport compare_methods(const RunConfig& cfg);
NnzReport nnz_table(const RunConfig& cfg);
CondReport condest_table(const RunConfig& cfg);

/// Least-squares fit of nnz(M) ~ slope * M^degree + intercept.
FitResult fit_nnz_growth(const std::vector<std::pair<int, std::int64_t>>& points, int degree);

// CSV renderers. Each table starts with a "# schema: ..." comment naming
// the columns and format version; timings are the only nondeterministic
// column.
std::string render_convergence_csv(const ConvergenceReport& rep);
std::string render_ratios_csv(const CompareReport& rep);
std::string render_nnzfit_csv(const NnzReport& rep);
std::string render_condest_csv(const CondReport& rep);

std::string render_convergence_dat(const ConvergenceReport& rep);

/// Writes the report tables under cfg.out_dir (created if needed).
void write_report_files(const RunConfig& cfg, const ConvergenceReport& rep);
void write_report_files(const RunConfig& cfg, const CompareReport& rep);
void write_report_files(const RunConfig& cfg, const NnzReport& rep);
void write_report_files(const RunConfig& cfg, const CondReport& rep);

}  // namespace cacp
