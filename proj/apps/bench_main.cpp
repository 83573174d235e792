// Benchmark CLI for the closest point / curvature-augmented closest point
// discretizations: convergence tables, method comparisons, sparsity growth
// fits and condition number estimates, emitted as CSV (and optionally
// gnuplot .dat) files.
#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "cacp/bench.hpp"
#include "cacp/io.hpp"

namespace {

struct CliOptions {
  cacp::RunConfig cfg;
  std::string method = "cacp";  // cp | cacp | both (convergence only)
  std::string variant = "node-avg";
  bool no_cond = false;
};

void add_common(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--surface", opt.cfg.surface,
                  "circle | clover | sphere | axisym-sphere | axisym-ellipsoid")
      ->capture_default_str();
  cmd->add_option("--M", opt.cfg.sizes, "grid sizes (>= 40, multiples of 4); default per surface")
      ->delimiter(',');
  cmd->add_option("--out", opt.cfg.out_dir, "directory for the CSV reports");
  cmd->add_option("--coeff-variant", opt.variant, "face | node-avg face coefficients")
      ->check(CLI::IsMember({"face", "node-avg"}))
      ->capture_default_str();
  cmd->add_flag("--allow-large", opt.cfg.allow_large, "permit sphere grids with M >= 320");
  cmd->add_flag("--gnuplot", opt.cfg.gnuplot, "also write whitespace-separated .dat tables");
}

void finish(CliOptions& opt) {
  opt.cfg.variant = opt.variant == "face" ? cacp::CoeffVariant::FaceMidpoint
                                          : cacp::CoeffVariant::NodeAverage;
  opt.cfg.with_cond = !opt.no_cond;
}

int run_convergence_cmd(CliOptions& opt) {
  finish(opt);
  bool ok = true;
  if (opt.method == "both") {
    for (cacp::Method m : {cacp::Method::CACP, cacp::Method::CP}) {
      cacp::RunConfig cfg = opt.cfg;
      cfg.method = m;
      if (!opt.cfg.out_dir.empty())
        cfg.out_dir = (std::filesystem::path(opt.cfg.out_dir) /
                       (m == cacp::Method::CP ? "cp" : "cacp"))
                          .string();
      const cacp::ConvergenceReport rep = cacp::run_convergence(cfg);
      std::fputs(cacp::render_convergence_csv(rep).c_str(), stdout);
      ok = ok && rep.all_ok();
    }
    return ok ? 0 : 1;
  }
  opt.cfg.method = opt.method == "cp" ? cacp::Method::CP : cacp::Method::CACP;
  const cacp::ConvergenceReport rep = cacp::run_convergence(opt.cfg);
  std::fputs(cacp::render_convergence_csv(rep).c_str(), stdout);
  return rep.all_ok() ? 0 : 1;
}

int run_compare_cmd(CliOptions& opt) {
  finish(opt);
  const cacp::CompareReport rep = cacp::compare_methods(opt.cfg);
  std::fputs(cacp::render_ratios_csv(rep).c_str(), stdout);
  return rep.ok ? 0 : 1;
}

int run_nnz_cmd(CliOptions& opt) {
  finish(opt);
  const cacp::NnzReport rep = cacp::nnz_table(opt.cfg);
  std::fputs(cacp::render_nnzfit_csv(rep).c_str(), stdout);
  return rep.ok ? 0 : 1;
}

int run_condest_cmd(CliOptions& opt) {
  finish(opt);
  const cacp::CondReport rep = cacp::condest_table(opt.cfg);
  std::fputs(cacp::render_condest_csv(rep).c_str(), stdout);
  return rep.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"closest point / curvature-augmented closest point benchmarks"};
  app.require_subcommand(1);

  CliOptions opt;

  CLI::App* conv = app.add_subcommand("convergence", "error table over a sequence of grids");
  add_common(conv, opt);
  conv->add_option("--method", opt.method, "cp | cacp | both")
      ->check(CLI::IsMember({"cp", "cacp", "both"}))
      ->capture_default_str();
  conv->add_flag("--no-cond", opt.no_cond, "skip condition number estimates");
  conv->add_flag("--matrices", opt.cfg.with_matrices, "dump .mtx and band CSVs per grid");

  CLI::App* cmp = app.add_subcommand("compare", "CACP vs CP error ratios on shared bands");
  add_common(cmp, opt);

  CLI::App* nnz = app.add_subcommand("nnz", "nonzero counts and growth fit");
  add_common(nnz, opt);

  CLI::App* cond = app.add_subcommand("condest", "1-norm condition estimates for both methods");
  add_common(cond, opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (conv->parsed()) return run_convergence_cmd(opt);
    if (cmp->parsed()) return run_compare_cmd(opt);
    if (nnz->parsed()) return run_nnz_cmd(opt);
    return run_condest_cmd(opt);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
}
