#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cacp/bench.hpp"

using namespace cacp;

TEST_CASE("nnz growth fit recovers exact monomial data") {
  std::vector<std::pair<int, std::int64_t>> lin;
  for (int M : {40, 80, 160, 320}) lin.emplace_back(M, 177 * M - 266);
  const FitResult f1 = fit_nnz_growth(lin, 1);
  CHECK(f1.slope == doctest::Approx(177.0).epsilon(1e-9));
  CHECK(f1.intercept == doctest::Approx(-266.0).epsilon(1e-6));

  std::vector<std::pair<int, std::int64_t>> quad;
  for (int M : {40, 80, 160}) quad.emplace_back(M, 386 * M * M + 5000);
  const FitResult f2 = fit_nnz_growth(quad, 2);
  CHECK(f2.slope == doctest::Approx(386.0).epsilon(1e-9));
  CHECK(f2.intercept == doctest::Approx(5000.0).epsilon(1e-6));
}

TEST_CASE("nnz growth fit rejects bad input") {
  std::vector<std::pair<int, std::int64_t>> two = {{40, 100}, {80, 200}};
  CHECK_THROWS_AS(fit_nnz_growth(two, 1), Error);
  std::vector<std::pair<int, std::int64_t>> three = {{40, 100}, {80, 200}, {160, 400}};
  CHECK_THROWS_AS(fit_nnz_growth(three, 3), Error);
  std::vector<std::pair<int, std::int64_t>> dup = {{40, 100}, {40, 101}, {40, 99}};
  CHECK_THROWS_AS(fit_nnz_growth(dup, 1), Error);
}

TEST_CASE("surface names, aliases, and defaults") {
  CHECK(make_surface("circle")->dim() == 2);
  CHECK(make_surface("clover")->dim() == 2);
  CHECK(make_surface("sphere")->dim() == 3);
  CHECK(make_surface("axisym-ellipsoid")->dim() == 2);
  CHECK_THROWS_AS(make_surface("torus"), Error);

  CHECK(default_sizes("circle") == std::vector<int>{40, 80, 160, 320, 640});
  CHECK(default_sizes("clover").front() == 80);
  CHECK(default_sizes("sphere").back() == 160);
  // both orderings of the axisym names are accepted
  CHECK(default_sizes("sphere-axisym") == default_sizes("axisym-sphere"));
  CHECK(is_axisym("axisym-sphere"));
  CHECK_FALSE(is_axisym("sphere"));
}

TEST_CASE("single run produces a complete row") {
  const ConvRow row = run_single("circle", Method::CACP, 40, CoeffVariant::NodeAverage, false);
  REQUIRE(row.ok);
  CHECK(row.M == 40);
  CHECK(row.l2 == doctest::Approx(6.8e-2).epsilon(0.2));
  CHECK(row.linf > row.l2);
  CHECK(row.nnz > 0);
  CHECK(row.cond == 0.0);  // not requested
  CHECK(row.seconds >= 0.0);
}

TEST_CASE("invalid sizes and gated sizes surface as row errors") {
  const ConvRow bad = run_single("circle", Method::CP, 30, CoeffVariant::NodeAverage, false);
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.error.empty());

  RunConfig cfg;
  cfg.surface = "sphere";
  cfg.sizes = {320};
  cfg.with_cond = false;
  const ConvergenceReport rep = run_convergence(cfg);
  REQUIRE(rep.rows.size() == 1);
  CHECK_FALSE(rep.rows[0].ok);
  CHECK(rep.rows[0].error.find("allow-large") != std::string::npos);
  CHECK_FALSE(rep.all_ok());
}

TEST_CASE("axisym surfaces only support the tension path") {
  RunConfig cfg;
  cfg.surface = "axisym-sphere";
  cfg.sizes = {40, 80, 160};
  const CompareReport cmp = compare_methods(cfg);
  CHECK_FALSE(cmp.ok);
  CHECK_FALSE(cmp.error.empty());
  const NnzReport nnz = nnz_table(cfg);
  CHECK_FALSE(nnz.ok);

  ConvRow row = run_single("axisym-sphere", Method::CP, 80, CoeffVariant::NodeAverage, false);
  CHECK_FALSE(row.ok);
  row = run_single("axisym-sphere", Method::CACP, 80, CoeffVariant::NodeAverage, false);
  REQUIRE(row.ok);
  CHECK(row.l2 < 1e-3);
}

TEST_CASE("convergence report renders and writes tables") {
  RunConfig cfg;
  cfg.surface = "circle";
  cfg.sizes = {40, 80};
  cfg.with_cond = false;
  cfg.out_dir = (std::filesystem::temp_directory_path() / "cacp_bench_test").string();
  std::filesystem::remove_all(cfg.out_dir);

  const ConvergenceReport rep = run_convergence(cfg);
  REQUIRE(rep.all_ok());
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].ratio2 == 0.0);
  CHECK(rep.rows[1].ratio2 == doctest::Approx(rep.rows[0].l2 / rep.rows[1].l2));

  const std::string csv = render_convergence_csv(rep);
  CHECK(csv.rfind("# schema: convergence v1", 0) == 0);
  CHECK(csv.find("\n40,") != std::string::npos);
  CHECK(csv.find("\n80,") != std::string::npos);

  std::ifstream in(std::filesystem::path(cfg.out_dir) / "convergence.csv");
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == csv);
  std::filesystem::remove_all(cfg.out_dir);
}

TEST_CASE("method comparison reports finest-grid error ratios") {
  RunConfig cfg;
  cfg.surface = "circle";
  cfg.sizes = {40, 80};
  const CompareReport cmp = compare_methods(cfg);
  REQUIRE(cmp.ok);
  REQUIRE(cmp.sizes.size() == 2);
  CHECK(cmp.l2_cacp[1] < cmp.l2_cp[1]);  // augmentation helps on the circle
  CHECK(cmp.ratio2 == doctest::Approx(cmp.l2_cacp[1] / cmp.l2_cp[1]));
  CHECK(cmp.ratio_inf == doctest::Approx(cmp.linf_cacp[1] / cmp.linf_cp[1]));
}
