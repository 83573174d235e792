#include "doctest.h"

#include <cmath>

#include "cacp/solver.hpp"

using namespace cacp;

namespace {
struct BandSetup {
  GridSpec grid;
  NodeClassification cls;
  BandMap band;
};

BandSetup make_band(const Surface& surf, int M) {
  BandSetup s;
  s.grid = build_grid(2, {-2, -2, 0}, {2, 2, 0}, M);
  s.cls = classify_nodes(s.grid, surf);
  s.band = enumerate_band(s.cls);
  return s;
}
}  // namespace

TEST_CASE("direct solve meets the residual contract") {
  const CircleSurface surf;
  const BandSetup s = make_band(surf, 80);
  const SparseSystem sys = assemble(Method::CACP, s.grid, surf, s.band);
  const SolveReport rep = solve(sys);
  CHECK(rep.rel_residual <= 1e-10);
  CHECK(rep.gamma.size() == s.band.size());

  const ErrorNorms e = error_norms(rep.gamma, surf, s.band);
  CHECK(e.l2 < 0.05);
  CHECK(e.linf < 0.1);
  CHECK(e.l2 <= e.linf);
}

TEST_CASE("forced iterative mode agrees with the direct path") {
  const CircleSurface surf;
  const BandSetup s = make_band(surf, 160);
  const SparseSystem sys = assemble(Method::CACP, s.grid, surf, s.band);
  const SolveReport direct = solve(sys);
  SolveOptions opt;
  opt.mode = SolveOptions::Mode::Iterative;
  const SolveReport iter = solve(sys, opt);
  CHECK(iter.rel_residual <= 1e-8);
  CHECK((iter.gamma - direct.gamma).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("condition estimate is exact on diagonal matrices") {
  SpMat D(10, 10);
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < 10; ++i) t.emplace_back(i, i, static_cast<double>(i + 1));
  D.setFromTriplets(t.begin(), t.end());
  // ||D||_1 = 10, ||D^-1||_1 = 1
  CHECK(estimate_cond1(D) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("condition estimate is a tight lower bound on small dense problems") {
  std::uint64_t state = 29;
  auto unit = [&]() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(state >> 11) / 9007199254740992.0;
  };
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 24;
    Eigen::MatrixXd Ad = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      Ad(i, i) = 2.0 + unit();
      Ad(i, (i + 3) % n) = unit() - 0.5;
      Ad((i + 7) % n, i) += 0.8 * (unit() - 0.5);
    }
    const SpMat As = Ad.sparseView();

    double a1 = 0, ai1 = 0;  // exact 1-norms of A and A^-1
    const Eigen::MatrixXd inv = Ad.inverse();
    for (int c = 0; c < n; ++c) {
      a1 = std::max(a1, Ad.col(c).cwiseAbs().sum());
      ai1 = std::max(ai1, inv.col(c).cwiseAbs().sum());
    }
    const double exact = a1 * ai1;
    const double est = estimate_cond1(As);
    CHECK(est <= exact * (1.0 + 1e-10));
    CHECK(est >= 0.3 * exact);
  }
}

TEST_CASE("error norms are root mean square and maximum over the band") {
  const CircleSurface surf;
  const BandSetup s = make_band(surf, 40);
  const std::int64_t n = s.band.size();
  Eigen::VectorXd gamma(n);
  for (std::int64_t r = 0; r < n; ++r) {
    const auto idx = s.grid.unflat(s.band.row_to_node[static_cast<std::size_t>(r)]);
    gamma[r] = surf.gamma_exact(surf.cp(s.grid.node(idx[0], idx[1])));
  }
  const ErrorNorms zero = error_norms(gamma, surf, s.band);
  CHECK(zero.l2 == doctest::Approx(0.0).scale(1.0));
  CHECK(zero.linf == doctest::Approx(0.0).scale(1.0));

  // a single spike of 1e-2: max picks it up, the mean square spreads it
  gamma[3] += 1e-2;
  const ErrorNorms spike = error_norms(gamma, surf, s.band);
  CHECK(spike.linf == doctest::Approx(1e-2).epsilon(1e-12));
  CHECK(spike.l2 ==
        doctest::Approx(1e-2 / std::sqrt(static_cast<double>(n))).epsilon(1e-10));

  // uniform perturbation: both norms equal its size
  for (std::int64_t r = 0; r < n; ++r) gamma[r] += (r % 2 ? 5e-3 : -5e-3) - (r == 3 ? 1e-2 : 0.0);
  const ErrorNorms alt = error_norms(gamma, surf, s.band);
  CHECK(alt.l2 == doctest::Approx(5e-3).epsilon(1e-12));
  CHECK(alt.linf == doctest::Approx(5e-3).epsilon(1e-12));
}
