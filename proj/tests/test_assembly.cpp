#include "doctest.h"

#include <cmath>

#include "cacp/assembly.hpp"

using namespace cacp;

namespace {
struct BandSetup {
  GridSpec grid;
  NodeClassification cls;
  BandMap band;
};

BandSetup make_band(const Surface& surf, int M) {
  BandSetup s;
  s.grid = surf.dim() == 3 ? build_grid(3, {-2, -2, -2}, {2, 2, 2}, M)
                           : build_grid(2, {-2, -2, 0}, {2, 2, 0}, M);
  s.cls = classify_nodes(s.grid, surf);
  s.band = enumerate_band(s.cls);
  return s;
}
}  // namespace

TEST_CASE("side-condition scale is 2 dim / dx^2") {
  const CircleSurface circle;
  const BandSetup s2 = make_band(circle, 40);
  const SparseSystem a2 = assemble(Method::CP, s2.grid, circle, s2.band);
  CHECK(a2.omega == doctest::Approx(4.0 / (s2.grid.dx * s2.grid.dx)));

  const SphereSurface sphere;
  const BandSetup s3 = make_band(sphere, 40);
  const SparseSystem a3 = assemble(Method::CACP, s3.grid, sphere, s3.band);
  CHECK(a3.omega == doctest::Approx(6.0 / (s3.grid.dx * s3.grid.dx)));
}

TEST_CASE("right-hand sides embed m, homogeneous at augmented side conditions") {
  const CircleSurface surf;
  const BandSetup s = make_band(surf, 40);
  const SparseSystem cp = assemble(Method::CP, s.grid, surf, s.band);
  const SparseSystem cacp = assemble(Method::CACP, s.grid, surf, s.band);
  for (std::int64_t r = 0; r < s.band.size(); ++r) {
    const auto idx = s.grid.unflat(s.band.row_to_node[static_cast<std::size_t>(r)]);
    const double m = surf.m_field(s.grid.node(idx[0], idx[1]));
    CHECK(cp.b[r] == m);
    if (s.band.label_of_row(r) == NodeLabel::Edge)
      CHECK(cacp.b[r] == 0.0);
    else
      CHECK(cacp.b[r] == m);
  }
}

TEST_CASE("operators reproduce c on constants") {
  // gamma == 1 satisfies the side condition exactly and kills the diffusion
  // term, so A*1 must equal the embedded c at PDE rows; the curvature-
  // augmented side-condition rows are omega (I - E3) and annihilate constants
  const CircleSurface circle;
  const SphereSurface sphere;
  const Surface* surfaces[] = {&circle, &sphere};
  for (const Surface* surf : surfaces) {
    const BandSetup s = make_band(*surf, 40);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(s.band.size());
    for (Method method : {Method::CP, Method::CACP}) {
      const SparseSystem sys = assemble(method, s.grid, *surf, s.band);
      const Eigen::VectorXd a1 = sys.A * ones;
      for (std::int64_t r = 0; r < s.band.size(); ++r) {
        const bool side_row =
            method == Method::CACP && s.band.label_of_row(r) == NodeLabel::Edge;
        const auto idx = s.grid.unflat(s.band.row_to_node[static_cast<std::size_t>(r)]);
        const double want =
            side_row ? 0.0 : surf->c_field(s.grid.node(idx[0], idx[1], idx[2]));
        CHECK(a1[r] == doctest::Approx(want).epsilon(1e-12).scale(sys.omega));
      }
    }
  }
}

TEST_CASE("planar augmented rows use symmetric face coefficients") {
  const CircleSurface surf;
  const BandSetup s = make_band(surf, 40);
  for (CoeffVariant variant : {CoeffVariant::NodeAverage, CoeffVariant::FaceMidpoint}) {
    const SparseSystem sys = assemble_cacp_2d(s.grid, surf, s.band, variant);
    const SpMat At = SpMat(sys.A.transpose());
    // between two interpolation-labeled neighbors the face coefficient is
    // shared, so A(r,c)/t_r == A(c,r)/t_c
    auto tube = [&](std::int64_t r) {
      const auto idx = s.grid.unflat(s.band.row_to_node[static_cast<std::size_t>(r)]);
      const Vec x = s.grid.node(idx[0], idx[1]);
      return 1.0 + surf.phi(x) * surf.kappa(x);
    };
    int checked = 0;
    for (std::int64_t r = 0; r < s.band.size(); ++r) {
      if (s.band.label_of_row(r) == NodeLabel::Edge) continue;
      for (SpMat::InnerIterator it(At, r); it; ++it) {
        const std::int64_t c = it.row();
        if (c == r || s.band.label_of_row(c) == NodeLabel::Edge) continue;
        const double acr = sys.A.coeff(c, r);
        if (acr == 0.0) continue;
        CHECK(it.value() / tube(r) == doctest::Approx(acr / tube(c)).epsilon(1e-12));
        ++checked;
      }
    }
    CHECK(checked > 100);
  }
}

TEST_CASE("tube degeneracy is rejected") {
  // at M = 52 a clover band node lands at the critical distance 1/|kappa|
  // from the notch, where 1 + phi kappa reaches zero
  const CloverSurface surf;
  const BandSetup s = make_band(surf, 52);
  CHECK_THROWS_AS(assemble_cacp_2d(s.grid, surf, s.band, CoeffVariant::NodeAverage), Error);
  // the plain closest point operator has no tube coefficients and assembles
  CHECK(assemble_cp(s.grid, surf, s.band).nnz() > 0);
}

TEST_CASE("side-condition defect of the exact extension is high order") {
  const CircleSurface surf;
  double prev = 0;
  int step = 0;
  for (int M : {80, 160}) {
    const BandSetup s = make_band(surf, M);
    Eigen::VectorXd exact(s.band.size());
    for (std::int64_t r = 0; r < s.band.size(); ++r) {
      const auto idx = s.grid.unflat(s.band.row_to_node[static_cast<std::size_t>(r)]);
      exact[r] = surf.gamma_exact(surf.cp(s.grid.node(idx[0], idx[1])));
    }
    const double defect = side_condition_defect(s.grid, surf, s.band, exact);
    if (step++ > 0) CHECK(defect < prev / 8.0);  // at least third order
    prev = defect;
  }
  CHECK(prev < 1e-2);
}
