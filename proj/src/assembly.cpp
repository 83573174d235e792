#include "cacp/assembly.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace cacp {

namespace {

double side_condition_scale(const GridSpec& grid) { return 2.0 * grid.dim / (grid.dx * grid.dx); }

std::string row_name(const GridSpec& grid, std::int64_t flat_id) {
  const auto idx = grid.unflat(flat_id);
  std::string s = "(" + std::to_string(idx[0]) + ", " + std::to_string(idx[1]);
  if (grid.dim == 3) s += ", " + std::to_string(idx[2]);
  return s + ")";
}

// Column index of a band neighbor; throws if the neighbor is not in the band
// (interpolation nodes always have their axis neighbors in the band).
std::int32_t band_neighbor(const GridSpec& grid, const BandMap& band, std::int64_t flat_id, int di,
                           int dj, int dk) {
  const auto idx = grid.unflat(flat_id);
  const std::int64_t nb = grid.flat(idx[0] + di, idx[1] + dj, idx[2] + dk);
  const std::int32_t col = band.row_of(nb);
  if (col < 0) {
    throw Error("axis neighbor of interpolation node " + row_name(grid, flat_id) +
                " is outside the band; classification is inconsistent");
  }
  return col;
}

// Right-hand side: m embedded at the rows that carry the PDE. The
// closest-point rows all do; the curvature-augmented side-condition rows
// (edge rows) are homogeneous, since omega*(I - E3) gamma only pins the edge
// values to the surface extension.
Eigen::VectorXd embedded_rhs(const GridSpec& grid, const Surface& surface, const BandMap& band,
                             bool zero_edge_rows) {
  Eigen::VectorXd b(band.size());
  for (std::int64_t r = 0; r < band.size(); ++r) {
    if (zero_edge_rows && band.label_of_row(r) == NodeLabel::Edge) {
      b[r] = 0.0;
      continue;
    }
    const auto idx = grid.unflat(band.row_to_node[static_cast<std::size_t>(r)]);
    b[r] = surface.m_field(grid.node(idx[0], idx[1], idx[2]));
  }
  return b;
}

// Appends the side-condition row scale * (delta_rr - E3 row at cp(x_r)).
void append_side_condition_row(std::vector<Eigen::Triplet<double>>& trip, const GridSpec& grid,
                               const BandMap& band, std::int64_t r, const Vec& cp_r, double scale) {
  trip.emplace_back(static_cast<int>(r), static_cast<int>(r), scale);
  const InterpStencil st = interpolation_weights(grid, cp_r, 3);
  const int n = st.per_axis();
  const int kmax = grid.dim == 3 ? n : 1;
  for (int di = 0; di < n; ++di) {
    for (int dj = 0; dj < n; ++dj) {
      for (int dk = 0; dk < kmax; ++dk) {
        const double w = st.w[st.weight_index(di, dj, dk)];
        if (w == 0.0) continue;
        const std::int64_t nb = grid.flat(st.base[0] + di, st.base[1] + dj, st.base[2] + dk);
        const std::int32_t col = band.row_of(nb);
        if (col < 0) {
          throw Error("cubic stencil of band node " + row_name(grid, band.row_to_node[static_cast<std::size_t>(r)]) +
                      " touches a node outside the band; classification is inconsistent");
        }
        trip.emplace_back(static_cast<int>(r), col, -scale * w);
      }
    }
  }
}

}  // namespace

std::vector<Vec> band_closest_points(const GridSpec& grid, const Surface& surface,
                                     const BandMap& band) {
  std::vector<Vec> cps(static_cast<std::size_t>(band.size()));
  for (std::int64_t r = 0; r < band.size(); ++r) {
    const auto idx = grid.unflat(band.row_to_node[static_cast<std::size_t>(r)]);
    cps[static_cast<std::size_t>(r)] = surface.cp(grid.node(idx[0], idx[1], idx[2]));
  }
  return cps;
}

SparseSystem assemble_cp(const GridSpec& grid, const Surface& surface, const BandMap& band) {
  const std::int64_t n = band.size();
  if (n == 0) throw Error("cannot assemble on an empty band");
  const double w = side_condition_scale(grid);
  const std::vector<Vec> cps = band_closest_points(grid, surface, band);

  const SpMat E1 = build_interp_matrix(grid, band, cps, 1);
  const SpMat E3 = build_interp_matrix(grid, band, cps, 3);

  // Laplacian rows at interpolation nodes; identity rows at edge nodes (those
  // rows are annihilated by E1, whose columns vanish on edge nodes).
  std::vector<Eigen::Triplet<double>> lt;
  lt.reserve(static_cast<std::size_t>(n) * (2 * grid.dim + 1));
  const double inv_dx2 = 1.0 / (grid.dx * grid.dx);
  for (std::int64_t r = 0; r < n; ++r) {
    if (band.label_of_row(r) == NodeLabel::Edge) {
      lt.emplace_back(static_cast<int>(r), static_cast<int>(r), 1.0);
      continue;
    }
    const std::int64_t id = band.row_to_node[static_cast<std::size_t>(r)];
    lt.emplace_back(static_cast<int>(r), static_cast<int>(r), -2.0 * grid.dim * inv_dx2);
    for (int a = 0; a < grid.dim; ++a) {
      for (int m = -1; m <= 1; m += 2) {
        const std::int32_t col = band_neighbor(grid, band, id, a == 0 ? m : 0, a == 1 ? m : 0,
                                               a == 2 ? m : 0);
        lt.emplace_back(static_cast<int>(r), col, inv_dx2);
      }
    }
  }
  SpMat L(n, n);
  L.setFromTriplets(lt.begin(), lt.end());

  SpMat I(n, n);
  I.setIdentity();

  std::vector<Eigen::Triplet<double>> ct;
  ct.reserve(static_cast<std::size_t>(n));
  for (std::int64_t r = 0; r < n; ++r) {
    const auto idx = grid.unflat(band.row_to_node[static_cast<std::size_t>(r)]);
    const double c = surface.c_field(grid.node(idx[0], idx[1], idx[2]));
    if (c != 0.0) ct.emplace_back(static_cast<int>(r), static_cast<int>(r), c);
  }
  SpMat C(n, n);
  C.setFromTriplets(ct.begin(), ct.end());

  SparseSystem sys;
  SpMat P = E1 * L;
  sys.A = C - P;
  sys.A = SpMat(sys.A + w * I);
  sys.A = SpMat(sys.A - w * E3);
  sys.A.prune(1.0, 0.0);  // keep only structural nonzeros, as a sparse-matrix
                          // package would after arithmetic
  sys.A.makeCompressed();
  sys.b = embedded_rhs(grid, surface, band, false);
  sys.band = &band;
  sys.method = Method::CP;
  sys.omega = w;
  return sys;
}

SparseSystem assemble_cacp_2d(const GridSpec& grid, const Surface& surface, const BandMap& band,
                              CoeffVariant variant) {
  if (grid.dim != 2) throw Error("planar curvature-augmented assembly requires a 2D grid");
  const std::int64_t n = band.size();
  if (n == 0) throw Error("cannot assemble on an empty band");
  const double w = side_condition_scale(grid);
  const double inv_dx2 = 1.0 / (grid.dx * grid.dx);

  auto tube_coeff = [&](const Vec& x) {
    const double t = 1.0 + surface.phi(x) * surface.kappa(x);
    if (!(t > 0.0)) {
      throw Error("tube validity 1 + phi*kappa > 0 violated at (" + std::to_string(x[0]) + ", " +
                  std::to_string(x[1]) + "); the band crosses a curvature singularity");
    }
    return t;
  };

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n) * 18);

  for (std::int64_t r = 0; r < n; ++r) {
    const std::int64_t id = band.row_to_node[static_cast<std::size_t>(r)];
    const auto idx = grid.unflat(id);
    const Vec x0 = grid.node(idx[0], idx[1]);

    if (band.label_of_row(r) == NodeLabel::Edge) {
      append_side_condition_row(trip, grid, band, r, surface.cp(x0), w);
      continue;
    }

    const double t0 = tube_coeff(x0);
    double center = surface.c_field(x0);
    for (int a = 0; a < 2; ++a) {
      for (int m = -1; m <= 1; m += 2) {
        double tf;
        if (variant == CoeffVariant::FaceMidpoint) {
          Vec xf = x0;
          xf[a] += 0.5 * m * grid.dx;
          tf = tube_coeff(xf);
        } else {
          Vec xn = x0;
          xn[a] += m * grid.dx;
          tf = 0.5 * (t0 + tube_coeff(xn));
        }
        const std::int32_t col = band_neighbor(grid, band, id, a == 0 ? m : 0, a == 1 ? m : 0, 0);
        trip.emplace_back(static_cast<int>(r), col, -t0 * tf * inv_dx2);
        center += t0 * tf * inv_dx2;
      }
    }
    trip.emplace_back(static_cast<int>(r), static_cast<int>(r), center);
  }

  SparseSystem sys;
  sys.A.resize(n, n);
  sys.A.setFromTriplets(trip.begin(), trip.end());
  sys.A.makeCompressed();
  sys.b = embedded_rhs(grid, surface, band, true);
  sys.band = &band;
  sys.method = Method::CACP;
  sys.omega = w;
  return sys;
}

SparseSystem assemble_cacp_sphere(const GridSpec& grid, const Surface& surface,
                                  const BandMap& band) {
  if (grid.dim != 3) throw Error("spherical curvature-augmented assembly requires a 3D grid");
  const std::int64_t n = band.size();
  if (n == 0) throw Error("cannot assemble on an empty band");
  const double w = side_condition_scale(grid);
  const double inv_dx2 = 1.0 / (grid.dx * grid.dx);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n) * 40);

  for (std::int64_t r = 0; r < n; ++r) {
    const std::int64_t id = band.row_to_node[static_cast<std::size_t>(r)];
    const auto idx = grid.unflat(id);
    const Vec x0 = grid.node(idx[0], idx[1], idx[2]);

    if (band.label_of_row(r) == NodeLabel::Edge) {
      append_side_condition_row(trip, grid, band, r, surface.cp(x0), w);
      continue;
    }

    const double t = 1.0 + surface.phi(x0);
    if (!(t > 0.0)) {
      throw Error("tube validity 1 + phi > 0 violated at a band node; the band reaches the center");
    }
    const double coef = t * t * inv_dx2;
    for (int a = 0; a < 3; ++a) {
      for (int m = -1; m <= 1; m += 2) {
        const std::int32_t col =
            band_neighbor(grid, band, id, a == 0 ? m : 0, a == 1 ? m : 0, a == 2 ? m : 0);
        trip.emplace_back(static_cast<int>(r), col, -coef);
      }
    }
    trip.emplace_back(static_cast<int>(r), static_cast<int>(r), surface.c_field(x0) + 6.0 * coef);
  }

  SparseSystem sys;
  sys.A.resize(n, n);
  sys.A.setFromTriplets(trip.begin(), trip.end());
  sys.A.makeCompressed();
  sys.b = embedded_rhs(grid, surface, band, true);
  sys.band = &band;
  sys.method = Method::CACP;
  sys.omega = w;
  return sys;
}

SparseSystem assemble(Method method, const GridSpec& grid, const Surface& surface,
                      const BandMap& band, CoeffVariant variant) {
  if (method == Method::CP) return assemble_cp(grid, surface, band);
  return grid.dim == 2 ? assemble_cacp_2d(grid, surface, band, variant)
                       : assemble_cacp_sphere(grid, surface, band);
}

double side_condition_defect(const GridSpec& grid, const Surface& surface, const BandMap& band,
                             const Eigen::VectorXd& gamma) {
  if (gamma.size() != band.size()) throw Error("solution vector does not match the band size");
  const std::vector<Vec> cps = band_closest_points(grid, surface, band);
  const SpMat E3 = build_interp_matrix(grid, band, cps, 3);
  return (gamma - E3 * gamma).cwiseAbs().maxCoeff();
}

}  // namespace cacp
