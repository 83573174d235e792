#include "cacp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cacp/interp.hpp"

namespace cacp {

GridSpec build_grid(int dim, const Vec& lower, const Vec& upper, int M) {
  if (dim != 2 && dim != 3) throw Error("grid dimension must be 2 or 3");
  if (M < 4) throw Error("grid resolution must be at least 4, got " + std::to_string(M));
  const double extent = upper[0] - lower[0];
  if (!(extent > 0.0)) throw Error("grid upper bound must exceed lower bound");
  for (int a = 1; a < dim; ++a) {
    if (std::abs((upper[a] - lower[a]) - extent) > 1e-12 * extent)
      throw Error("grid extents must be equal on every axis");
  }
  GridSpec g;
  g.dim = dim;
  g.lower = lower;
  g.upper = upper;
  g.M = M;
  g.dx = extent / M;
  return g;
}

namespace {

std::string node_name(const GridSpec& grid, int i, int j, int k) {
  std::string s = "(" + std::to_string(i) + ", " + std::to_string(j);
  if (grid.dim == 3) s += ", " + std::to_string(k);
  return s + ")";
}

}  // namespace

NodeClassification classify_nodes(const GridSpec& grid, const Surface& surface, int q) {
  if (q < 1) throw Error("interpolation degree must be positive");
  if (surface.dim() != grid.dim) throw Error("surface dimension does not match grid");
  if (grid.M < q + 1) throw Error("grid too coarse for the interpolation degree");

  NodeClassification cls;
  cls.grid = grid;
  cls.q = q;
  cls.label.assign(static_cast<std::size_t>(grid.node_count()), 0);

  const double seed_radius = (q + 2) * grid.dx * std::sqrt(static_cast<double>(grid.dim));
  const int n = static_cast<int>(grid.nodes_per_axis());
  const int kmax = grid.dim == 3 ? n : 1;

  // Pass 1: every node close enough to the surface contributes the full
  // degree-q stencil of its closest point.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < kmax; ++k) {
        const Vec x = grid.node(i, j, k);
        if (surface.phi_lower_bound(x) > seed_radius) continue;
        if (std::abs(surface.phi(x)) > seed_radius) continue;

        const Vec p = surface.cp(x);
        if (!grid.contains(p)) {
          throw Error("closest point of node " + node_name(grid, i, j, k) +
                      " falls outside the grid; enlarge the domain");
        }
        const std::array<int, 3> base = stencil_base(grid, p, q);
        for (int di = 0; di <= q; ++di) {
          for (int dj = 0; dj <= q; ++dj) {
            if (grid.dim == 3) {
              for (int dk = 0; dk <= q; ++dk)
                cls.label[grid.flat(base[0] + di, base[1] + dj, base[2] + dk)] = 1;
            } else {
              cls.label[grid.flat(base[0] + di, base[1] + dj)] = 1;
            }
          }
        }
      }
    }
  }

  // Pass 2: axis neighbors of interpolation nodes close the band. Every
  // stencil the assembly builds (difference stencils at interpolation nodes,
  // degree-3 stencils at closest points) stays within this closure.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < kmax; ++k) {
        if (cls.label[grid.flat(i, j, k)] != 1) continue;
        for (int a = 0; a < grid.dim; ++a) {
          for (int m = -1; m <= 1; m += 2) {
            const int ii = i + (a == 0 ? m : 0);
            const int jj = j + (a == 1 ? m : 0);
            const int kk = k + (a == 2 ? m : 0);
            if (ii < 0 || ii >= n || jj < 0 || jj >= n) continue;
            if (grid.dim == 3 && (kk < 0 || kk >= n)) continue;
            std::uint8_t& lab = cls.label[grid.flat(ii, jj, kk)];
            if (lab == 0) lab = 2;
          }
        }
      }
    }
  }

  return cls;
}

BandMap enumerate_band(const NodeClassification& cls) {
  BandMap band;
  band.grid = cls.grid;
  const std::int64_t total = cls.grid.node_count();
  band.node_to_row.assign(static_cast<std::size_t>(total), -1);

  for (std::int64_t id = 0; id < total; ++id) {
    const std::uint8_t lab = cls.label[static_cast<std::size_t>(id)];
    if (lab == 0) continue;
    band.node_to_row[static_cast<std::size_t>(id)] =
        static_cast<std::int32_t>(band.row_to_node.size());
    band.row_to_node.push_back(id);
    band.row_label.push_back(lab);
    if (lab == 1)
      ++band.interp_count;
    else
      ++band.edge_count;
  }
  return band;
}

}  // namespace cacp
