#pragma once

#include <cstdint>
#include <vector>

#include "cacp/core.hpp"
#include "cacp/surface.hpp"

namespace cacp {

/// Uniform Cartesian grid over an axis-aligned box with equal extent on
/// every axis. Nodes are lower + i * dx, i in [0, M].
struct GridSpec {
  int dim = 2;
  Vec lower{};
  Vec upper{};
  int M = 0;
  double dx = 0.0;

  std::int64_t nodes_per_axis() const { return M + 1; }

  std::int64_t node_count() const {
    std::int64_t n = 1;
    for (int a = 0; a < dim; ++a) n *= nodes_per_axis();
    return n;
  }

  double coord(int axis, int idx) const { return lower[axis] + idx * dx; }

  Vec node(int i, int j, int k = 0) const {
    return {coord(0, i), coord(1, j), dim == 3 ? coord(2, k) : 0.0};
  }

  /// Flat node id in lexicographic multi-index order (first axis major).
  std::int64_t flat(int i, int j, int k = 0) const {
    std::int64_t n = nodes_per_axis();
    return dim == 3 ? (static_cast<std::int64_t>(i) * n + j) * n + k
                    : static_cast<std::int64_t>(i) * n + j;
  }

  std::array<int, 3> unflat(std::int64_t id) const {
    std::int64_t n = nodes_per_axis();
    std::array<int, 3> idx{0, 0, 0};
    if (dim == 3) {
      idx[2] = static_cast<int>(id % n);
      id /= n;
    }
    idx[1] = static_cast<int>(id % n);
    idx[0] = static_cast<int>(id / n);
    return idx;
  }

  bool contains(const Vec& p) const {
    for (int a = 0; a < dim; ++a)
      if (p[a] < lower[a] || p[a] > upper[a]) return false;
    return true;
  }
};

/// Validates the box (equal extents, M >= 4) and computes dx.
GridSpec build_grid(int dim, const Vec& lower, const Vec& upper, int M);

enum class NodeLabel : std::uint8_t { Outside = 0, Interpolation = 1, Edge = 2 };

/// Per-node labels: Interpolation nodes carry PDE rows, Edge nodes close the
/// band for the interpolation stencils, everything else is Outside.
struct NodeClassification {
  GridSpec grid;
  int q = 3;
  std::vector<std::uint8_t> label;

  NodeLabel at(std::int64_t flat_id) const { return static_cast<NodeLabel>(label[flat_id]); }
};

/// Marks every node of the degree-q interpolation stencil of cp(x) as
/// Interpolation, for all nodes x with |phi(x)| within the band-seed radius
/// (q+2) * dx * sqrt(dim). Edge nodes are the remaining axis neighbors of
/// Interpolation nodes; they close every stencil the assembly uses.
NodeClassification classify_nodes(const GridSpec& grid, const Surface& surface, int q = 3);

/// Bijection between band nodes (Interpolation plus Edge) and row indices,
/// in lexicographic node order.
struct BandMap {
  GridSpec grid;
  std::vector<std::int64_t> row_to_node;
  std::vector<std::int32_t> node_to_row;  // -1 for nodes outside the band
  std::vector<std::uint8_t> row_label;
  std::int64_t interp_count = 0;
  std::int64_t edge_count = 0;

  std::int64_t size() const { return static_cast<std::int64_t>(row_to_node.size()); }
  NodeLabel label_of_row(std::int64_t r) const { return static_cast<NodeLabel>(row_label[r]); }
  std::int32_t row_of(std::int64_t flat_id) const { return node_to_row[flat_id]; }
};

BandMap enumerate_band(const NodeClassification& cls);

}  // namespace cacp
