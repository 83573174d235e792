#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "cacp/grid.hpp"

namespace cacp {

using SpMat = Eigen::SparseMatrix<double>;

/// Tensor-product Lagrange stencil of degree q anchored at a base node.
/// Weights are stored with the first axis slowest, matching flat node order.
struct InterpStencil {
  std::array<int, 3> base{0, 0, 0};
  int dim = 2;
  int q = 3;
  std::vector<double> w;

  int per_axis() const { return q + 1; }
  std::size_t weight_index(int di, int dj, int dk = 0) const {
    int n = per_axis();
    return dim == 3 ? static_cast<std::size_t>((di * n + dj) * n + dk)
                    : static_cast<std::size_t>(di * n + dj);
  }
};

/// Base node of the degree-q stencil containing p: per axis
///   base = floor((p - lower)/dx) - floor((q-1)/2), clamped into the grid.
/// Throws if p lies outside the grid.
std::array<int, 3> stencil_base(const GridSpec& grid, const Vec& p, int q);

/// Barycentric Lagrange weights for interpolating at p from the degree-q
/// stencil anchored at stencil_base(grid, p, q).
InterpStencil interpolation_weights(const GridSpec& grid, const Vec& p, int q);

/// Sparse interpolation matrix: row r holds the degree-q weights for
/// targets[r], with columns indexed by band rows. Exact zero weights are not
/// stored. Throws, naming the node, if a stencil touches a non-band node.
SpMat build_interp_matrix(const GridSpec& grid, const BandMap& band,
                          const std::vector<Vec>& targets, int q);

}  // namespace cacp
