#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cacp/grid.hpp"
#include "cacp/interp.hpp"
#include "cacp/surface.hpp"

namespace cacp {

enum class Method { CP, CACP };

/// Face-coefficient evaluation for the variable-coefficient rows:
/// analytic evaluation of (1 + phi kappa) at the face midpoint, or the
/// average of its values at the two adjacent nodes. Both are second-order.
enum class CoeffVariant { FaceMidpoint, NodeAverage };

/// Assembled linear system A gamma = b over the band.
/// The band map is referenced, not owned; keep it alive alongside.
struct SparseSystem {
  SpMat A;
  Eigen::VectorXd b;
  const BandMap* band = nullptr;
  Method method = Method::CP;
  double omega = 0.0;  // side-condition scale 2*dim/dx^2

  std::int64_t nnz() const { return A.nonZeros(); }
};

/// Closest point method: A = C - E1 L + omega (I - E3) with C = diag(c),
/// Laplacian rows of L at Interpolation nodes, identity rows at Edge nodes,
/// and b = m at every band node.
SparseSystem assemble_cp(const GridSpec& grid, const Surface& surface, const BandMap& band);

/// Curvature-augmented method for a planar curve: Interpolation rows carry
/// c gamma - (1 + phi kappa) * (variable-coefficient 5-point formula) with
/// b = m, Edge rows carry the homogeneous side condition omega (I - E3).
/// Throws if 1 + phi kappa <= 0 at any node or face value used.
SparseSystem assemble_cacp_2d(const GridSpec& grid, const Surface& surface, const BandMap& band,
                              CoeffVariant variant = CoeffVariant::NodeAverage);

/// Curvature-augmented method for the unit sphere: Interpolation rows carry
/// c gamma - (1 + phi)^2 * (7-point Laplacian), Edge rows omega (I - E3).
SparseSystem assemble_cacp_sphere(const GridSpec& grid, const Surface& surface,
                                  const BandMap& band);

/// Dispatches on method and surface dimension.
SparseSystem assemble(Method method, const GridSpec& grid, const Surface& surface,
                      const BandMap& band, CoeffVariant variant = CoeffVariant::NodeAverage);

/// Band-sized vector of closest points, indexed by band row.
std::vector<Vec> band_closest_points(const GridSpec& grid, const Surface& surface,
                                     const BandMap& band);

/// Side-condition defect max_k |gamma_k - (E3 gamma)(cp(x_k))| over the band.
double side_condition_defect(const GridSpec& grid, const Surface& surface, const BandMap& band,
                             const Eigen::VectorXd& gamma);

}  // namespace cacp
