#include "cacp/interp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cacp {

std::array<int, 3> stencil_base(const GridSpec& grid, const Vec& p, int q) {
  if (!grid.contains(p)) {
    throw Error("interpolation point (" + std::to_string(p[0]) + ", " + std::to_string(p[1]) +
                (grid.dim == 3 ? ", " + std::to_string(p[2]) : std::string()) +
                ") lies outside the grid");
  }
  std::array<int, 3> base{0, 0, 0};
  const int shift = (q - 1) / 2;
  for (int a = 0; a < grid.dim; ++a) {
    int cell = static_cast<int>(std::floor((p[a] - grid.lower[a]) / grid.dx));
    cell = std::clamp(cell, 0, grid.M - 1);
    base[a] = std::clamp(cell - shift, 0, grid.M - q);
  }
  return base;
}

namespace {

// Barycentric weights for q+1 equispaced nodes are proportional to
// (-1)^r binom(q, r); the common scale cancels in the normalization.
void axis_weights(double p, double t0, double dx, int q, double* w) {
  for (int r = 0; r <= q; ++r) {
    const double d = p - (t0 + r * dx);
    if (d == 0.0) {  // exact node hit: cardinal weights
      for (int s = 0; s <= q; ++s) w[s] = (s == r) ? 1.0 : 0.0;
      return;
    }
  }
  double binom = 1.0;
  double sum = 0.0;
  for (int r = 0; r <= q; ++r) {
    const double lam = (r % 2 == 0 ? binom : -binom);
    w[r] = lam / (p - (t0 + r * dx));
    sum += w[r];
    binom = binom * (q - r) / (r + 1);
  }
  for (int r = 0; r <= q; ++r) w[r] /= sum;
}

}  // namespace

InterpStencil interpolation_weights(const GridSpec& grid, const Vec& p, int q) {
  InterpStencil st;
  st.dim = grid.dim;
  st.q = q;
  st.base = stencil_base(grid, p, q);

  const int n = q + 1;
  std::array<std::vector<double>, 3> axis;
  for (int a = 0; a < grid.dim; ++a) {
    axis[a].resize(static_cast<std::size_t>(n));
    axis_weights(p[a], grid.coord(a, st.base[a]), grid.dx, q, axis[a].data());
  }

  if (grid.dim == 3) {
    st.w.resize(static_cast<std::size_t>(n) * n * n);
    for (int di = 0; di < n; ++di)
      for (int dj = 0; dj < n; ++dj)
        for (int dk = 0; dk < n; ++dk)
          st.w[st.weight_index(di, dj, dk)] = axis[0][di] * axis[1][dj] * axis[2][dk];
  } else {
    st.w.resize(static_cast<std::size_t>(n) * n);
    for (int di = 0; di < n; ++di)
      for (int dj = 0; dj < n; ++dj) st.w[st.weight_index(di, dj)] = axis[0][di] * axis[1][dj];
  }
  return st;
}

SpMat build_interp_matrix(const GridSpec& grid, const BandMap& band,
                          const std::vector<Vec>& targets, int q) {
  using T = Eigen::Triplet<double>;
  std::vector<T> trip;
  const int n = q + 1;
  trip.reserve(targets.size() * static_cast<std::size_t>(grid.dim == 3 ? n * n * n : n * n));

  for (std::size_t r = 0; r < targets.size(); ++r) {
    const InterpStencil st = interpolation_weights(grid, targets[r], q);
    const int kmax = grid.dim == 3 ? n : 1;
    for (int di = 0; di < n; ++di) {
      for (int dj = 0; dj < n; ++dj) {
        for (int dk = 0; dk < kmax; ++dk) {
          const double w = st.w[st.weight_index(di, dj, dk)];
          if (w == 0.0) continue;
          const int i = st.base[0] + di, j = st.base[1] + dj, k = st.base[2] + dk;
          const std::int32_t col = band.row_of(grid.flat(i, j, k));
          if (col < 0) {
            throw Error("interpolation stencil touches node (" + std::to_string(i) + ", " +
                        std::to_string(j) + (grid.dim == 3 ? ", " + std::to_string(k) : std::string()) +
                        ") outside the band; classification is inconsistent");
          }
          trip.emplace_back(static_cast<int>(r), col, w);
        }
      }
    }
  }

  SpMat E(static_cast<Eigen::Index>(targets.size()), static_cast<Eigen::Index>(band.size()));
  E.setFromTriplets(trip.begin(), trip.end());
  return E;
}

}  // namespace cacp
