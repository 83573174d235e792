#include "cacp/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <cmath>
#include <string>

namespace cacp {

namespace {

double rel_residual_inf(const SpMat& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  double bn = b.cwiseAbs().maxCoeff();
  if (bn == 0.0) bn = 1.0;
  return (A * x - b).cwiseAbs().maxCoeff() / bn;
}

SolveReport solve_direct(const SparseSystem& sys) {
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(sys.A);
  lu.factorize(sys.A);
  if (lu.info() != Eigen::Success) throw Error("sparse LU factorization failed");
  SolveReport rep;
  rep.gamma = lu.solve(sys.b);
  rep.rel_residual = rel_residual_inf(sys.A, rep.gamma, sys.b);
  if (!(rep.rel_residual <= 1e-10)) {
    throw Error("direct solve residual " + std::to_string(rep.rel_residual) +
                " exceeds 1e-10; the system is near-singular");
  }
  return rep;
}

SolveReport solve_iterative(const SparseSystem& sys, const SolveOptions& opt) {
  Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<double>> it;
  it.preconditioner().setDroptol(opt.ilut_drop_tol);
  it.preconditioner().setFillfactor(opt.ilut_fill);
  it.setTolerance(opt.tolerance);
  it.setMaxIterations(opt.max_iterations);
  it.compute(sys.A);
  if (it.info() != Eigen::Success) return solve_direct(sys);

  SolveReport rep;
  rep.gamma = it.solve(sys.b);
  rep.rel_residual = rel_residual_inf(sys.A, rep.gamma, sys.b);
  if (it.info() != Eigen::Success || !(rep.rel_residual <= 1e-8)) return solve_direct(sys);
  return rep;
}

}  // namespace

SolveReport solve(const SparseSystem& sys, const SolveOptions& opt) {
  if (sys.A.rows() != sys.A.cols() || sys.A.rows() != sys.b.size())
    throw Error("assembled system has inconsistent dimensions");

  switch (opt.mode) {
    case SolveOptions::Mode::Direct:
      return solve_direct(sys);
    case SolveOptions::Mode::Iterative:
      return solve_iterative(sys, opt);
    case SolveOptions::Mode::Auto:
    default: {
      const bool large3d = sys.band != nullptr && sys.band->grid.dim == 3 &&
                           sys.band->grid.M > 160;
      return large3d ? solve_iterative(sys, opt) : solve_direct(sys);
    }
  }
}

namespace {

// xorshift64: deterministic sign pattern source for estimator restarts.
struct SignStream {
  std::uint64_t state;
  double next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return (state & 1u) ? 1.0 : -1.0;
  }
};

}  // namespace

double estimate_cond1(const SpMat& A, int restarts) {
  const Eigen::Index n = A.rows();
  if (n == 0) throw Error("cannot estimate the condition number of an empty matrix");
  if (restarts < 1) restarts = 1;

  double anorm = 0.0;
  for (Eigen::Index j = 0; j < A.outerSize(); ++j) {
    double colsum = 0.0;
    for (SpMat::InnerIterator itr(A, j); itr; ++itr) colsum += std::abs(itr.value());
    anorm = std::max(anorm, colsum);
  }

  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success)
    throw Error("sparse LU factorization failed in the condition estimator");

  double best = 0.0;
  for (int s = 0; s < restarts; ++s) {
    Eigen::VectorXd x(n);
    if (s == 0) {
      x.setConstant(1.0);
    } else if (s == 1) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double ramp = n > 1 ? 1.0 + static_cast<double>(i) / static_cast<double>(n - 1) : 1.0;
        x[i] = (i % 2 == 0 ? ramp : -ramp);
      }
    } else {
      SignStream rng{0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(s)};
      for (Eigen::Index i = 0; i < n; ++i) x[i] = rng.next();
    }
    x /= x.cwiseAbs().sum();

    double est = 0.0;
    Eigen::Index last_j = -1;
    for (int iter = 0; iter < 20; ++iter) {
      const Eigen::VectorXd y = lu.solve(x);
      const double e = y.cwiseAbs().sum();
      if (e <= est && iter > 0) break;  // no further growth
      est = e;
      const Eigen::VectorXd xi = y.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
      const Eigen::VectorXd z = lu.transpose().solve(xi);
      Eigen::Index j = 0;
      const double zmax = z.cwiseAbs().maxCoeff(&j);
      if (zmax <= z.dot(x) * (1.0 + 1e-14)) break;  // stationary point reached
      if (j == last_j) break;
      x.setZero();
      x[j] = 1.0;
      last_j = j;
    }
    best = std::max(best, est);
  }
  return anorm * best;
}

ErrorNorms error_norms(const Eigen::VectorXd& gamma_num, const Surface& surface,
                       const BandMap& band) {
  if (gamma_num.size() != band.size()) throw Error("solution vector does not match the band size");
  ErrorNorms norms;
  double sq = 0.0;
  for (std::int64_t r = 0; r < band.size(); ++r) {
    const auto idx = band.grid.unflat(band.row_to_node[static_cast<std::size_t>(r)]);
    const Vec x = band.grid.node(idx[0], idx[1], idx[2]);
    const double e = surface.gamma_exact(surface.cp(x)) - gamma_num[r];
    sq += e * e;
    norms.linf = std::max(norms.linf, std::abs(e));
  }
  norms.l2 = std::sqrt(sq / static_cast<double>(band.size()));
  return norms;
}

}  // namespace cacp
