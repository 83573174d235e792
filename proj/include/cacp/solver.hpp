#pragma once

#include <Eigen/Dense>
#include <optional>

#include "cacp/assembly.hpp"

namespace cacp {

struct SolveOptions {
  enum class Mode { Auto, Direct, Iterative };
  Mode mode = Mode::Auto;
  // Iterative path (BiCGSTAB with incomplete-LU preconditioning).
  double tolerance = 1e-13;
  int max_iterations = 2000;
  double ilut_drop_tol = 1e-5;
  int ilut_fill = 12;
};

struct SolveReport {
  Eigen::VectorXd gamma;
  double rel_residual = 0.0;  // ||A gamma - b||_inf / ||b||_inf
};

/// Solves the band system. Direct solves use sparse LU with fill-reducing
/// ordering and must reach a relative residual of 1e-10; the iterative mode
/// falls back to the direct path if it stalls. Auto picks the iterative
/// path only for large 3D systems.
SolveReport solve(const SparseSystem& sys, const SolveOptions& opt = {});

/// 1-norm condition estimate ||A||_1 * est(||A^-1||_1). The inverse norm is
/// estimated Hager-style through the LU factors (forward and transpose
/// solves) with a fixed number of deterministic restarts; the result is a
/// lower bound on the true condition number.
double estimate_cond1(const SpMat& A, int restarts = 5);

struct ErrorNorms {
  double l2 = 0.0;
  double linf = 0.0;
};

/// Discrete errors against gamma_exact(cp(x_k)) over all band rows:
/// root-mean-square and maximum.
ErrorNorms error_norms(const Eigen::VectorXd& gamma_num, const Surface& surface,
                       const BandMap& band);

}  // namespace cacp
