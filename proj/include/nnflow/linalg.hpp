#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <vector>

namespace nnflow {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

struct KrylovConfig {
  double rtol = 1e-10;
  double atol = 1e-50;
  int restart = 100;
  int max_iter = 1000;
};

struct KrylovReport {
  int iterations = 0;
  bool converged = false;
  double final_relative_residual = 0.0;  // true unpreconditioned residual
};

using LinOp = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

// Right-preconditioned flexible GMRES with restarts. prec may vary between
// iterations (inner Krylov cycles are admissible). postprocess, if given, is
// applied to the initial residual and to every preconditioned direction
// (used to project out the constant-pressure nullspace). Convergence is
// declared on the Givens recurrence estimate within a cycle, as is standard;
// final_relative_residual reports the recomputed true residual, which can sit
// above rtol when the target is near the floating point floor.
KrylovReport fgmres(const LinOp& op, const LinOp& prec, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                    const KrylovConfig& cfg, const std::function<void(Eigen::VectorXd&)>& postprocess = {});

// Fixed-iteration GMRES relaxation: runs exactly `sweeps` iterations of
// right-preconditioned GMRES for A z = r starting from z = 0 and returns z.
void gmres_relax(const LinOp& op, const LinOp& prec, const Eigen::VectorXd& r, Eigen::VectorXd& z, int sweeps);

}  // namespace nnflow
