#pragma once

#include "nnflow/mg.hpp"

namespace nnflow {

// Mesh hierarchy plus one discrete problem per level (the last one is the
// level actually solved).
struct HierarchyProblem {
  MeshHierarchy h;
  std::vector<ProblemDefinition> levels;
  ProblemDefinition& fine() { return levels.back(); }
  const ProblemDefinition& fine() const { return levels.back(); }
};

struct NewtonConfig {
  double tol = 1e-8;  // absolute l2 residual
  int max_iter = 100;
  bool line_search = true;
  double nu_schur = 1.0;  // viscosity weight in the pressure Schur complement
  KrylovConfig krylov;
  MGConfig mg;
};

struct NewtonReport {
  int iterations = 0;
  long krylov_total = 0;
  bool converged = false;
  double residual = 0.0;
};

Eigen::VectorXd flatten(const BlockField& f);
BlockField unflatten(const ProblemDefinition& prob, const Eigen::VectorXd& v);

// Quadratic fit of the squared residual through lambda = 0, 1/2, 1, clamped
// to [0.1, 1]; the full step is accepted outright when it reduces the
// squared residual by 4x.
double line_search_l2(const std::function<double(double)>& phi_sq, double phi0_sq);

NewtonReport newton_solve(HierarchyProblem& hp, StressVelocityMG& mg, BlockField& state,
                          const NewtonConfig& cfg);

// One preconditioned solve of the linearization at `state` with right hand
// side -F(state); the update is returned in dx if given.
KrylovReport solve_linearized(HierarchyProblem& hp, StressVelocityMG& mg, const BlockField& state,
                              const NewtonConfig& cfg, BlockField* dx = nullptr);

// cur + t (cur - prev), the secant continuation predictor.
BlockField secant_extrapolate(const BlockField& prev, const BlockField& cur, double t);

// Central-difference check of the assembled Jacobian along random directions
// (constrained dofs excluded, stabilization weight frozen at the base
// state). Returns the maximum relative error over directions.
double jacobian_fd_check(const ProblemDefinition& prob, const BlockField& state, int ndirs = 5,
                         unsigned seed = 12345);

}  // namespace nnflow
