#pragma once

#include <Eigen/SparseLU>
#include <memory>

#include "nnflow/patch.hpp"
#include "nnflow/transfer.hpp"

namespace nnflow {

struct MGConfig {
  int cycles = 2;        // F-cycles per preconditioner application
  int sweeps = 5;        // GMRES-wrapped relaxation iterations per smoothing step
  double nu_prol = 1.0;  // viscous weight in the prolongation correction
  bool jacobi_relax = false;
};

// Monolithic multigrid on the stress-velocity block. Level operators are
// rediscretized at states injected from the finest level, the relaxation is
// GMRES-wrapped additive macrostar patch relaxation, cycles are F-cycles
// with a direct solve on the coarsest level.
class StressVelocityMG {
 public:
  StressVelocityMG(const MeshHierarchy& h, const std::vector<ProblemDefinition>& levels, MGConfig cfg);

  // Rebuild all level operators at the given fine state; fine_sys, if given,
  // is reused as the finest-level operator instead of reassembling.
  void update(const BlockField& fine_state, const LinearSystem* fine_sys = nullptr);

  // Approximate solve of Z z = r on the finest level.
  void apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const;

  const SpMat& level_z(int l) const { return Z_[l]; }
  const LevelTransfer& transfer(int pair) const { return transfers_[pair]; }
  int n_levels() const { return static_cast<int>(levels_->size()); }

 private:
  void relax(int l, const Eigen::VectorXd& r, Eigen::VectorXd& z) const;
  void cycle(int l, const Eigen::VectorXd& r, Eigen::VectorXd& z, bool fcycle) const;
  void zero_constrained(int l, Eigen::VectorXd& v) const;

  const MeshHierarchy* h_;
  const std::vector<ProblemDefinition>* levels_;
  MGConfig cfg_;
  std::vector<LevelTransfer> transfers_;
  std::vector<std::vector<MacroStarPatch>> patches_;
  std::vector<SpMat> Z_;
  std::vector<std::unique_ptr<PatchSolver>> relax_;
  Eigen::SparseMatrix<double> Z0cm_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> coarse_lu_;
};

}  // namespace nnflow
