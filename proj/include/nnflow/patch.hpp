#pragma once

#include <Eigen/Dense>

#include "nnflow/assembly.hpp"

namespace nnflow {

// Combined stress-velocity operator [[ZSS, ZSu], [ZuS, Zuu]].
SpMat combine_z(const LinearSystem& sys);

// Additive Schwarz relaxation over macrostar patches on the stress-velocity
// block (stress dofs first, then velocity dofs). Each patch couples the
// stress dofs of its cells with the velocity dofs supported inside it,
// Dirichlet dofs excluded; constrained dofs get an identity action so the
// preconditioned operator is exact on them. With jacobi = true the patch
// solves are replaced by pointwise diagonal scaling.
class PatchSolver {
 public:
  PatchSolver(const ProblemDefinition& prob, const std::vector<MacroStarPatch>& patches, const SpMat& Z,
              bool jacobi = false);

  void apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const;

  int n_patches() const { return static_cast<int>(dofs_.size()); }
  const std::vector<std::vector<int>>& patch_dofs() const { return dofs_; }

 private:
  std::vector<std::vector<int>> dofs_;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
  std::vector<int> identity_dofs_;
  Eigen::VectorXd dinv_;
  bool jacobi_ = false;
};

}  // namespace nnflow
