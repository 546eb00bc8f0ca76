#pragma once

#include "nnflow/assembly.hpp"
#include "nnflow/supermesh.hpp"

namespace nnflow {

// Nodal interpolation between Vector2 spaces on different meshes of the same
// domain: rows are `to` dofs, columns `from` dofs; entry = from-basis value
// at the to-node point (located deterministically in the from-mesh).
SpMat nodal_interpolation(const FunctionSpace& from, const FunctionSpace& to);

// Scalar mixed mass from a supermesh: rows fine scalar nodes, columns coarse
// scalar nodes, entries int phi_f phi_c over supermesh triangles.
SpMat supermesh_mixed_mass(const Supermesh& sm, const FunctionSpace& coarse_scalar,
                           const FunctionSpace& fine_scalar);

// Transfer operators between consecutive hierarchy levels (coarse = level l,
// fine = level l+1).
struct LevelTransfer {
  SpMat Pu;  // corrected velocity prolongation (fine nU x coarse nU)
  SpMat Ps;  // stress L2 projection coarse -> fine (fine nS x coarse nS)
  SpMat Iu;  // velocity nodal injection fine -> coarse
  SpMat Is;  // stress L2 projection fine -> coarse
  // Block prolongation/restriction on stress-velocity vectors.
  void prolong(const Eigen::VectorXd& zc, Eigen::VectorXd& zf) const;
  void restrict_z(const Eigen::VectorXd& rf, Eigen::VectorXd& rc) const;
  int nS_c = 0, nU_c = 0, nS_f = 0, nU_f = 0;
};

// gamma enters the divergence penalty of the local prolongation correction;
// nu_prol the viscous term.
LevelTransfer build_transfer(const MeshHierarchy& h, int pair, const ProblemDefinition& coarse,
                             const ProblemDefinition& fine, double gamma, double nu_prol);

// Velocity interpolation without the divergence correction (reference /
// diagnostics path).
SpMat velocity_prolongation_plain(const ProblemDefinition& coarse, const ProblemDefinition& fine);

// Galerkin-inject a fine-level state to all coarser levels.
// states[l] for l = 0..L, states[L] = fine_state.
std::vector<BlockField> inject_state(const std::vector<ProblemDefinition>& levels,
                                     const std::vector<LevelTransfer>& transfers, const BlockField& fine_state);

}  // namespace nnflow
