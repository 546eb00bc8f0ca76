#pragma once

#include <functional>
#include <optional>

#include "nnflow/linalg.hpp"
#include "nnflow/rheology.hpp"
#include "nnflow/space.hpp"

namespace nnflow {

// Three-field coefficient state (stress, velocity, pressure).
struct BlockField {
  Eigen::VectorXd S, u, p;
};

double block_norm(const BlockField& f);

struct VelocityBC {
  int marker;
  std::function<Vec2(const Vec2&)> value;
  // Bitmask of constrained components (1 = x, 2 = y, 3 = both). Axis-aligned
  // tangential-only conditions constrain a single component.
  int comp_mask = 3;
};

// Discrete problem on one mesh level: Scott-Vogelius velocity/pressure pair
// of order k plus discontinuous P_{k-1} symmetric traceless stress.
struct ProblemDefinition {
  const Triangulation* mesh = nullptr;
  int k = 2;
  FunctionSpace Ssp, Usp, Psp;
  ConstitutiveModel model = ConstitutiveModel::newtonian(1.0);
  double gamma = 0.0;
  bool stabilization = false;
  double stab_c = 5e-3;
  std::function<Vec2(const Vec2&)> forcing;  // empty -> zero
  std::vector<VelocityBC> bcs;
  bool pressure_nullspace = false;

  std::vector<FacetInfo> facets;
  std::vector<char> u_constrained;  // per velocity dof
  Eigen::VectorXd u_bc_values;

  int nS() const { return Ssp.n_dofs(); }
  int nU() const { return Usp.n_dofs(); }
  int nP() const { return Psp.n_dofs(); }
  int n_total() const { return nS() + nU() + nP(); }

  BlockField zero_state() const;
  // Overwrites constrained velocity dofs with boundary values.
  void apply_dirichlet_values(BlockField& state) const;
};

ProblemDefinition make_problem(const Triangulation& mesh, int k, const ConstitutiveModel& model,
                               double gamma, std::vector<VelocityBC> bcs,
                               std::function<Vec2(const Vec2&)> forcing = {}, bool stabilization = false,
                               bool pressure_nullspace = false);

// Raw Newton blocks at a state (no boundary conditions applied):
//   Q1   <dG/dS sigma, tau>           stress x stress
//   Q2Ct <dG/dD D(v), tau>            stress x velocity
//   C    <sigma, D(w)>                velocity x stress
//   E    -<u~ (x) v + v (x) u~, D(w)> velocity x velocity
//   B    -<q, div v>                  pressure x velocity
//   Gg   gamma <div v, div w>         velocity x velocity
struct JacobianBlocks {
  SpMat Q1, Q2Ct, C, E, B, Gg, Sh;
};

JacobianBlocks assemble_jacobian(const ProblemDefinition& prob, const BlockField& state);

SpMat assemble_pressure_mass(const FunctionSpace& Psp);

// Jump penalty over interior facets with state-dependent weight
// delta_f = stab_c * max over the two cells of the discrete Linf norm of u.
SpMat assemble_stabilization(const ProblemDefinition& prob, const Eigen::VectorXd& u);

// Augmented residual: G-block, momentum with convection/pressure/forcing plus
// gamma grad-div and (when active) stabilization, divergence block. Entries
// at constrained velocity dofs are replaced by u_i - g_i. Sh_frozen, if
// given, is used instead of re-assembling the stabilization at `state`.
// With augmented = false the grad-div term is omitted; the Newton solver
// tracks that plain residual, since at gamma = 1e4 the grad-div term
// amplifies roundoff in div u far above tight absolute tolerances.
BlockField assemble_residual(const ProblemDefinition& prob, const BlockField& state,
                             const SpMat* Sh_frozen = nullptr, bool augmented = true);

// Solver-facing operator with Dirichlet rows set to identity and columns
// dropped. Zuu = E + Gg + Sh.
struct LinearSystem {
  int nS = 0, nU = 0, nP = 0;
  SpMat ZSS, ZSu, ZuS, Zuu, B;
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  // Stress-velocity subblock only.
  void apply_z(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
};

LinearSystem build_system(const ProblemDefinition& prob, const JacobianBlocks& blocks);

// Exact per-cell application of Mp^{-1} (affine DG mass).
struct PressureMassInverse {
  const FunctionSpace* Psp = nullptr;
  Eigen::MatrixXd ref_mass_inv;
  explicit PressureMassInverse(const FunctionSpace& Psp);
  void apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const;
};

}  // namespace nnflow
