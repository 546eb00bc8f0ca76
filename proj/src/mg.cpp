#include "nnflow/mg.hpp"

#include <stdexcept>

namespace nnflow {

StressVelocityMG::StressVelocityMG(const MeshHierarchy& h, const std::vector<ProblemDefinition>& levels,
                                   MGConfig cfg)
    : h_(&h), levels_(&levels), cfg_(cfg) {
  const int L = static_cast<int>(levels.size());
  if (L != h.n_levels()) throw std::invalid_argument("StressVelocityMG: level count mismatch");
  Z_.resize(L);
  relax_.resize(L);
  patches_.resize(L);
  for (int l = 1; l < L; ++l) patches_[l] = macrostar_patches(h.levels[l], h.macro[l]);
  transfers_.reserve(L - 1);
  for (int p = 0; p + 1 < L; ++p)
    transfers_.push_back(build_transfer(h, p, levels[p], levels[p + 1], levels[p + 1].gamma, cfg_.nu_prol));
}

void StressVelocityMG::update(const BlockField& fine_state, const LinearSystem* fine_sys) {
  const auto& levels = *levels_;
  const int L = static_cast<int>(levels.size());
  const auto states = inject_state(levels, transfers_, fine_state);
  for (int l = 0; l < L; ++l) {
    if (l == L - 1 && fine_sys) {
      Z_[l] = combine_z(*fine_sys);
    } else {
      const JacobianBlocks blocks = assemble_jacobian(levels[l], states[l]);
      const LinearSystem sys = build_system(levels[l], blocks);
      Z_[l] = combine_z(sys);
    }
    if (l == 0) {
      Z0cm_ = Z_[0];
      coarse_lu_.compute(Z0cm_);
      if (coarse_lu_.info() != Eigen::Success)
        throw std::runtime_error("StressVelocityMG: coarse factorization failed");
    } else {
      relax_[l] = std::make_unique<PatchSolver>(levels[l], patches_[l], Z_[l], cfg_.jacobi_relax);
    }
  }
}

void StressVelocityMG::relax(int l, const Eigen::VectorXd& r, Eigen::VectorXd& z) const {
  const SpMat& Z = Z_[l];
  const PatchSolver& ps = *relax_[l];
  gmres_relax([&Z](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = Z * x; },
              [&ps](const Eigen::VectorXd& x, Eigen::VectorXd& y) { ps.apply(x, y); }, r, z, cfg_.sweeps);
}

void StressVelocityMG::zero_constrained(int l, Eigen::VectorXd& v) const {
  const ProblemDefinition& prob = (*levels_)[l];
  const int nS = prob.nS();
  for (int d = 0; d < prob.nU(); ++d)
    if (prob.u_constrained[d]) v[nS + d] = 0.0;
}

void StressVelocityMG::cycle(int l, const Eigen::VectorXd& r, Eigen::VectorXd& z, bool fcycle) const {
  if (l == 0) {
    z = coarse_lu_.solve(r);
    return;
  }
  relax(l, r, z);

  Eigen::VectorXd rr = r - Z_[l] * z;
  Eigen::VectorXd rc;
  transfers_[l - 1].restrict_z(rr, rc);
  zero_constrained(l - 1, rc);

  Eigen::VectorXd zc;
  cycle(l - 1, rc, zc, fcycle);
  if (fcycle) {
    const Eigen::VectorXd rc2 = rc - Z_[l - 1] * zc;
    Eigen::VectorXd zc2;
    cycle(l - 1, rc2, zc2, false);
    zc += zc2;
  }

  Eigen::VectorXd dz;
  transfers_[l - 1].prolong(zc, dz);
  zero_constrained(l, dz);
  z += dz;

  rr = r - Z_[l] * z;
  Eigen::VectorXd z2;
  relax(l, rr, z2);
  z += z2;
}

void StressVelocityMG::apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const {
  const int top = static_cast<int>(levels_->size()) - 1;
  cycle(top, r, z, true);
  for (int c = 1; c < cfg_.cycles; ++c) {
    const Eigen::VectorXd rr = r - Z_[top] * z;
    Eigen::VectorXd dz;
    cycle(top, rr, dz, true);
    z += dz;
  }
}

}  // namespace nnflow
