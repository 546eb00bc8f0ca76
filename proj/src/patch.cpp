#include "nnflow/patch.hpp"

#include <cmath>
#include <map>

namespace nnflow {

SpMat combine_z(const LinearSystem& sys) {
  const int nS = sys.nS, nU = sys.nU;
  std::vector<Triplet> trips;
  trips.reserve(sys.ZSS.nonZeros() + sys.ZSu.nonZeros() + sys.ZuS.nonZeros() + sys.Zuu.nonZeros());
  auto add = [&trips](const SpMat& A, int ro, int co) {
    for (int r = 0; r < A.outerSize(); ++r)
      for (SpMat::InnerIterator it(A, r); it; ++it) trips.emplace_back(ro + it.row(), co + it.col(), it.value());
  };
  add(sys.ZSS, 0, 0);
  add(sys.ZSu, 0, nS);
  add(sys.ZuS, nS, 0);
  add(sys.Zuu, nS, nS);
  SpMat Z(nS + nU, nS + nU);
  Z.setFromTriplets(trips.begin(), trips.end());
  return Z;
}

PatchSolver::PatchSolver(const ProblemDefinition& prob, const std::vector<MacroStarPatch>& patches,
                         const SpMat& Z, bool jacobi)
    : jacobi_(jacobi) {
  const int nS = prob.nS();
  const FunctionSpace& Usp = prob.Usp;

  for (int d = 0; d < prob.nU(); ++d)
    if (prob.u_constrained[d]) identity_dofs_.push_back(nS + d);

  if (jacobi_) {
    dinv_ = Eigen::VectorXd::Zero(Z.rows());
    for (int r = 0; r < Z.outerSize(); ++r)
      for (SpMat::InnerIterator it(Z, r); it; ++it)
        if (it.col() == r) dinv_[r] = std::abs(it.value()) > 1e-300 ? 1.0 / it.value() : 1.0;
    return;
  }

  std::vector<int> ginc(Usp.n_scalar_nodes, 0);
  for (int c = 0; c < prob.mesh->n_cells(); ++c)
    for (int l = 0; l < Usp.nodes_per_cell; ++l) ginc[Usp.node(c, l)]++;

  dofs_.reserve(patches.size());
  lu_.reserve(patches.size());
  std::vector<int> loc(Z.rows(), -1);
  for (const auto& patch : patches) {
    std::vector<int> dofs;
    for (int c : patch.fine_cells)
      for (int l = 0; l < prob.Ssp.nodes_per_cell; ++l)
        for (int comp = 0; comp < 2; ++comp) dofs.push_back(prob.Ssp.dof(c, l, comp));
    std::map<int, int> pinc;
    for (int c : patch.fine_cells)
      for (int l = 0; l < Usp.nodes_per_cell; ++l) pinc[Usp.node(c, l)]++;
    for (const auto& [n, cnt] : pinc) {
      if (cnt != ginc[n]) continue;
      for (int comp = 0; comp < 2; ++comp) {
        const int d = n * 2 + comp;
        if (!prob.u_constrained[d]) dofs.push_back(nS + d);
      }
    }

    const int nd = static_cast<int>(dofs.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nd, nd);
    for (int i = 0; i < nd; ++i) loc[dofs[i]] = i;
    for (int i = 0; i < nd; ++i)
      for (SpMat::InnerIterator it(Z, dofs[i]); it; ++it)
        if (loc[it.col()] >= 0) A(i, loc[it.col()]) = it.value();
    for (int i = 0; i < nd; ++i) loc[dofs[i]] = -1;

    lu_.emplace_back(A);
    dofs_.push_back(std::move(dofs));
  }
}

void PatchSolver::apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const {
  z = Eigen::VectorXd::Zero(r.size());
  if (jacobi_) {
    z = dinv_.cwiseProduct(r);
    return;
  }
  Eigen::VectorXd rp, zp;
  for (size_t p = 0; p < dofs_.size(); ++p) {
    const auto& dofs = dofs_[p];
    rp.resize(dofs.size());
    for (size_t i = 0; i < dofs.size(); ++i) rp[static_cast<int>(i)] = r[dofs[i]];
    zp = lu_[p].solve(rp);
    for (size_t i = 0; i < dofs.size(); ++i) z[dofs[i]] += zp[static_cast<int>(i)];
  }
  for (int d : identity_dofs_) z[d] = r[d];
}

}  // namespace nnflow
