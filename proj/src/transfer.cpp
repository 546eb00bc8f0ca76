#include "nnflow/transfer.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace nnflow {

SpMat nodal_interpolation(const FunctionSpace& from, const FunctionSpace& to) {
  if (from.ncomp != to.ncomp) throw std::invalid_argument("nodal_interpolation: component mismatch");
  CellLocator locator(*from.mesh);
  std::vector<Triplet> trips;
  Eigen::VectorXd vals(from.nodes_per_cell);
  for (int n = 0; n < to.n_scalar_nodes; ++n) {
    const Vec2 x = to.node_points[n];
    const int c = locator.locate(x);
    if (c < 0) throw std::runtime_error("nodal_interpolation: node outside source mesh");
    from.elem.eval(from.mesh->reference_coords(c, x), vals);
    for (int l = 0; l < from.nodes_per_cell; ++l) {
      if (std::abs(vals[l]) < 1e-13) continue;
      const int g = from.node(c, l);
      for (int comp = 0; comp < from.ncomp; ++comp)
        trips.emplace_back(n * to.ncomp + comp, g * from.ncomp + comp, vals[l]);
    }
  }
  SpMat M(to.n_dofs(), from.n_dofs());
  M.setFromTriplets(trips.begin(), trips.end());
  return M;
}

SpMat supermesh_mixed_mass(const Supermesh& sm, const FunctionSpace& coarse_scalar,
                           const FunctionSpace& fine_scalar) {
  const auto rule = triangle_rule(coarse_scalar.elem.degree() + fine_scalar.elem.degree());
  std::vector<Triplet> trips;
  Eigen::VectorXd phc(coarse_scalar.nodes_per_cell), phf(fine_scalar.nodes_per_cell);
  for (const auto& t : sm.tris) {
    const Vec2 e1 = t.v[1] - t.v[0], e2 = t.v[2] - t.v[0];
    const double det = 2.0 * t.area;
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 x = t.v[0] + rule.points[q][0] * e1 + rule.points[q][1] * e2;
      coarse_scalar.elem.eval(coarse_scalar.mesh->reference_coords(t.parent_coarse, x), phc);
      fine_scalar.elem.eval(fine_scalar.mesh->reference_coords(t.parent_fine, x), phf);
      const double w = rule.weights[q] * det;
      for (int i = 0; i < fine_scalar.nodes_per_cell; ++i) {
        const int r = fine_scalar.node(t.parent_fine, i);
        const double wi = w * phf[i];
        for (int j = 0; j < coarse_scalar.nodes_per_cell; ++j)
          trips.emplace_back(r, coarse_scalar.node(t.parent_coarse, j), wi * phc[j]);
      }
    }
  }
  SpMat M(fine_scalar.n_dofs(), coarse_scalar.n_dofs());
  M.setFromTriplets(trips.begin(), trips.end());
  return M;
}

namespace {

// Rows of M come grouped per cell of the (cell-major, discontinuous) scalar
// space sp; premultiply each group by the local mass inverse.
SpMat mass_solve_rows(const SpMat& M, const FunctionSpace& sp) {
  const int npl = sp.nodes_per_cell;
  const auto rule = triangle_rule(2 * sp.elem.degree());
  const Tabulation tab = tabulate(sp.elem, rule.points);
  Eigen::MatrixXd Mref = Eigen::MatrixXd::Zero(npl, npl);
  for (size_t q = 0; q < rule.points.size(); ++q)
    Mref += rule.weights[q] * tab.values.row(q).transpose() * tab.values.row(q);
  const Eigen::MatrixXd Mref_inv = Mref.inverse();

  std::vector<Triplet> trips;
  std::vector<int> cols;
  std::map<int, int> colmap;
  for (int c = 0; c < sp.mesh->n_cells(); ++c) {
    cols.clear();
    colmap.clear();
    for (int l = 0; l < npl; ++l)
      for (SpMat::InnerIterator it(M, c * npl + l); it; ++it) {
        auto [pos, inserted] = colmap.try_emplace(it.col(), static_cast<int>(cols.size()));
        if (inserted) cols.push_back(it.col());
      }
    if (cols.empty()) continue;
    Eigen::MatrixXd loc = Eigen::MatrixXd::Zero(npl, static_cast<int>(cols.size()));
    for (int l = 0; l < npl; ++l)
      for (SpMat::InnerIterator it(M, c * npl + l); it; ++it) loc(l, colmap.at(it.col())) += it.value();
    const Eigen::MatrixXd out = Mref_inv * loc / (2.0 * sp.mesh->cell_area(c));
    for (int l = 0; l < npl; ++l)
      for (size_t jc = 0; jc < cols.size(); ++jc)
        trips.emplace_back(c * npl + l, cols[jc], out(l, static_cast<int>(jc)));
  }
  SpMat R(M.rows(), M.cols());
  R.setFromTriplets(trips.begin(), trips.end());
  return R;
}

// Duplicate a scalar coupling onto interleaved two-component dofs.
SpMat expand2(const SpMat& A) {
  std::vector<Triplet> trips;
  trips.reserve(2 * A.nonZeros());
  for (int r = 0; r < A.outerSize(); ++r)
    for (SpMat::InnerIterator it(A, r); it; ++it)
      for (int comp = 0; comp < 2; ++comp)
        trips.emplace_back(2 * it.row() + comp, 2 * it.col() + comp, it.value());
  SpMat B(2 * A.rows(), 2 * A.cols());
  B.setFromTriplets(trips.begin(), trips.end());
  return B;
}

}  // namespace

SpMat velocity_prolongation_plain(const ProblemDefinition& coarse, const ProblemDefinition& fine) {
  return nodal_interpolation(coarse.Usp, fine.Usp);
}

LevelTransfer build_transfer(const MeshHierarchy& h, int pair, const ProblemDefinition& coarse,
                             const ProblemDefinition& fine, double gamma, double nu_prol) {
  LevelTransfer tr;
  tr.nS_c = coarse.nS();
  tr.nU_c = coarse.nU();
  tr.nS_f = fine.nS();
  tr.nU_f = fine.nU();

  SpMat P = nodal_interpolation(coarse.Usp, fine.Usp);

  // Divergence correction: on each coarse macro cell, solve a local grad-div
  // problem in the bubble space of velocity dofs supported inside the cell
  // and subtract the result from the interpolant.
  const FunctionSpace& Usp = fine.Usp;
  const Triangulation& fmesh = *fine.mesh;
  const int npl = Usp.nodes_per_cell;
  std::vector<int> ginc(Usp.n_scalar_nodes, 0);
  for (int c = 0; c < fmesh.n_cells(); ++c)
    for (int l = 0; l < npl; ++l) ginc[Usp.node(c, l)]++;

  const int k = fine.k;
  const auto rule = triangle_rule(2 * (k - 1));
  const Tabulation tab = tabulate(Usp.elem, rule.points);

  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(P.nonZeros()) * 2);
  for (int r = 0; r < P.outerSize(); ++r)
    for (SpMat::InnerIterator it(P, r); it; ++it) trips.emplace_back(it.row(), it.col(), it.value());

  const auto& children = h.macro_child[pair];
  std::vector<Vec2> g(npl);
  std::vector<int> lnode(npl);
  for (size_t K = 0; K < children.size(); ++K) {
    std::vector<int> cells;
    cells.reserve(12);
    for (int m : children[K])
      for (int b = 0; b < 3; ++b) cells.push_back(3 * m + b);

    std::vector<int> nodes;
    std::map<int, int> lid;
    std::vector<int> linc;
    for (int c : cells)
      for (int l = 0; l < npl; ++l) {
        const int n = Usp.node(c, l);
        auto [pos, inserted] = lid.try_emplace(n, static_cast<int>(nodes.size()));
        if (inserted) {
          nodes.push_back(n);
          linc.push_back(0);
        }
        linc[pos->second]++;
      }

    std::vector<int> int_nodes;  // local node indices fully supported in the cell group
    for (size_t i = 0; i < nodes.size(); ++i)
      if (linc[i] == ginc[nodes[i]] && !Usp.on_boundary[nodes[i]]) int_nodes.push_back(static_cast<int>(i));
    if (int_nodes.empty()) continue;

    const int nall = 2 * static_cast<int>(nodes.size());
    const int nint = 2 * static_cast<int>(int_nodes.size());
    Eigen::MatrixXd Lv = Eigen::MatrixXd::Zero(nall, nall);
    Eigen::MatrixXd Ld = Eigen::MatrixXd::Zero(nall, nall);

    for (int c : cells) {
      const Mat2 Jinv = fmesh.cell_jacobian(c).inverse();
      const double detJ = 2.0 * fmesh.cell_area(c);
      for (int l = 0; l < npl; ++l) lnode[l] = lid.at(Usp.node(c, l));
      for (size_t q = 0; q < rule.points.size(); ++q) {
        for (int l = 0; l < npl; ++l) g[l] = Jinv.transpose() * tab.grads[q].row(l).transpose();
        const double w = rule.weights[q] * detJ;
        for (int i = 0; i < npl; ++i)
          for (int j = 0; j < npl; ++j) {
            const double gg = g[i].dot(g[j]);
            for (int a = 0; a < 2; ++a)
              for (int b = 0; b < 2; ++b) {
                const int ri = 2 * lnode[i] + a, cj = 2 * lnode[j] + b;
                Lv(ri, cj) += w * 0.5 * ((a == b ? gg : 0.0) + g[i][b] * g[j][a]);
                Ld(ri, cj) += w * g[i][a] * g[j][b];
              }
          }
      }
    }

    std::vector<int> int_dof(nint);
    for (size_t ii = 0; ii < int_nodes.size(); ++ii)
      for (int a = 0; a < 2; ++a) int_dof[2 * ii + a] = 2 * int_nodes[ii] + a;

    Eigen::MatrixXd A(nint, nint), G(nint, nall);
    for (int r = 0; r < nint; ++r) {
      for (int cc = 0; cc < nint; ++cc)
        A(r, cc) = 2.0 * nu_prol * Lv(int_dof[r], int_dof[cc]) + gamma * Ld(int_dof[r], int_dof[cc]);
      for (int cc = 0; cc < nall; ++cc) G(r, cc) = gamma * Ld(int_dof[r], cc);
    }

    // Gather the interpolant rows touching the cell group.
    std::vector<int> cols;
    std::map<int, int> colmap;
    for (size_t i = 0; i < nodes.size(); ++i)
      for (int a = 0; a < 2; ++a)
        for (SpMat::InnerIterator it(P, 2 * nodes[i] + a); it; ++it) {
          auto [pos, inserted] = colmap.try_emplace(it.col(), static_cast<int>(cols.size()));
          if (inserted) cols.push_back(it.col());
        }
    if (cols.empty()) continue;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(nall, static_cast<int>(cols.size()));
    for (size_t i = 0; i < nodes.size(); ++i)
      for (int a = 0; a < 2; ++a)
        for (SpMat::InnerIterator it(P, 2 * nodes[i] + a); it; ++it)
          T(2 * static_cast<int>(i) + a, colmap.at(it.col())) += it.value();

    const Eigen::MatrixXd corr = A.ldlt().solve(G * T);
    for (size_t ii = 0; ii < int_nodes.size(); ++ii)
      for (int a = 0; a < 2; ++a) {
        const int grow = 2 * nodes[int_nodes[ii]] + a;
        for (size_t jc = 0; jc < cols.size(); ++jc) {
          const double v = corr(2 * static_cast<int>(ii) + a, static_cast<int>(jc));
          if (v != 0.0) trips.emplace_back(grow, cols[jc], -v);
        }
      }
  }

  SpMat Pt(fine.nU(), coarse.nU());
  Pt.setFromTriplets(trips.begin(), trips.end());
  tr.Pu = Pt;

  const SpMat Mmix = supermesh_mixed_mass(h.supermeshes[pair], coarse.Psp, fine.Psp);
  tr.Ps = expand2(mass_solve_rows(Mmix, fine.Psp));
  const SpMat MmixT = Mmix.transpose();
  tr.Is = expand2(mass_solve_rows(MmixT, coarse.Psp));
  tr.Iu = nodal_interpolation(fine.Usp, coarse.Usp);
  return tr;
}

void LevelTransfer::prolong(const Eigen::VectorXd& zc, Eigen::VectorXd& zf) const {
  zf.resize(nS_f + nU_f);
  zf.head(nS_f) = Ps * zc.head(nS_c);
  zf.tail(nU_f) = Pu * zc.tail(nU_c);
}

void LevelTransfer::restrict_z(const Eigen::VectorXd& rf, Eigen::VectorXd& rc) const {
  rc.resize(nS_c + nU_c);
  rc.head(nS_c) = Ps.transpose() * rf.head(nS_f);
  rc.tail(nU_c) = Pu.transpose() * rf.tail(nU_f);
}

std::vector<BlockField> inject_state(const std::vector<ProblemDefinition>& levels,
                                     const std::vector<LevelTransfer>& transfers,
                                     const BlockField& fine_state) {
  std::vector<BlockField> states(levels.size());
  states.back() = fine_state;
  for (int l = static_cast<int>(levels.size()) - 2; l >= 0; --l) {
    states[l].u = transfers[l].Iu * states[l + 1].u;
    states[l].S = transfers[l].Is * states[l + 1].S;
    states[l].p = Eigen::VectorXd::Zero(levels[l].nP());
  }
  return states;
}

}  // namespace nnflow
