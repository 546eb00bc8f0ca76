#include "nnflow/assembly.hpp"

#include <cmath>
#include <stdexcept>

namespace nnflow {

double block_norm(const BlockField& f) {
  return std::sqrt(f.S.squaredNorm() + f.u.squaredNorm() + f.p.squaredNorm());
}

BlockField ProblemDefinition::zero_state() const {
  BlockField s;
  s.S = Eigen::VectorXd::Zero(nS());
  s.u = Eigen::VectorXd::Zero(nU());
  s.p = Eigen::VectorXd::Zero(nP());
  return s;
}

void ProblemDefinition::apply_dirichlet_values(BlockField& state) const {
  for (int i = 0; i < nU(); ++i)
    if (u_constrained[i]) state.u[i] = u_bc_values[i];
}

ProblemDefinition make_problem(const Triangulation& mesh, int k, const ConstitutiveModel& model,
                               double gamma, std::vector<VelocityBC> bcs,
                               std::function<Vec2(const Vec2&)> forcing, bool stabilization,
                               bool pressure_nullspace) {
  if (k < 2) throw std::invalid_argument("make_problem: velocity order k < 2");
  if (k > 3) throw std::invalid_argument("make_problem: velocity order k > 3");
  ProblemDefinition p;
  p.mesh = &mesh;
  p.k = k;
  p.Ssp = make_space(mesh, k - 1, Shape::SymTraceless2, false);
  p.Usp = make_space(mesh, k, Shape::Vector2, true);
  p.Psp = make_space(mesh, k - 1, Shape::Scalar, false);
  p.model = model;
  p.gamma = gamma;
  p.forcing = std::move(forcing);
  p.bcs = std::move(bcs);
  p.stabilization = stabilization;
  p.pressure_nullspace = pressure_nullspace;
  p.facets = build_facets(mesh);

  p.u_constrained.assign(p.nU(), 0);
  p.u_bc_values = Eigen::VectorXd::Zero(p.nU());
  // Full-Dirichlet markers first so they take precedence at shared corners;
  // genuinely conflicting values are rejected.
  std::vector<const VelocityBC*> order;
  for (const auto& bc : p.bcs)
    if (bc.comp_mask == 3) order.push_back(&bc);
  for (const auto& bc : p.bcs)
    if (bc.comp_mask != 3) order.push_back(&bc);
  for (const VelocityBC* bc : order) {
    auto it = p.Usp.boundary_nodes.find(bc->marker);
    if (it == p.Usp.boundary_nodes.end()) continue;
    for (int n : it->second) {
      const Vec2 g = bc->value ? bc->value(p.Usp.node_points[n]) : Vec2::Zero();
      for (int c = 0; c < 2; ++c) {
        if (!(bc->comp_mask & (1 << c))) continue;
        const int dof = 2 * n + c;
        if (p.u_constrained[dof]) {
          if (std::abs(p.u_bc_values[dof] - g[c]) > 1e-12 * (1.0 + std::abs(g[c])))
            throw std::invalid_argument("make_problem: conflicting Dirichlet values at a dof");
          continue;
        }
        p.u_constrained[dof] = 1;
        p.u_bc_values[dof] = g[c];
      }
    }
  }
  return p;
}

namespace {

// Deviatoric-D component vector of the velocity basis (grad g, component c).
inline void basis_dev(const Vec2& g, int c, double d[2]) {
  if (c == 0) {
    d[0] = 0.5 * g[0];
    d[1] = 0.5 * g[1];
  } else {
    d[0] = -0.5 * g[1];
    d[1] = 0.5 * g[0];
  }
}

// (D(phi e_c) u) for the full symmetric gradient.
inline void basis_D_times(const Vec2& g, int c, const Vec2& u, double out[2]) {
  if (c == 0) {
    out[0] = g[0] * u[0] + 0.5 * g[1] * u[1];
    out[1] = 0.5 * g[1] * u[0];
  } else {
    out[0] = 0.5 * g[0] * u[1];
    out[1] = 0.5 * g[0] * u[0] + g[1] * u[1];
  }
}

struct CellWork {
  QuadratureRule rule;
  Tabulation tabS, tabU, tabP;
  int nsl, nul, npl;  // local scalar node counts
};

CellWork make_work(const ProblemDefinition& prob) {
  CellWork w;
  w.rule = triangle_rule(2 * prob.k + 2);
  w.tabS = tabulate(prob.Ssp.elem, w.rule.points);
  w.tabU = tabulate(prob.Usp.elem, w.rule.points);
  w.tabP = tabulate(prob.Psp.elem, w.rule.points);
  w.nsl = prob.Ssp.nodes_per_cell;
  w.nul = prob.Usp.nodes_per_cell;
  w.npl = prob.Psp.nodes_per_cell;
  return w;
}

struct StateAtPoint {
  SymT S, Ddev;
  Vec2 u;
  double divu, p;
};

}  // namespace

JacobianBlocks assemble_jacobian(const ProblemDefinition& prob, const BlockField& state) {
  const CellWork w = make_work(prob);
  const int nS = prob.nS(), nU = prob.nU(), nP = prob.nP();
  const int nc = prob.mesh->n_cells();
  const int nq = static_cast<int>(w.rule.points.size());

  std::vector<Triplet> tQ1, tQ2, tC, tE, tB, tG;
  tQ1.reserve(static_cast<size_t>(nc) * 4 * w.nsl * w.nsl);
  tQ2.reserve(static_cast<size_t>(nc) * 4 * w.nsl * w.nul);
  tC.reserve(static_cast<size_t>(nc) * 4 * w.nsl * w.nul);
  tE.reserve(static_cast<size_t>(nc) * 4 * w.nul * w.nul);
  tB.reserve(static_cast<size_t>(nc) * 2 * w.npl * w.nul);
  tG.reserve(static_cast<size_t>(nc) * 4 * w.nul * w.nul);

  std::vector<Vec2> gradU(w.nul);
  Mat2 MS, MD;
  for (int c = 0; c < nc; ++c) {
    const Mat2 Jinv = prob.mesh->cell_jacobian(c).inverse();
    const double detJ = 2.0 * prob.mesh->cell_area(c);
    for (int q = 0; q < nq; ++q) {
      const double wq = w.rule.weights[q] * detJ;
      for (int l = 0; l < w.nul; ++l) gradU[l] = Jinv.transpose() * w.tabU.grads[q].row(l).transpose();

      // State at the quadrature point.
      SymT St(0.0, 0.0), Dd(0.0, 0.0);
      Vec2 uv = Vec2::Zero();
      Mat2 gu = Mat2::Zero();
      for (int l = 0; l < w.nsl; ++l) {
        const double phi = w.tabS.values(q, l);
        St.a += phi * state.S[prob.Ssp.dof(c, l, 0)];
        St.b += phi * state.S[prob.Ssp.dof(c, l, 1)];
      }
      for (int l = 0; l < w.nul; ++l) {
        const double phi = w.tabU.values(q, l);
        for (int k = 0; k < 2; ++k) {
          const double coef = state.u[prob.Usp.dof(c, l, k)];
          uv[k] += phi * coef;
          gu.row(k) += coef * gradU[l].transpose();
        }
      }
      Dd.a = 0.5 * (gu(0, 0) - gu(1, 1));
      Dd.b = 0.5 * (gu(0, 1) + gu(1, 0));
      prob.model.eval_dG(St, Dd, MS, MD);

      // Q1: 2 phi_m phi_n MS(e, comp).
      for (int m = 0; m < w.nsl; ++m) {
        const double pm = w.tabS.values(q, m);
        for (int n = 0; n < w.nsl; ++n) {
          const double s = 2.0 * wq * pm * w.tabS.values(q, n);
          for (int e = 0; e < 2; ++e)
            for (int k = 0; k < 2; ++k)
              tQ1.emplace_back(prob.Ssp.dof(c, m, e), prob.Ssp.dof(c, n, k), s * MS(e, k));
        }
      }
      // Q2Ct and C.
      for (int n = 0; n < w.nul; ++n) {
        double dv[2][2];
        basis_dev(gradU[n], 0, dv[0]);
        basis_dev(gradU[n], 1, dv[1]);
        for (int k = 0; k < 2; ++k) {
          const Eigen::Vector2d md = MD * Eigen::Vector2d(dv[k][0], dv[k][1]);
          for (int m = 0; m < w.nsl; ++m) {
            const double pm = w.tabS.values(q, m);
            for (int e = 0; e < 2; ++e) {
              tQ2.emplace_back(prob.Ssp.dof(c, m, e), prob.Usp.dof(c, n, k), 2.0 * wq * pm * md[e]);
              tC.emplace_back(prob.Usp.dof(c, n, k), prob.Ssp.dof(c, m, e), 2.0 * wq * pm * dv[k][e]);
            }
          }
        }
      }
      // E, Gg, B.
      for (int m = 0; m < w.nul; ++m) {
        for (int e = 0; e < 2; ++e) {
          double Du[2];
          basis_D_times(gradU[m], e, uv, Du);
          const int row = prob.Usp.dof(c, m, e);
          for (int n = 0; n < w.nul; ++n) {
            const double pn = w.tabU.values(q, n);
            for (int k = 0; k < 2; ++k)
              tE.emplace_back(row, prob.Usp.dof(c, n, k), -2.0 * wq * pn * Du[k]);
            for (int k = 0; k < 2; ++k)
              tG.emplace_back(row, prob.Usp.dof(c, n, k), prob.gamma * wq * gradU[m][e] * gradU[n][k]);
          }
        }
      }
      for (int m = 0; m < w.npl; ++m) {
        const double pm = w.tabP.values(q, m);
        for (int n = 0; n < w.nul; ++n)
          for (int k = 0; k < 2; ++k)
            tB.emplace_back(prob.Psp.dof(c, m, 0), prob.Usp.dof(c, n, k), -wq * pm * gradU[n][k]);
      }
    }
  }

  JacobianBlocks J;
  J.Q1.resize(nS, nS);
  J.Q1.setFromTriplets(tQ1.begin(), tQ1.end());
  J.Q2Ct.resize(nS, nU);
  J.Q2Ct.setFromTriplets(tQ2.begin(), tQ2.end());
  J.C.resize(nU, nS);
  J.C.setFromTriplets(tC.begin(), tC.end());
  J.E.resize(nU, nU);
  J.E.setFromTriplets(tE.begin(), tE.end());
  J.B.resize(nP, nU);
  J.B.setFromTriplets(tB.begin(), tB.end());
  J.Gg.resize(nU, nU);
  J.Gg.setFromTriplets(tG.begin(), tG.end());
  if (prob.stabilization)
    J.Sh = assemble_stabilization(prob, state.u);
  else
    J.Sh.resize(nU, nU);
  return J;
}

SpMat assemble_pressure_mass(const FunctionSpace& Psp) {
  const auto rule = triangle_rule(2 * Psp.elem.degree());
  const auto tab = tabulate(Psp.elem, rule.points);
  const int npl = Psp.nodes_per_cell;
  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(Psp.mesh->n_cells()) * npl * npl);
  for (int c = 0; c < Psp.mesh->n_cells(); ++c) {
    const double detJ = 2.0 * Psp.mesh->cell_area(c);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double wq = rule.weights[q] * detJ;
      for (int m = 0; m < npl; ++m)
        for (int n = 0; n < npl; ++n)
          trip.emplace_back(Psp.dof(c, m, 0), Psp.dof(c, n, 0), wq * tab.values(q, m) * tab.values(q, n));
    }
  }
  SpMat Mp(Psp.n_dofs(), Psp.n_dofs());
  Mp.setFromTriplets(trip.begin(), trip.end());
  return Mp;
}

SpMat assemble_stabilization(const ProblemDefinition& prob, const Eigen::VectorXd& u) {
  const int nU = prob.nU();
  SpMat Sh(nU, nU);
  if (!prob.stabilization) return Sh;

  // Discrete Linf norm of u per cell (max Euclidean nodal value).
  std::vector<double> cell_linf(prob.mesh->n_cells(), 0.0);
  for (int c = 0; c < prob.mesh->n_cells(); ++c)
    for (int l = 0; l < prob.Usp.nodes_per_cell; ++l) {
      const double ux = u[prob.Usp.dof(c, l, 0)], uy = u[prob.Usp.dof(c, l, 1)];
      cell_linf[c] = std::max(cell_linf[c], std::sqrt(ux * ux + uy * uy));
    }

  const auto rule = interval_rule(2 * (prob.k - 1));
  const int nul = prob.Usp.nodes_per_cell;
  std::vector<Triplet> trip;
  Eigen::MatrixXd refg;
  for (const auto& f : prob.facets) {
    if (f.cell1 < 0) continue;  // interior facets only
    const Vec2 pa = prob.mesh->vertices[f.v0], pb = prob.mesh->vertices[f.v1];
    const double len = (pb - pa).norm();
    const double delta = prob.stab_c * std::max(cell_linf[f.cell0], cell_linf[f.cell1]);
    const double coef = 0.5 * delta * len * len;
    if (coef == 0.0) continue;
    const int cells[2] = {f.cell0, f.cell1};
    const double sign[2] = {1.0, -1.0};
    // Physical gradients of both cells' bases at edge quadrature points.
    // Local slot layout: [cell0 nodes | cell1 nodes], shared dofs sum.
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(2 * nul, 2 * nul);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 x = pa + rule.points[q][0] * (pb - pa);
      Eigen::Matrix<double, -1, 2> g(2 * nul, 2);
      for (int s = 0; s < 2; ++s) {
        const int c = cells[s];
        const Mat2 Jinv = prob.mesh->cell_jacobian(c).inverse();
        prob.Usp.elem.eval_grad(prob.mesh->reference_coords(c, x), refg);
        for (int l = 0; l < nul; ++l)
          g.row(s * nul + l) = sign[s] * (Jinv.transpose() * refg.row(l).transpose()).transpose();
      }
      acc += (rule.weights[q] * len) * (g * g.transpose());
    }
    for (int i = 0; i < 2 * nul; ++i) {
      const int di = prob.Usp.node(cells[i / nul], i % nul);
      for (int j = 0; j < 2 * nul; ++j) {
        const int dj = prob.Usp.node(cells[j / nul], j % nul);
        const double v = coef * acc(i, j);
        if (v == 0.0) continue;
        for (int comp = 0; comp < 2; ++comp) trip.emplace_back(2 * di + comp, 2 * dj + comp, v);
      }
    }
  }
  Sh.setFromTriplets(trip.begin(), trip.end());
  return Sh;
}

BlockField assemble_residual(const ProblemDefinition& prob, const BlockField& state, const SpMat* Sh_frozen,
                             bool augmented) {
  const CellWork w = make_work(prob);
  const double gamma = augmented ? prob.gamma : 0.0;
  BlockField R = prob.zero_state();
  const int nq = static_cast<int>(w.rule.points.size());
  std::vector<Vec2> gradU(w.nul);

  for (int c = 0; c < prob.mesh->n_cells(); ++c) {
    const Mat2 Jinv = prob.mesh->cell_jacobian(c).inverse();
    const double detJ = 2.0 * prob.mesh->cell_area(c);
    for (int q = 0; q < nq; ++q) {
      const double wq = w.rule.weights[q] * detJ;
      for (int l = 0; l < w.nul; ++l) gradU[l] = Jinv.transpose() * w.tabU.grads[q].row(l).transpose();

      SymT St(0.0, 0.0);
      Vec2 uv = Vec2::Zero();
      Mat2 gu = Mat2::Zero();
      double pv = 0.0;
      for (int l = 0; l < w.nsl; ++l) {
        const double phi = w.tabS.values(q, l);
        St.a += phi * state.S[prob.Ssp.dof(c, l, 0)];
        St.b += phi * state.S[prob.Ssp.dof(c, l, 1)];
      }
      for (int l = 0; l < w.nul; ++l) {
        const double phi = w.tabU.values(q, l);
        for (int k = 0; k < 2; ++k) {
          const double coef = state.u[prob.Usp.dof(c, l, k)];
          uv[k] += phi * coef;
          gu.row(k) += coef * gradU[l].transpose();
        }
      }
      for (int l = 0; l < w.npl; ++l) pv += w.tabP.values(q, l) * state.p[prob.Psp.dof(c, l, 0)];
      const SymT Dd(0.5 * (gu(0, 0) - gu(1, 1)), 0.5 * (gu(0, 1) + gu(1, 0)));
      const double divu = gu(0, 0) + gu(1, 1);
      const SymT G = prob.model.eval_G(St, Dd);
      const Vec2 f = prob.forcing ? prob.forcing(prob.mesh->cell_point(c, w.rule.points[q])) : Vec2::Zero();

      for (int m = 0; m < w.nsl; ++m) {
        const double pm = w.tabS.values(q, m);
        R.S[prob.Ssp.dof(c, m, 0)] += 2.0 * wq * pm * G.a;
        R.S[prob.Ssp.dof(c, m, 1)] += 2.0 * wq * pm * G.b;
      }
      for (int m = 0; m < w.nul; ++m) {
        const double pm = w.tabU.values(q, m);
        double dv[2][2];
        basis_dev(gradU[m], 0, dv[0]);
        basis_dev(gradU[m], 1, dv[1]);
        for (int e = 0; e < 2; ++e) {
          double Du[2];
          basis_D_times(gradU[m], e, uv, Du);
          const double conv = -(Du[0] * uv[0] + Du[1] * uv[1]);
          const double sd = 2.0 * (St.a * dv[e][0] + St.b * dv[e][1]);
          const double div_w = gradU[m][e];
          R.u[prob.Usp.dof(c, m, e)] +=
              wq * (sd + conv - pv * div_w - f[e] * pm + gamma * divu * div_w);
        }
      }
      for (int m = 0; m < w.npl; ++m)
        R.p[prob.Psp.dof(c, m, 0)] += -wq * w.tabP.values(q, m) * divu;
    }
  }

  if (prob.stabilization) {
    if (Sh_frozen)
      R.u += (*Sh_frozen) * state.u;
    else
      R.u += assemble_stabilization(prob, state.u) * state.u;
  }
  for (int i = 0; i < prob.nU(); ++i)
    if (prob.u_constrained[i]) R.u[i] = state.u[i] - prob.u_bc_values[i];
  return R;
}

namespace {

SpMat filter(const SpMat& A, const std::vector<char>* row_mask, const std::vector<char>* col_mask,
             bool identity_on_masked_rows) {
  std::vector<Triplet> trip;
  trip.reserve(A.nonZeros() + (identity_on_masked_rows ? A.rows() : 0));
  for (int r = 0; r < A.outerSize(); ++r)
    for (SpMat::InnerIterator it(A, r); it; ++it) {
      if (row_mask && (*row_mask)[it.row()]) continue;
      if (col_mask && (*col_mask)[it.col()]) continue;
      trip.emplace_back(it.row(), it.col(), it.value());
    }
  if (identity_on_masked_rows && row_mask)
    for (int r = 0; r < A.rows(); ++r)
      if ((*row_mask)[r]) trip.emplace_back(r, r, 1.0);
  SpMat out(A.rows(), A.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

}  // namespace

void LinearSystem::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  y.resize(nS + nU + nP);
  const auto xS = x.segment(0, nS), xu = x.segment(nS, nU), xp = x.segment(nS + nU, nP);
  y.segment(0, nS) = ZSS * xS + ZSu * xu;
  y.segment(nS, nU) = ZuS * xS + Zuu * xu + B.transpose() * xp;
  y.segment(nS + nU, nP) = B * xu;
}

void LinearSystem::apply_z(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  y.resize(nS + nU);
  const auto xS = x.segment(0, nS), xu = x.segment(nS, nU);
  y.segment(0, nS) = ZSS * xS + ZSu * xu;
  y.segment(nS, nU) = ZuS * xS + Zuu * xu;
}

LinearSystem build_system(const ProblemDefinition& prob, const JacobianBlocks& blocks) {
  LinearSystem sys;
  sys.nS = prob.nS();
  sys.nU = prob.nU();
  sys.nP = prob.nP();
  const auto& mask = prob.u_constrained;
  sys.ZSS = blocks.Q1;
  sys.ZSu = filter(blocks.Q2Ct, nullptr, &mask, false);
  sys.ZuS = filter(blocks.C, &mask, nullptr, false);
  SpMat Zuu = blocks.E + blocks.Gg;
  if (blocks.Sh.nonZeros() > 0) Zuu += blocks.Sh;
  sys.Zuu = filter(Zuu, &mask, &mask, true);
  sys.B = filter(blocks.B, nullptr, &mask, false);
  return sys;
}

PressureMassInverse::PressureMassInverse(const FunctionSpace& Psp_) : Psp(&Psp_) {
  const auto rule = triangle_rule(2 * Psp->elem.degree());
  const auto tab = tabulate(Psp->elem, rule.points);
  const int n = Psp->nodes_per_cell;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (size_t q = 0; q < rule.points.size(); ++q)
    M += rule.weights[q] * (tab.values.row(q).transpose() * tab.values.row(q));
  ref_mass_inv = M.inverse();
}

void PressureMassInverse::apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const {
  const int n = Psp->nodes_per_cell;
  z.resize(Psp->n_dofs());
  for (int c = 0; c < Psp->mesh->n_cells(); ++c) {
    const double detJ = 2.0 * Psp->mesh->cell_area(c);
    z.segment(c * n, n) = (ref_mass_inv / detJ) * r.segment(c * n, n);
  }
}

}  // namespace nnflow
