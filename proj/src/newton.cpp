#include "nnflow/newton.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace nnflow {

Eigen::VectorXd flatten(const BlockField& f) {
  Eigen::VectorXd v(f.S.size() + f.u.size() + f.p.size());
  v << f.S, f.u, f.p;
  return v;
}

BlockField unflatten(const ProblemDefinition& prob, const Eigen::VectorXd& v) {
  BlockField f;
  f.S = v.head(prob.nS());
  f.u = v.segment(prob.nS(), prob.nU());
  f.p = v.tail(prob.nP());
  return f;
}

double line_search_l2(const std::function<double(double)>& phi_sq, double phi0_sq) {
  const double phi1 = phi_sq(1.0);
  if (phi1 <= 0.25 * phi0_sq) return 1.0;
  const double phih = phi_sq(0.5);
  const double a = 2.0 * phi0_sq - 4.0 * phih + 2.0 * phi1;
  const double b = -3.0 * phi0_sq + 4.0 * phih - phi1;
  double lam;
  if (a > 0.0)
    lam = -b / (2.0 * a);
  else
    lam = phi1 < phi0_sq ? 1.0 : 0.1;
  return std::clamp(lam, 0.1, 1.0);
}

BlockField secant_extrapolate(const BlockField& prev, const BlockField& cur, double t) {
  BlockField out;
  out.S = cur.S + t * (cur.S - prev.S);
  out.u = cur.u + t * (cur.u - prev.u);
  out.p = cur.p + t * (cur.p - prev.p);
  return out;
}

NewtonReport newton_solve(HierarchyProblem& hp, StressVelocityMG& mg, BlockField& state,
                          const NewtonConfig& cfg) {
  ProblemDefinition& prob = hp.fine();
  const int nS = prob.nS(), nU = prob.nU(), nP = prob.nP();
  NewtonReport rep;
  prob.apply_dirichlet_values(state);
  PressureMassInverse pmi(prob.Psp);
  const double schur = cfg.nu_schur + prob.gamma;

  std::function<void(Eigen::VectorXd&)> post;
  if (prob.pressure_nullspace)
    post = [nS, nU, nP](Eigen::VectorXd& v) {
      auto seg = v.segment(nS + nU, nP);
      seg.array() -= seg.mean();
    };

  double best = std::numeric_limits<double>::infinity();
  for (int it = 0; it < cfg.max_iter; ++it) {
    SpMat Sh;
    const SpMat* shp = nullptr;
    if (prob.stabilization) {
      Sh = assemble_stabilization(prob, state.u);
      shp = &Sh;
    }
    // Convergence is tested on the plain residual; the grad-div term is folded
    // into the right hand side below and so does not pollute the norm.
    const BlockField F = assemble_residual(prob, state, shp, false);
    const double rnorm = block_norm(F);
    rep.residual = rnorm;
    if (!std::isfinite(rnorm)) return rep;
    if (rnorm < cfg.tol) {
      rep.converged = true;
      return rep;
    }
    if (rnorm > 1e6 * best) return rep;
    best = std::min(best, rnorm);

    const JacobianBlocks blocks = assemble_jacobian(prob, state);
    const LinearSystem sys = build_system(prob, blocks);
    mg.update(state, &sys);

    const auto op = [&sys](const Eigen::VectorXd& x, Eigen::VectorXd& y) { sys.apply(x, y); };
    const auto prec = [&](const Eigen::VectorXd& r, Eigen::VectorXd& y) {
      Eigen::VectorXd z1;
      mg.apply(r.head(nS + nU), z1);
      Eigen::VectorXd rp = r.tail(nP) - sys.B * z1.tail(nU);
      Eigen::VectorXd q;
      pmi.apply(rp, q);
      q *= -schur;
      if (prob.pressure_nullspace) q.array() -= q.mean();
      Eigen::VectorXd rz = r.head(nS + nU);
      rz.tail(nU) -= sys.B.transpose() * q;
      Eigen::VectorXd z2;
      mg.apply(rz, z2);
      y.resize(nS + nU + nP);
      y.head(nS + nU) = z2;
      y.tail(nP) = q;
    };

    // Augmented right hand side: the velocity row picks up gamma Bt Mp^{-1} F_p.
    Eigen::VectorXd gq;
    pmi.apply(F.p, gq);
    Eigen::VectorXd rhs(nS + nU + nP);
    rhs.head(nS) = -F.S;
    rhs.segment(nS, nU) = -(F.u + prob.gamma * (sys.B.transpose() * gq));
    rhs.tail(nP) = -F.p;
    Eigen::VectorXd dxv = Eigen::VectorXd::Zero(rhs.size());
    const KrylovReport krep = fgmres(op, prec, rhs, dxv, cfg.krylov, post);
    rep.krylov_total += krep.iterations;
    const BlockField dx = unflatten(prob, dxv);

    double lambda = 1.0;
    if (cfg.line_search) {
      const auto phi = [&](double lam) {
        BlockField trial;
        trial.S = state.S + lam * dx.S;
        trial.u = state.u + lam * dx.u;
        trial.p = state.p + lam * dx.p;
        const BlockField Ft = assemble_residual(prob, trial, shp, false);
        const double n = block_norm(Ft);
        return n * n;
      };
      lambda = line_search_l2(phi, rnorm * rnorm);
    }

    state.S += lambda * dx.S;
    state.u += lambda * dx.u;
    state.p += lambda * dx.p;
    if (prob.pressure_nullspace) state.p.array() -= field_mean(prob.Psp, state.p);
    ++rep.iterations;
  }

  SpMat Sh;
  const SpMat* shp = nullptr;
  if (prob.stabilization) {
    Sh = assemble_stabilization(prob, state.u);
    shp = &Sh;
  }
  rep.residual = block_norm(assemble_residual(prob, state, shp, false));
  rep.converged = rep.residual < cfg.tol;
  return rep;
}

KrylovReport solve_linearized(HierarchyProblem& hp, StressVelocityMG& mg, const BlockField& state0,
                              const NewtonConfig& cfg, BlockField* dx) {
  ProblemDefinition& prob = hp.fine();
  const int nS = prob.nS(), nU = prob.nU(), nP = prob.nP();
  BlockField state = state0;
  prob.apply_dirichlet_values(state);
  PressureMassInverse pmi(prob.Psp);
  const double schur = cfg.nu_schur + prob.gamma;

  std::function<void(Eigen::VectorXd&)> post;
  if (prob.pressure_nullspace)
    post = [nS, nU, nP](Eigen::VectorXd& v) {
      auto seg = v.segment(nS + nU, nP);
      seg.array() -= seg.mean();
    };

  SpMat Sh;
  const SpMat* shp = nullptr;
  if (prob.stabilization) {
    Sh = assemble_stabilization(prob, state.u);
    shp = &Sh;
  }
  const BlockField F = assemble_residual(prob, state, shp, false);
  const JacobianBlocks blocks = assemble_jacobian(prob, state);
  const LinearSystem sys = build_system(prob, blocks);
  mg.update(state, &sys);

  const auto op = [&sys](const Eigen::VectorXd& x, Eigen::VectorXd& y) { sys.apply(x, y); };
  const auto prec = [&](const Eigen::VectorXd& r, Eigen::VectorXd& y) {
    Eigen::VectorXd z1;
    mg.apply(r.head(nS + nU), z1);
    Eigen::VectorXd rp = r.tail(nP) - sys.B * z1.tail(nU);
    Eigen::VectorXd q;
    pmi.apply(rp, q);
    q *= -schur;
    if (prob.pressure_nullspace) q.array() -= q.mean();
    Eigen::VectorXd rz = r.head(nS + nU);
    rz.tail(nU) -= sys.B.transpose() * q;
    Eigen::VectorXd z2;
    mg.apply(rz, z2);
    y.resize(nS + nU + nP);
    y.head(nS + nU) = z2;
    y.tail(nP) = q;
  };

  Eigen::VectorXd gq;
  pmi.apply(F.p, gq);
  Eigen::VectorXd rhs(nS + nU + nP);
  rhs.head(nS) = -F.S;
  rhs.segment(nS, nU) = -(F.u + prob.gamma * (sys.B.transpose() * gq));
  rhs.tail(nP) = -F.p;
  Eigen::VectorXd dxv = Eigen::VectorXd::Zero(rhs.size());
  const KrylovReport rep = fgmres(op, prec, rhs, dxv, cfg.krylov, post);
  if (dx) *dx = unflatten(prob, dxv);
  return rep;
}

double jacobian_fd_check(const ProblemDefinition& prob, const BlockField& state0, int ndirs,
                         unsigned seed) {
  BlockField state = state0;
  prob.apply_dirichlet_values(state);
  SpMat Sh;
  const SpMat* shp = nullptr;
  if (prob.stabilization) {
    Sh = assemble_stabilization(prob, state.u);
    shp = &Sh;
  }
  const JacobianBlocks blocks = assemble_jacobian(prob, state);
  const LinearSystem sys = build_system(prob, blocks);
  const int nS = prob.nS(), n = prob.n_total();

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const double h = 1e-6;
  double maxrel = 0.0;
  Eigen::VectorXd jv(n);
  for (int d = 0; d < ndirs; ++d) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = dist(rng);
    for (int i = 0; i < prob.nU(); ++i)
      if (prob.u_constrained[i]) v[nS + i] = 0.0;
    v /= v.norm();

    BlockField plus = state, minus = state;
    const BlockField dv = unflatten(prob, v);
    plus.S += h * dv.S;
    plus.u += h * dv.u;
    plus.p += h * dv.p;
    minus.S -= h * dv.S;
    minus.u -= h * dv.u;
    minus.p -= h * dv.p;
    const Eigen::VectorXd fd =
        (flatten(assemble_residual(prob, plus, shp)) - flatten(assemble_residual(prob, minus, shp))) /
        (2.0 * h);
    sys.apply(v, jv);
    const double rel = (fd - jv).norm() / std::max(jv.norm(), 1e-14);
    maxrel = std::max(maxrel, rel);
  }
  return maxrel;
}

}  // namespace nnflow
