#include <cmath>

#include "nnflow/linalg.hpp"

namespace nnflow {

namespace {

struct CycleResult {
  int its = 0;
  double rnorm = 0.0;
  bool breakdown = false;
  bool hit_target = false;
};

// One restart cycle of right-preconditioned flexible GMRES (modified
// Gram-Schmidt, Givens rotations). Appends the correction to x.
CycleResult gmres_cycle(const LinOp& op, const LinOp& prec,
                        const std::function<void(Eigen::VectorXd&)>& post, const Eigen::VectorXd& r,
                        double target, int m, Eigen::VectorXd& x) {
  CycleResult res;
  const auto n = r.size();
  double rnorm = r.norm();
  res.rnorm = rnorm;
  if (!(rnorm > 0.0) || m <= 0) return res;

  std::vector<Eigen::VectorXd> V, Z;
  V.reserve(m + 1);
  Z.reserve(m);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
  std::vector<double> cs(m), sn(m);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(m + 1);
  Eigen::VectorXd w(n), z(n);
  V.push_back(r / rnorm);
  g[0] = rnorm;

  int j = 0;
  for (; j < m; ++j) {
    if (prec)
      prec(V[j], z);
    else
      z = V[j];
    if (post) post(z);
    Z.push_back(z);
    op(z, w);
    for (int i = 0; i <= j; ++i) {
      H(i, j) = V[i].dot(w);
      w -= H(i, j) * V[i];
    }
    const double hnext = w.norm();
    H(j + 1, j) = hnext;
    for (int i = 0; i < j; ++i) {
      const double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
      H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
      H(i, j) = t;
    }
    const double denom = std::hypot(H(j, j), H(j + 1, j));
    if (denom == 0.0) {
      cs[j] = 1.0;
      sn[j] = 0.0;
    } else {
      cs[j] = H(j, j) / denom;
      sn[j] = H(j + 1, j) / denom;
    }
    H(j, j) = cs[j] * H(j, j) + sn[j] * H(j + 1, j);
    H(j + 1, j) = 0.0;
    g[j + 1] = -sn[j] * g[j];
    g[j] = cs[j] * g[j];
    rnorm = std::abs(g[j + 1]);
    if (rnorm <= target) {
      res.hit_target = true;
      ++j;
      break;
    }
    if (hnext < 1e-300) {
      res.breakdown = true;
      ++j;
      break;
    }
    if (j + 1 < m) V.push_back(w / hnext);
  }

  if (j > 0) {
    const Eigen::VectorXd y = H.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    for (int i = 0; i < j; ++i) x += y[i] * Z[i];
  }
  res.its = j;
  res.rnorm = rnorm;
  return res;
}

}  // namespace

KrylovReport fgmres(const LinOp& op, const LinOp& prec, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                    const KrylovConfig& cfg, const std::function<void(Eigen::VectorXd&)>& postprocess) {
  KrylovReport rep;
  const auto n = b.size();
  if (x.size() != n) x = Eigen::VectorXd::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    x.setZero();
    rep.converged = true;
    return rep;
  }
  const double target = std::max(cfg.rtol * bnorm, cfg.atol);

  Eigen::VectorXd r(n), w(n);
  op(x, w);
  r = b - w;
  if (postprocess) postprocess(r);
  double rnorm = r.norm();
  rep.converged = rnorm <= target;

  while (!rep.converged && rep.iterations < cfg.max_iter) {
    const int m = std::min(cfg.restart, cfg.max_iter - rep.iterations);
    const CycleResult res = gmres_cycle(op, prec, postprocess, r, target, m, x);
    rep.iterations += res.its;
    op(x, w);
    r = b - w;
    if (postprocess) postprocess(r);
    rnorm = r.norm();
    rep.converged = res.hit_target || rnorm <= target;
    if (res.breakdown || res.its == 0) break;
  }
  rep.final_relative_residual = rnorm / bnorm;
  return rep;
}

void gmres_relax(const LinOp& op, const LinOp& prec, const Eigen::VectorXd& r, Eigen::VectorXd& z,
                 int sweeps) {
  z = Eigen::VectorXd::Zero(r.size());
  gmres_cycle(op, prec, {}, r, 0.0, sweeps, z);
}

}  // namespace nnflow
