#include "nnflow/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace nnflow {

namespace {

// Golub-Welsch: nodes/weights from the symmetric Jacobi matrix of the
// orthogonal polynomial recurrence. alpha/beta are the recurrence
// coefficients on the standard interval, mu0 the zeroth moment.
void golub_welsch(const std::vector<double>& alpha, const std::vector<double>& beta,
                  double mu0, std::vector<double>& pts, std::vector<double>& wts) {
  const int n = static_cast<int>(alpha.size());
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    T(i, i) = alpha[i];
    if (i + 1 < n) {
      const double s = std::sqrt(beta[i + 1]);
      T(i, i + 1) = s;
      T(i + 1, i) = s;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  pts.resize(n);
  wts.resize(n);
  for (int i = 0; i < n; ++i) {
    pts[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    wts[i] = mu0 * v0 * v0;
  }
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& pts, std::vector<double>& wts) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
  // Legendre on [-1,1]: alpha_k = 0, beta_k = k^2/(4k^2-1), mu0 = 2.
  std::vector<double> alpha(n, 0.0), beta(n, 0.0);
  for (int k = 1; k < n; ++k) beta[k] = k * k / (4.0 * k * k - 1.0);
  golub_welsch(alpha, beta, 2.0, pts, wts);
  for (int i = 0; i < n; ++i) {
    pts[i] = 0.5 * (pts[i] + 1.0);
    wts[i] *= 0.5;
  }
}

void gauss_jacobi10(int n, std::vector<double>& pts, std::vector<double>& wts) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi10: n < 1");
  // Jacobi (alpha,beta) = (1,0) on [-1,1], weight (1-x): mu0 = 2.
  // Recurrence coefficients, e.g. Gautschi, "Orthogonal Polynomials".
  const double a = 1.0, b = 0.0;
  std::vector<double> alpha(n), beta(n, 0.0);
  const double ab = a + b;
  alpha[0] = (b - a) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double den = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
    alpha[k] = (b * b - a * a) / den;
    const double num = 4.0 * k * (k + a) * (k + b) * (k + ab);
    beta[k] = num / ((2.0 * k + ab) * (2.0 * k + ab) * (2.0 * k + ab + 1.0) * (2.0 * k + ab - 1.0));
  }
  golub_welsch(alpha, beta, 2.0, pts, wts);
  for (int i = 0; i < n; ++i) {
    pts[i] = 0.5 * (pts[i] + 1.0);
    wts[i] *= 0.25;  // map weight (1-x) on [-1,1] to [0,1]: dx/2 and (1-x)/2
  }
}

QuadratureRule triangle_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("triangle_rule: negative degree");
  const int n = degree / 2 + 1;  // each 1D factor exact up to 2n-1 >= degree
  std::vector<double> xp, xw, yp, yw;
  gauss_legendre(n, xp, xw);
  gauss_jacobi10(n, yp, yw);
  QuadratureRule rule;
  rule.degree = degree;
  rule.points.reserve(n * n);
  rule.weights.reserve(n * n);
  // Duffy map (xi, eta) -> (xi (1-eta), eta); Jacobian (1-eta) is the
  // Jacobi weight, so the product rule is exact on the triangle.
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      rule.points.emplace_back(xp[i] * (1.0 - yp[j]), yp[j]);
      rule.weights.push_back(xw[i] * yw[j]);
    }
  }
  return rule;
}

QuadratureRule interval_rule(int degree) {
  const int n = degree / 2 + 1;
  std::vector<double> p, w;
  gauss_legendre(n, p, w);
  QuadratureRule rule;
  rule.degree = degree;
  for (int i = 0; i < n; ++i) {
    rule.points.emplace_back(p[i], 0.0);
    rule.weights.push_back(w[i]);
  }
  return rule;
}

}  // namespace nnflow
