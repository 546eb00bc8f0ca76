#include "nnflow/element.hpp"

#include <stdexcept>

namespace nnflow {

namespace {

// Monomials x^i y^j with i+j <= degree, graded ordering.
int n_monomials(int degree) { return (degree + 1) * (degree + 2) / 2; }

void monomials(int degree, const Vec2& x, Eigen::VectorXd& m) {
  m.resize(n_monomials(degree));
  int k = 0;
  for (int d = 0; d <= degree; ++d)
    for (int j = 0; j <= d; ++j) m[k++] = std::pow(x[0], d - j) * std::pow(x[1], j);
}

void monomial_grads(int degree, const Vec2& x, Eigen::MatrixXd& g) {
  g.resize(n_monomials(degree), 2);
  int k = 0;
  for (int d = 0; d <= degree; ++d)
    for (int j = 0; j <= d; ++j) {
      const int i = d - j;
      g(k, 0) = i == 0 ? 0.0 : i * std::pow(x[0], i - 1) * std::pow(x[1], j);
      g(k, 1) = j == 0 ? 0.0 : j * std::pow(x[0], i) * std::pow(x[1], j - 1);
      ++k;
    }
}

}  // namespace

ReferenceElement::ReferenceElement(int degree) : degree_(degree) {
  if (degree < 0 || degree > 3) throw std::invalid_argument("ReferenceElement: degree out of range");
  const Vec2 v[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  const int ev[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  if (degree == 0) {
    nodes_ = {Vec2(1.0 / 3.0, 1.0 / 3.0)};
    entities_ = {{2, 0, 0}};
  } else {
    for (int i = 0; i < 3; ++i) {
      nodes_.push_back(v[i]);
      entities_.push_back({0, i, 0});
    }
    for (int e = 0; e < 3; ++e)
      for (int s = 1; s < degree; ++s) {
        const double t = static_cast<double>(s) / degree;
        nodes_.push_back(v[ev[e][0]] * (1.0 - t) + v[ev[e][1]] * t);
        entities_.push_back({1, e, s - 1});
      }
    if (degree == 3) {
      nodes_.push_back(Vec2(1.0 / 3.0, 1.0 / 3.0));
      entities_.push_back({2, 0, 0});
    }
  }
  const int n = n_nodes();
  Eigen::MatrixXd V(n, n);
  Eigen::VectorXd m;
  for (int i = 0; i < n; ++i) {
    monomials(degree_, nodes_[i], m);
    V.row(i) = m.transpose();
  }
  coeff_ = V.fullPivLu().inverse();  // basis i = sum_j coeff_(j,i) * mono_j
}

void ReferenceElement::eval(const Vec2& x, Eigen::VectorXd& vals) const {
  Eigen::VectorXd m;
  monomials(degree_, x, m);
  vals = coeff_.transpose() * m;
}

void ReferenceElement::eval_grad(const Vec2& x, Eigen::MatrixXd& grads) const {
  Eigen::MatrixXd g;
  monomial_grads(degree_, x, g);
  grads = coeff_.transpose() * g;
}

Tabulation tabulate(const ReferenceElement& elem, const std::vector<Vec2>& points) {
  Tabulation tab;
  const int np = static_cast<int>(points.size());
  tab.values.resize(np, elem.n_nodes());
  tab.grads.resize(np);
  Eigen::VectorXd v;
  for (int q = 0; q < np; ++q) {
    elem.eval(points[q], v);
    tab.values.row(q) = v.transpose();
    elem.eval_grad(points[q], tab.grads[q]);
  }
  return tab;
}

}  // namespace nnflow
