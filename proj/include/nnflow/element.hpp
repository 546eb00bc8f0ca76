#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nnflow/tensor.hpp"

namespace nnflow {

// Node attachment inside the reference triangle; drives the global dof
// identification for continuous spaces.
struct NodeEntity {
  int dim;    // 0 vertex, 1 edge, 2 interior
  int index;  // local vertex/edge index (edges: 0=(0,1), 1=(1,2), 2=(2,0))
  int sub;    // position along the edge (0..degree-2, ordered first->second vertex)
};

// Lagrange basis on the reference triangle (0,0)-(1,0)-(0,1), degrees 0..3.
// Basis coefficients come from the inverse monomial Vandermonde at the nodes.
class ReferenceElement {
 public:
  explicit ReferenceElement(int degree = 1);

  int degree() const { return degree_; }
  int n_nodes() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Vec2>& nodes() const { return nodes_; }
  const std::vector<NodeEntity>& entities() const { return entities_; }

  // Values of all basis functions at x.
  void eval(const Vec2& x, Eigen::VectorXd& vals) const;
  // Reference gradients of all basis functions at x (n_nodes x 2).
  void eval_grad(const Vec2& x, Eigen::MatrixXd& grads) const;

 private:
  int degree_;
  std::vector<Vec2> nodes_;
  std::vector<NodeEntity> entities_;
  Eigen::MatrixXd coeff_;  // column i: monomial coefficients of basis i
};

// Basis values/gradients tabulated at a fixed point set, for assembly loops.
struct Tabulation {
  Eigen::MatrixXd values;               // n_points x n_nodes
  std::vector<Eigen::MatrixXd> grads;   // per point: n_nodes x 2
};

Tabulation tabulate(const ReferenceElement& elem, const std::vector<Vec2>& points);

}  // namespace nnflow
