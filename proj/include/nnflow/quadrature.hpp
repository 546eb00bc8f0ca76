#pragma once

#include <vector>

#include "nnflow/tensor.hpp"

namespace nnflow {

struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;  // sum to the reference element measure
  int degree = 0;               // exact for polynomials up to this degree
};

// Gauss-Legendre rule with n points on [0,1]; exact for degree 2n-1.
void gauss_legendre(int n, std::vector<double>& pts, std::vector<double>& wts);

// Gauss-Jacobi rule with weight (1-x) on [0,1]; exact for degree 2n-1.
void gauss_jacobi10(int n, std::vector<double>& pts, std::vector<double>& wts);

// Rule on the reference triangle (0,0)-(1,0)-(0,1), exact for the requested
// total degree. Conical product of the two Gauss rules above; all weights
// positive.
QuadratureRule triangle_rule(int degree);

// Rule on the reference edge [0,1].
QuadratureRule interval_rule(int degree);

}  // namespace nnflow
