#pragma once

#include <functional>
#include <map>
#include <vector>

#include "nnflow/element.hpp"
#include "nnflow/mesh.hpp"
#include "nnflow/quadrature.hpp"

namespace nnflow {

enum class Shape { Scalar, Vector2, SymTraceless2 };

// Unique mesh edges with cell incidence, in first-encounter order over cells.
struct FacetInfo {
  int v0, v1;    // sorted vertex ids
  int cell0, edge0;
  int cell1, edge1;  // -1,-1 on the boundary
  int marker;        // boundary marker, -1 interior
};

std::vector<FacetInfo> build_facets(const Triangulation& mesh);

// Scalar-node based function space; fields store ncomp values per node,
// components interleaved (dof = node * ncomp + comp). Continuous spaces
// number nodes entity-major (vertices, then edges, then cell interiors);
// discontinuous spaces are cell-major.
struct FunctionSpace {
  const Triangulation* mesh = nullptr;
  ReferenceElement elem;
  Shape shape = Shape::Scalar;
  bool continuous = false;
  int ncomp = 1;
  int nodes_per_cell = 0;
  int n_scalar_nodes = 0;

  std::vector<int> cell_nodes;      // n_cells * nodes_per_cell
  std::vector<Vec2> node_points;    // scalar node coordinates
  std::map<int, std::vector<int>> boundary_nodes;  // marker -> scalar nodes (continuous only)
  std::vector<char> on_boundary;    // scalar nodes on the domain boundary (continuous only)

  int n_dofs() const { return n_scalar_nodes * ncomp; }
  int node(int cell, int local) const { return cell_nodes[cell * nodes_per_cell + local]; }
  int dof(int cell, int local, int comp) const { return node(cell, local) * ncomp + comp; }
};

FunctionSpace make_space(const Triangulation& mesh, int degree, Shape shape, bool continuous);

// Nodal interpolation. fn returns ncomp values at a point.
Eigen::VectorXd interpolate(const FunctionSpace& sp, const std::function<void(const Vec2&, double*)>& fn);

// L^r norm of the field (r = 2 default); tensor fields use the full
// contraction |T|^2 = T : T.
double norm_lr(const FunctionSpace& sp, const Eigen::VectorXd& field, double r = 2.0);
double norm_l2(const FunctionSpace& sp, const Eigen::VectorXd& field);
// sqrt(int (div u)^2) for Vector2 fields.
double norm_div_l2(const FunctionSpace& sp, const Eigen::VectorXd& field);
// Function mean over the domain (Scalar fields).
double field_mean(const FunctionSpace& sp, const Eigen::VectorXd& field);

// Point evaluation inside a known cell: values (ncomp) and gradients (ncomp x 2).
void eval_in_cell(const FunctionSpace& sp, const Eigen::VectorXd& field, int cell, const Vec2& xref,
                  double* value, Eigen::Matrix<double, -1, 2>* grad = nullptr);

}  // namespace nnflow
