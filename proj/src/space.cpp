#include "nnflow/space.hpp"

#include <algorithm>
#include <stdexcept>

namespace nnflow {

std::vector<FacetInfo> build_facets(const Triangulation& mesh) {
  std::vector<FacetInfo> facets;
  std::map<std::pair<int, int>, int> index;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& t = mesh.cells[c];
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      const auto key = std::minmax(a, b);
      auto it = index.find(key);
      if (it == index.end()) {
        index.emplace(key, static_cast<int>(facets.size()));
        facets.push_back({key.first, key.second, c, e, -1, -1, -1});
      } else {
        FacetInfo& f = facets[it->second];
        f.cell1 = c;
        f.edge1 = e;
      }
    }
  }
  std::map<std::pair<int, int>, int> markers;
  for (const auto& bf : mesh.boundary_facets) markers[std::minmax(bf.v0, bf.v1)] = bf.marker;
  for (auto& f : facets) {
    if (f.cell1 >= 0) continue;
    auto it = markers.find({f.v0, f.v1});
    if (it != markers.end()) f.marker = it->second;
  }
  return facets;
}

FunctionSpace make_space(const Triangulation& mesh, int degree, Shape shape, bool continuous) {
  if (degree < 0 || degree > 3) throw std::invalid_argument("make_space: degree out of range");
  if (degree == 0 && continuous) throw std::invalid_argument("make_space: continuous P0 not supported");
  FunctionSpace sp;
  sp.mesh = &mesh;
  sp.elem = ReferenceElement(degree);
  sp.shape = shape;
  sp.continuous = continuous;
  sp.ncomp = shape == Shape::Scalar ? 1 : 2;
  sp.nodes_per_cell = sp.elem.n_nodes();
  const int nc = mesh.n_cells();
  sp.cell_nodes.resize(nc * sp.nodes_per_cell);

  if (!continuous) {
    sp.n_scalar_nodes = nc * sp.nodes_per_cell;
    sp.node_points.resize(sp.n_scalar_nodes);
    for (int c = 0; c < nc; ++c)
      for (int l = 0; l < sp.nodes_per_cell; ++l) {
        const int n = c * sp.nodes_per_cell + l;
        sp.cell_nodes[n] = n;
        sp.node_points[n] = mesh.cell_point(c, sp.elem.nodes()[l]);
      }
    return sp;
  }

  const auto facets = build_facets(mesh);
  std::map<std::pair<int, int>, int> facet_of;  // sorted edge -> facet index
  for (size_t f = 0; f < facets.size(); ++f) facet_of[{facets[f].v0, facets[f].v1}] = static_cast<int>(f);

  const int per_edge = degree - 1;
  const int per_cell = degree == 3 ? 1 : 0;
  const int nv = mesh.n_vertices();
  const int ne = static_cast<int>(facets.size());
  sp.n_scalar_nodes = nv + ne * per_edge + nc * per_cell;
  sp.node_points.assign(sp.n_scalar_nodes, Vec2::Zero());
  for (int v = 0; v < nv; ++v) sp.node_points[v] = mesh.vertices[v];

  for (int c = 0; c < nc; ++c) {
    const auto& t = mesh.cells[c];
    for (int l = 0; l < sp.nodes_per_cell; ++l) {
      const NodeEntity& ent = sp.elem.entities()[l];
      int g = -1;
      if (ent.dim == 0) {
        g = t[ent.index];
      } else if (ent.dim == 1) {
        const int a = t[ent.index], b = t[(ent.index + 1) % 3];
        const int fi = facet_of.at(std::minmax(a, b));
        // Edge slots ordered from the lower to the higher global vertex id.
        const int slot = a < b ? ent.sub : per_edge - 1 - ent.sub;
        g = nv + fi * per_edge + slot;
      } else {
        g = nv + ne * per_edge + c * per_cell;
      }
      sp.cell_nodes[c * sp.nodes_per_cell + l] = g;
      sp.node_points[g] = mesh.cell_point(c, sp.elem.nodes()[l]);
    }
  }

  // Boundary nodes per marker: vertex and edge nodes of marked facets.
  sp.on_boundary.assign(sp.n_scalar_nodes, 0);
  for (const auto& f : facets) {
    if (f.cell1 >= 0) continue;
    const int fi = facet_of.at({f.v0, f.v1});
    sp.on_boundary[f.v0] = 1;
    sp.on_boundary[f.v1] = 1;
    for (int s = 0; s < per_edge; ++s) sp.on_boundary[nv + fi * per_edge + s] = 1;
    if (f.marker < 0) continue;
    auto& list = sp.boundary_nodes[f.marker];
    list.push_back(f.v0);
    list.push_back(f.v1);
    for (int s = 0; s < per_edge; ++s) list.push_back(nv + fi * per_edge + s);
  }
  for (auto& [marker, list] : sp.boundary_nodes) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return sp;
}

Eigen::VectorXd interpolate(const FunctionSpace& sp, const std::function<void(const Vec2&, double*)>& fn) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(sp.n_dofs());
  std::vector<double> buf(sp.ncomp);
  for (int n = 0; n < sp.n_scalar_nodes; ++n) {
    fn(sp.node_points[n], buf.data());
    for (int c = 0; c < sp.ncomp; ++c) out[n * sp.ncomp + c] = buf[c];
  }
  return out;
}

namespace {

double point_norm(const FunctionSpace& sp, const double* v) {
  switch (sp.shape) {
    case Shape::Scalar:
      return std::abs(v[0]);
    case Shape::Vector2:
      return std::sqrt(v[0] * v[0] + v[1] * v[1]);
    case Shape::SymTraceless2:
      return std::sqrt(2.0 * (v[0] * v[0] + v[1] * v[1]));
  }
  return 0.0;
}

}  // namespace

double norm_lr(const FunctionSpace& sp, const Eigen::VectorXd& field, double r) {
  const auto rule = triangle_rule(2 * std::max(1, sp.elem.degree()) + 2);
  const auto tab = tabulate(sp.elem, rule.points);
  double acc = 0.0;
  std::vector<double> val(sp.ncomp);
  for (int c = 0; c < sp.mesh->n_cells(); ++c) {
    const double detJ = 2.0 * sp.mesh->cell_area(c);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      std::fill(val.begin(), val.end(), 0.0);
      for (int l = 0; l < sp.nodes_per_cell; ++l) {
        const double phi = tab.values(q, l);
        for (int k = 0; k < sp.ncomp; ++k) val[k] += phi * field[sp.dof(c, l, k)];
      }
      acc += rule.weights[q] * detJ * std::pow(point_norm(sp, val.data()), r);
    }
  }
  return std::pow(acc, 1.0 / r);
}

double norm_l2(const FunctionSpace& sp, const Eigen::VectorXd& field) { return norm_lr(sp, field, 2.0); }

double norm_div_l2(const FunctionSpace& sp, const Eigen::VectorXd& field) {
  if (sp.shape != Shape::Vector2) throw std::invalid_argument("norm_div_l2: Vector2 field required");
  const auto rule = triangle_rule(2 * std::max(0, sp.elem.degree() - 1));
  const auto tab = tabulate(sp.elem, rule.points);
  double acc = 0.0;
  for (int c = 0; c < sp.mesh->n_cells(); ++c) {
    const Mat2 Jinv = sp.mesh->cell_jacobian(c).inverse();
    const double detJ = 2.0 * sp.mesh->cell_area(c);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      double div = 0.0;
      for (int l = 0; l < sp.nodes_per_cell; ++l) {
        const Vec2 g = Jinv.transpose() * tab.grads[q].row(l).transpose();
        div += g[0] * field[sp.dof(c, l, 0)] + g[1] * field[sp.dof(c, l, 1)];
      }
      acc += rule.weights[q] * detJ * div * div;
    }
  }
  return std::sqrt(acc);
}

double field_mean(const FunctionSpace& sp, const Eigen::VectorXd& field) {
  if (sp.shape != Shape::Scalar) throw std::invalid_argument("field_mean: scalar field required");
  const auto rule = triangle_rule(sp.elem.degree());
  const auto tab = tabulate(sp.elem, rule.points);
  double acc = 0.0, area = 0.0;
  for (int c = 0; c < sp.mesh->n_cells(); ++c) {
    const double detJ = 2.0 * sp.mesh->cell_area(c);
    area += sp.mesh->cell_area(c);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      double v = 0.0;
      for (int l = 0; l < sp.nodes_per_cell; ++l) v += tab.values(q, l) * field[sp.dof(c, l, 0)];
      acc += rule.weights[q] * detJ * v;
    }
  }
  return acc / area;
}

void eval_in_cell(const FunctionSpace& sp, const Eigen::VectorXd& field, int cell, const Vec2& xref,
                  double* value, Eigen::Matrix<double, -1, 2>* grad) {
  Eigen::VectorXd phi;
  sp.elem.eval(xref, phi);
  for (int k = 0; k < sp.ncomp; ++k) value[k] = 0.0;
  for (int l = 0; l < sp.nodes_per_cell; ++l)
    for (int k = 0; k < sp.ncomp; ++k) value[k] += phi[l] * field[sp.dof(cell, l, k)];
  if (grad) {
    Eigen::MatrixXd refg;
    sp.elem.eval_grad(xref, refg);
    const Mat2 Jinv = sp.mesh->cell_jacobian(cell).inverse();
    grad->setZero(sp.ncomp, 2);
    for (int l = 0; l < sp.nodes_per_cell; ++l) {
      const Vec2 g = Jinv.transpose() * refg.row(l).transpose();
      for (int k = 0; k < sp.ncomp; ++k) grad->row(k) += field[sp.dof(cell, l, k)] * g.transpose();
    }
  }
}

}  // namespace nnflow
