#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "nnflow/space.hpp"

using namespace nnflow;

TEST_CASE("build_facets on a refined square") {
  const Triangulation m = barycentric_refine(rect_mesh(1, 1, 1.0, 1.0, 0.0));
  const auto facets = build_facets(m);
  CHECK(facets.size() == 11);  // 6 cells, 4 boundary + 7 interior edges
  int nb = 0;
  for (const auto& f : facets) {
    CHECK(f.cell0 >= 0);
    CHECK(f.v0 < f.v1);
    const auto& t0 = m.cells[f.cell0];
    const int a = t0[f.edge0], b = t0[(f.edge0 + 1) % 3];
    CHECK(std::min(a, b) == f.v0);
    CHECK(std::max(a, b) == f.v1);
    if (f.cell1 < 0) {
      ++nb;
      CHECK(f.marker >= 1);
    } else {
      CHECK(f.marker == -1);
      const auto& t1 = m.cells[f.cell1];
      const int c = t1[f.edge1], d = t1[(f.edge1 + 1) % 3];
      CHECK(std::min(c, d) == f.v0);
      CHECK(std::max(c, d) == f.v1);
    }
  }
  CHECK(nb == 4);
}

TEST_CASE("dof counts") {
  const Triangulation m = barycentric_refine(rect_mesh(1, 1, 1.0, 1.0, 0.0));
  const int nv = m.n_vertices(), nc = m.n_cells();
  const int ne = static_cast<int>(build_facets(m).size());

  const FunctionSpace u2 = make_space(m, 2, Shape::Vector2, true);
  CHECK(u2.n_scalar_nodes == nv + ne);
  CHECK(u2.n_dofs() == 2 * (nv + ne));
  CHECK(u2.n_dofs() == 34);

  const FunctionSpace u3 = make_space(m, 3, Shape::Vector2, true);
  CHECK(u3.n_scalar_nodes == nv + 2 * ne + nc);

  const FunctionSpace p1 = make_space(m, 1, Shape::Scalar, false);
  CHECK(p1.n_dofs() == 3 * nc);
  CHECK(p1.n_dofs() == 18);

  const FunctionSpace s1 = make_space(m, 1, Shape::SymTraceless2, false);
  CHECK(s1.ncomp == 2);
  CHECK(s1.n_dofs() == 6 * nc);
  CHECK(s1.n_dofs() == 36);

  // discontinuous numbering is cell-major
  for (int c = 0; c < nc; ++c)
    for (int l = 0; l < p1.nodes_per_cell; ++l) CHECK(p1.node(c, l) == c * p1.nodes_per_cell + l);
}

TEST_CASE("continuity across interior facets") {
  const Triangulation m = barycentric_refine(rect_mesh(2, 2, 1.0, 1.0, 0.0));
  const FunctionSpace sp = make_space(m, 2, Shape::Vector2, true);
  const Eigen::VectorXd f = interpolate(sp, [](const Vec2& x, double* v) {
    v[0] = x[0] * x[0] + x[1];
    v[1] = x[0] - 2.0 * x[1] * x[1];
  });
  for (const auto& fc : build_facets(m)) {
    if (fc.cell1 < 0) continue;
    const Vec2 mid = 0.5 * (m.vertices[fc.v0] + m.vertices[fc.v1]);
    double v0[2], v1[2];
    eval_in_cell(sp, f, fc.cell0, m.reference_coords(fc.cell0, mid), v0);
    eval_in_cell(sp, f, fc.cell1, m.reference_coords(fc.cell1, mid), v1);
    CHECK(std::abs(v0[0] - v1[0]) < 1e-12);
    CHECK(std::abs(v0[1] - v1[1]) < 1e-12);
  }
}

TEST_CASE("interpolation reproduces polynomials up to the space degree") {
  const Triangulation m = barycentric_refine(rect_mesh(3, 2, 1.0, 1.0, 0.0));
  const FunctionSpace sp = make_space(m, 2, Shape::Scalar, true);
  const auto f = [](const Vec2& x) { return 1.0 + x[0] - 3.0 * x[1] + 0.5 * x[0] * x[1] + x[1] * x[1]; };
  const Eigen::VectorXd c = interpolate(sp, [&](const Vec2& x, double* v) { v[0] = f(x); });
  for (int cell = 0; cell < m.n_cells(); cell += 5) {
    const Vec2 xr(0.21, 0.33);
    double val;
    Eigen::Matrix<double, -1, 2> grad(1, 2);
    eval_in_cell(sp, c, cell, xr, &val, &grad);
    const Vec2 x = m.cell_point(cell, xr);
    CHECK(val == doctest::Approx(f(x)).epsilon(1e-12));
    CHECK(grad(0, 0) == doctest::Approx(1.0 + 0.5 * x[1]).epsilon(1e-11));
    CHECK(grad(0, 1) == doctest::Approx(-3.0 + 0.5 * x[0] + 2.0 * x[1]).epsilon(1e-11));
  }
}

TEST_CASE("norms") {
  const Triangulation m = barycentric_refine(rect_mesh(4, 4, 1.0, 1.0, 0.0));
  const FunctionSpace usp = make_space(m, 2, Shape::Vector2, true);

  const Eigen::VectorXd shear = interpolate(usp, [](const Vec2& x, double* v) {
    v[0] = x[1];
    v[1] = 0.0;
  });
  CHECK(norm_l2(usp, shear) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-12));
  CHECK(norm_div_l2(usp, shear) < 1e-13);

  const Eigen::VectorXd solen = interpolate(usp, [](const Vec2& x, double* v) {
    v[0] = x[0];
    v[1] = -x[1];
  });
  CHECK(norm_div_l2(usp, solen) < 1e-12);

  const Eigen::VectorXd expand = interpolate(usp, [](const Vec2& x, double* v) {
    v[0] = x[0];
    v[1] = x[1];
  });
  CHECK(norm_div_l2(usp, expand) == doctest::Approx(2.0).epsilon(1e-12));

  const FunctionSpace psp = make_space(m, 1, Shape::Scalar, false);
  const Eigen::VectorXd lin = interpolate(psp, [](const Vec2& x, double* v) { v[0] = x[0]; });
  CHECK(norm_lr(psp, lin, 4.0) == doctest::Approx(std::pow(0.2, 0.25)).epsilon(1e-10));
  CHECK(field_mean(psp, lin) == doctest::Approx(0.5).epsilon(1e-12));

  const FunctionSpace ssp = make_space(m, 1, Shape::SymTraceless2, false);
  const Eigen::VectorXd st = interpolate(ssp, [](const Vec2&, double* v) {
    v[0] = 1.0;
    v[1] = 0.0;
  });
  // |T|^2 = 2 for T = [[1,0],[0,-1]]
  CHECK(norm_l2(ssp, st) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("boundary node bookkeeping") {
  const Triangulation m = barycentric_refine(rect_mesh(2, 2, 1.0, 1.0, 0.0));
  const FunctionSpace sp = make_space(m, 2, Shape::Vector2, true);
  REQUIRE(sp.on_boundary.size() == static_cast<size_t>(sp.n_scalar_nodes));

  const auto on_square = [](const Vec2& p) {
    return std::abs(p[0]) < 1e-12 || std::abs(p[0] - 1.0) < 1e-12 || std::abs(p[1]) < 1e-12 ||
           std::abs(p[1] - 1.0) < 1e-12;
  };
  for (int n = 0; n < sp.n_scalar_nodes; ++n)
    CHECK(static_cast<bool>(sp.on_boundary[n]) == on_square(sp.node_points[n]));

  // marker 1 is the left side: 2 edges -> 3 vertices + 2 midpoints
  const auto& left = sp.boundary_nodes.at(1);
  CHECK(left.size() == 5);
  for (int n : left) CHECK(std::abs(sp.node_points[n][0]) < 1e-12);
  const auto& top = sp.boundary_nodes.at(4);
  for (int n : top) CHECK(std::abs(sp.node_points[n][1] - 1.0) < 1e-12);
}
