#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <map>
#include <set>

#include "nnflow/mesh.hpp"
#include "nnflow/supermesh.hpp"

using namespace nnflow;

namespace {

void check_oriented(const Triangulation& m) {
  for (int c = 0; c < m.n_cells(); ++c) CHECK(m.cell_area(c) > 0.0);
}

std::map<int, double> marker_lengths(const Triangulation& m) {
  std::map<int, double> len;
  for (const auto& f : m.boundary_facets) len[f.marker] += (m.vertices[f.v1] - m.vertices[f.v0]).norm();
  return len;
}

}  // namespace

TEST_CASE("rect_mesh counts and markers") {
  const Triangulation m = rect_mesh(1, 1, 1.0, 1.0, 0.0);
  CHECK(m.n_vertices() == 4);
  CHECK(m.n_cells() == 2);
  CHECK(m.boundary_facets.size() == 4);
  check_oriented(m);
  CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-14));

  const Triangulation m2 = rect_mesh(2, 1, 2.0, 1.0, 0.0);
  CHECK(m2.n_vertices() == 6);
  CHECK(m2.n_cells() == 4);
  CHECK(m2.boundary_facets.size() == 6);

  const Triangulation ch = rect_mesh(16, 8, 4.0, 2.0, -1.0);
  CHECK(ch.total_area() == doctest::Approx(8.0).epsilon(1e-13));
  const auto len = marker_lengths(ch);
  CHECK(len.at(1) == doctest::Approx(2.0));  // left
  CHECK(len.at(2) == doctest::Approx(2.0));  // right
  CHECK(len.at(3) == doctest::Approx(4.0));  // bottom
  CHECK(len.at(4) == doctest::Approx(4.0));  // top
  for (const auto& v : ch.vertices) {
    CHECK(v[0] >= 0.0);
    CHECK(v[0] <= 4.0);
    CHECK(v[1] >= -1.0);
    CHECK(v[1] <= 1.0);
  }
  CHECK_THROWS(rect_mesh(0, 1, 1.0, 1.0, 0.0));
}

TEST_CASE("channel_with_hole geometry") {
  const Triangulation m = channel_with_hole(1);
  check_oriented(m);
  CHECK(m.total_area() == doctest::Approx(2.0 * 0.41 - 0.01).epsilon(1e-12));
  const auto len = marker_lengths(m);
  CHECK(len.at(1) == doctest::Approx(0.41).epsilon(1e-12));
  CHECK(len.at(2) == doctest::Approx(0.41).epsilon(1e-12));
  CHECK(len.at(3) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(len.at(4) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(len.at(5) == doctest::Approx(0.4).epsilon(1e-12));
  // obstacle boundary vertices sit on the hole rectangle
  for (const auto& f : m.boundary_facets) {
    if (f.marker != 5) continue;
    for (int v : {f.v0, f.v1}) {
      const Vec2& p = m.vertices[v];
      const bool on_x = std::abs(p[0] - 0.3) < 1e-12 || std::abs(p[0] - 0.4) < 1e-12;
      const bool on_y = std::abs(p[1] - 0.15) < 1e-12 || std::abs(p[1] - 0.25) < 1e-12;
      CHECK((on_x || on_y));
      CHECK(p[0] >= 0.3 - 1e-12);
      CHECK(p[0] <= 0.4 + 1e-12);
      CHECK(p[1] >= 0.15 - 1e-12);
      CHECK(p[1] <= 0.25 + 1e-12);
    }
  }
}

TEST_CASE("uniform_refine") {
  const Triangulation m = rect_mesh(2, 2, 1.0, 1.0, 0.0);
  std::vector<std::array<int, 4>> child;
  const Triangulation r = uniform_refine(m, &child);
  CHECK(r.n_cells() == 4 * m.n_cells());
  CHECK(child.size() == static_cast<size_t>(m.n_cells()));
  CHECK(r.boundary_facets.size() == 2 * m.boundary_facets.size());
  CHECK(r.total_area() == doctest::Approx(m.total_area()).epsilon(1e-14));
  check_oriented(r);
  // children tile the parent
  for (int c = 0; c < m.n_cells(); ++c) {
    double a = 0.0;
    for (int k : child[c]) a += r.cell_area(k);
    CHECK(a == doctest::Approx(m.cell_area(c)).epsilon(1e-13));
  }
}

TEST_CASE("barycentric_refine") {
  const Triangulation m = rect_mesh(2, 1, 1.0, 1.0, 0.0);
  const Triangulation b = barycentric_refine(m);
  CHECK(b.n_cells() == 3 * m.n_cells());
  CHECK(b.n_vertices() == m.n_vertices() + m.n_cells());
  CHECK(b.total_area() == doctest::Approx(m.total_area()).epsilon(1e-14));
  check_oriented(b);
  for (int c = 0; c < b.n_cells(); ++c) CHECK(b.macro_parent[c] == c / 3);
  CHECK(b.boundary_facets.size() == m.boundary_facets.size());
}

TEST_CASE("hierarchy structure") {
  const MeshHierarchy h = build_hierarchy(rect_mesh(1, 1, 1.0, 1.0, 0.0), 2);
  REQUIRE(h.n_levels() == 2);
  CHECK(h.macro[0].n_cells() == 2);
  CHECK(h.macro[1].n_cells() == 8);
  CHECK(h.levels[0].n_cells() == 6);
  CHECK(h.levels[1].n_cells() == 24);
  CHECK(h.macro_child.size() == 1);
  CHECK(h.supermeshes.size() == 1);
  for (int l = 0; l < 2; ++l) {
    CHECK(h.levels[l].total_area() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(h.macro[l].total_area() == doctest::Approx(1.0).epsilon(1e-13));
  }
  CHECK(h.supermeshes[0].total_area == doctest::Approx(1.0).epsilon(1e-12));

  // consecutive levels are not nested: some fine cell straddles coarse cells
  const CellLocator loc(h.levels[0]);
  bool straddles = false;
  for (int c = 0; c < h.levels[1].n_cells() && !straddles; ++c) {
    const Vec2 g = h.levels[1].cell_point(c, Vec2(1.0 / 3.0, 1.0 / 3.0));
    const int host = loc.locate(g);
    REQUIRE(host >= 0);
    for (int v : h.levels[1].cells[c]) {
      const Vec2 r = h.levels[0].reference_coords(host, h.levels[1].vertices[v]);
      if (r[0] < -1e-10 || r[1] < -1e-10 || r[0] + r[1] > 1.0 + 1e-10) straddles = true;
    }
  }
  CHECK(straddles);
}

TEST_CASE("macrostar patches") {
  const Triangulation macro = rect_mesh(2, 2, 1.0, 1.0, 0.0);
  const Triangulation fine = barycentric_refine(macro);
  const auto patches = macrostar_patches(fine, macro);
  REQUIRE(patches.size() == static_cast<size_t>(macro.n_vertices()));

  std::set<int> covered;
  int center = -1;
  for (const auto& p : patches) {
    CHECK(!p.macro_cells.empty());
    CHECK(p.fine_cells.size() == 3 * p.macro_cells.size());
    for (int c : p.macro_cells) {
      const auto& t = macro.cells[c];
      CHECK((t[0] == p.seed_vertex || t[1] == p.seed_vertex || t[2] == p.seed_vertex));
    }
    for (int f : p.fine_cells) {
      covered.insert(f);
      CHECK(fine.macro_parent[f] == f / 3);
    }
    if ((macro.vertices[p.seed_vertex] - Vec2(0.5, 0.5)).norm() < 1e-14) center = p.seed_vertex;
  }
  CHECK(covered.size() == static_cast<size_t>(fine.n_cells()));
  REQUIRE(center >= 0);
  CHECK(patches[center].macro_cells.size() == 6);
  CHECK(patches[center].fine_cells.size() == 18);
  // corner seeds touch one or two macro cells
  for (const auto& p : patches) {
    const Vec2& v = macro.vertices[p.seed_vertex];
    const bool corner = (std::abs(v[0]) < 1e-14 || std::abs(v[0] - 1.0) < 1e-14) &&
                        (std::abs(v[1]) < 1e-14 || std::abs(v[1] - 1.0) < 1e-14);
    if (corner) CHECK(p.macro_cells.size() <= 2);
  }
}

TEST_CASE("cell locator") {
  const Triangulation m = barycentric_refine(rect_mesh(4, 3, 2.0, 1.5, -0.5));
  const CellLocator loc(m);
  for (int c = 0; c < m.n_cells(); ++c) {
    const Vec2 g = m.cell_point(c, Vec2(1.0 / 3.0, 1.0 / 3.0));
    const int found = loc.locate(g);
    CHECK(found == c);
  }
  CHECK(loc.locate(Vec2(-0.1, 0.0)) == -1);
  CHECK(loc.locate(Vec2(5.0, 0.0)) == -1);
  // vertex points land in the lowest-index incident cell
  const int at_vertex = loc.locate(m.vertices[0]);
  CHECK(at_vertex >= 0);
  const Vec2 r = m.reference_coords(at_vertex, m.vertices[0]);
  CHECK(r[0] >= -1e-12);
  CHECK(r[1] >= -1e-12);
  CHECK(r[0] + r[1] <= 1.0 + 1e-12);
}

TEST_CASE("mesh file roundtrip") {
  const Triangulation m = barycentric_refine(rect_mesh(3, 2, 1.0, 1.0, 0.0));
  const std::string path = "roundtrip_mesh.txt";
  write_mesh(path, m);
  const Triangulation r = read_mesh(path);
  REQUIRE(r.n_vertices() == m.n_vertices());
  REQUIRE(r.n_cells() == m.n_cells());
  REQUIRE(r.boundary_facets.size() == m.boundary_facets.size());
  for (int v = 0; v < m.n_vertices(); ++v) CHECK((r.vertices[v] - m.vertices[v]).norm() < 1e-15);
  for (int c = 0; c < m.n_cells(); ++c) {
    CHECK(r.cells[c] == m.cells[c]);
    CHECK(r.macro_parent[c] == m.macro_parent[c]);
  }
  for (size_t f = 0; f < m.boundary_facets.size(); ++f) {
    CHECK(r.boundary_facets[f].v0 == m.boundary_facets[f].v0);
    CHECK(r.boundary_facets[f].v1 == m.boundary_facets[f].v1);
    CHECK(r.boundary_facets[f].marker == m.boundary_facets[f].marker);
  }
  std::remove(path.c_str());
  CHECK_THROWS(read_mesh("does_not_exist.txt"));
}
