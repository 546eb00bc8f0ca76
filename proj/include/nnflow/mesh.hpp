#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "nnflow/tensor.hpp"

namespace nnflow {

struct BoundaryFacet {
  int v0, v1;
  int marker;
};

// Conforming triangulation. Cells are positively oriented vertex triples.
// macro_parent maps each cell to its pre-barycentric macro cell; it is the
// identity until barycentric_refine is applied.
struct Triangulation {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> cells;
  std::vector<BoundaryFacet> boundary_facets;
  std::vector<int> macro_parent;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }

  double cell_area(int c) const;
  // Affine map x = v0 + J * xref; returns J.
  Mat2 cell_jacobian(int c) const;
  Vec2 cell_point(int c, const Vec2& xref) const;
  // Reference coordinates of physical point x in cell c.
  Vec2 reference_coords(int c, const Vec2& x) const;
  double total_area() const;
};

// Structured triangulation of (0,Lx) x (y0, y0+Ly), each quad split by the
// lower-left to upper-right diagonal. Markers: left 1, right 2, bottom 3, top 4.
Triangulation rect_mesh(int nx, int ny, double Lx, double Ly, double y0);

// (0,2) x (0,0.41) with the square obstacle (0.3,0.4) x (0.15,0.25) removed.
// Outer markers as rect_mesh, obstacle boundary marker 5. resolution >= 1
// scales the target grid spacing 0.1/resolution.
Triangulation channel_with_hole(int resolution);

// Red refinement: each triangle split into 4 via edge midpoints. If child_map
// is given it receives the 4 child indices per parent cell.
Triangulation uniform_refine(const Triangulation& mesh, std::vector<std::array<int, 4>>* child_map = nullptr);

// Each triangle split into 3 at its barycenter; macro_parent set to the
// parent cell index. Children of cell c are 3c, 3c+1, 3c+2.
Triangulation barycentric_refine(const Triangulation& mesh);

struct MacroStarPatch {
  int seed_vertex;               // vertex index in the macro mesh
  std::vector<int> macro_cells;  // macro cells incident to the seed
  std::vector<int> fine_cells;   // their barycentric children
};

// One patch per macro vertex, ordered by vertex index.
std::vector<MacroStarPatch> macrostar_patches(const Triangulation& fine, const Triangulation& macro);

struct Supermesh;  // supermesh.hpp

// Non-nested multilevel structure: macro[l] is the l-times uniformly refined
// coarse macro mesh, levels[l] its barycentric refinement. Stress transfer
// between consecutive levels goes through supermeshes[l] (levels[l] coarse,
// levels[l+1] fine).
struct MeshHierarchy {
  std::vector<Triangulation> macro;
  std::vector<Triangulation> levels;
  std::vector<std::vector<std::array<int, 4>>> macro_child;  // macro[l] -> macro[l+1]
  std::vector<Supermesh> supermeshes;

  int n_levels() const { return static_cast<int>(levels.size()); }
  MeshHierarchy();
  MeshHierarchy(MeshHierarchy&&) noexcept;
  MeshHierarchy& operator=(MeshHierarchy&&) noexcept;
  ~MeshHierarchy();
};

MeshHierarchy build_hierarchy(const Triangulation& coarse_macro, int n_levels);

// Deterministic point location with an axis-aligned bbox grid. Returns the
// lowest-index cell containing x (within tolerance), or -1.
class CellLocator {
 public:
  explicit CellLocator(const Triangulation& mesh, double tol = 1e-12);
  int locate(const Vec2& x) const;

 private:
  const Triangulation* mesh_;
  double tol_;
  int nx_, ny_;
  Vec2 lo_, hi_;
  std::vector<std::vector<int>> bins_;
};

// Plain text mesh format: "nv nc nf", vertex lines "x y", cell lines
// "v0 v1 v2 macro_parent", facet lines "v0 v1 marker".
Triangulation read_mesh(const std::string& path);
void write_mesh(const std::string& path, const Triangulation& mesh);

}  // namespace nnflow
