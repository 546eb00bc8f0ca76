#pragma once

#include <vector>

#include "nnflow/mesh.hpp"

namespace nnflow {

// Intersection of two triangles given by vertex coordinates (any orientation).
// Returns the convex intersection polygon in counterclockwise order; empty if
// the overlap area is below 1e-14 times the larger input area.
std::vector<Vec2> triangle_intersection(const std::array<Vec2, 3>& ta, const std::array<Vec2, 3>& tb);

struct Supermesh {
  struct Tri {
    std::array<Vec2, 3> v;
    int parent_coarse;
    int parent_fine;
    double area;
  };
  std::vector<Tri> tris;
  double total_area = 0.0;
};

// Common refinement of two triangulations of the same domain. Triangles are
// ordered by (coarse parent, fine parent). Aborts if the total area deviates
// from the domain area by more than 1e-10 relative.
Supermesh build_supermesh(const Triangulation& coarse, const Triangulation& fine);

}  // namespace nnflow
