#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nnflow/linalg.hpp"
#include "nnflow/mesh.hpp"

namespace nnflow {

// Legacy ASCII VTK unstructured grid: mesh vertices as points, triangles as
// cells, vector point data and scalar cell data.
void write_vtk(const std::string& path, const Triangulation& mesh,
               const std::vector<std::pair<std::string, std::vector<Vec2>>>& point_vectors,
               const std::vector<std::pair<std::string, std::vector<double>>>& cell_scalars);

// MatrixMarket coordinate format.
void write_matrix_market(const std::string& path, const SpMat& A);

}  // namespace nnflow
