#include "nnflow/io.hpp"

#include <fstream>
#include <stdexcept>

namespace nnflow {

void write_vtk(const std::string& path, const Triangulation& mesh,
               const std::vector<std::pair<std::string, std::vector<Vec2>>>& point_vectors,
               const std::vector<std::pair<std::string, std::vector<double>>>& cell_scalars) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_vtk: cannot open " + path);
  out.precision(12);
  out << "# vtk DataFile Version 3.0\nnnflow fields\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_vertices() << " double\n";
  for (const auto& v : mesh.vertices) out << v[0] << ' ' << v[1] << " 0\n";
  out << "CELLS " << mesh.n_cells() << ' ' << 4 * mesh.n_cells() << '\n';
  for (const auto& c : mesh.cells) out << "3 " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  out << "CELL_TYPES " << mesh.n_cells() << '\n';
  for (int c = 0; c < mesh.n_cells(); ++c) out << "5\n";
  if (!point_vectors.empty()) {
    out << "POINT_DATA " << mesh.n_vertices() << '\n';
    for (const auto& [name, data] : point_vectors) {
      if (static_cast<int>(data.size()) != mesh.n_vertices())
        throw std::invalid_argument("write_vtk: point data size mismatch");
      out << "VECTORS " << name << " double\n";
      for (const auto& v : data) out << v[0] << ' ' << v[1] << " 0\n";
    }
  }
  if (!cell_scalars.empty()) {
    out << "CELL_DATA " << mesh.n_cells() << '\n';
    for (const auto& [name, data] : cell_scalars) {
      if (static_cast<int>(data.size()) != mesh.n_cells())
        throw std::invalid_argument("write_vtk: cell data size mismatch");
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double s : data) out << s << '\n';
    }
  }
}

void write_matrix_market(const std::string& path, const SpMat& A) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix_market: cannot open " + path);
  out.precision(17);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it)
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

}  // namespace nnflow
