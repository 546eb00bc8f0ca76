#include "nnflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "nnflow/supermesh.hpp"

namespace nnflow {

double Triangulation::cell_area(int c) const {
  const auto& t = cells[c];
  const Vec2 e1 = vertices[t[1]] - vertices[t[0]];
  const Vec2 e2 = vertices[t[2]] - vertices[t[0]];
  return 0.5 * (e1[0] * e2[1] - e1[1] * e2[0]);
}

Mat2 Triangulation::cell_jacobian(int c) const {
  const auto& t = cells[c];
  Mat2 J;
  J.col(0) = vertices[t[1]] - vertices[t[0]];
  J.col(1) = vertices[t[2]] - vertices[t[0]];
  return J;
}

Vec2 Triangulation::cell_point(int c, const Vec2& xref) const {
  const auto& t = cells[c];
  return vertices[t[0]] + cell_jacobian(c) * xref;
}

Vec2 Triangulation::reference_coords(int c, const Vec2& x) const {
  return cell_jacobian(c).inverse() * (x - vertices[cells[c][0]]);
}

double Triangulation::total_area() const {
  double a = 0.0;
  for (int c = 0; c < n_cells(); ++c) a += cell_area(c);
  return a;
}

Triangulation rect_mesh(int nx, int ny, double Lx, double Ly, double y0) {
  if (nx < 1 || ny < 1 || Lx <= 0.0 || Ly <= 0.0)
    throw std::invalid_argument("rect_mesh: invalid dimensions");
  Triangulation m;
  const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.vertices.emplace_back(Lx * i / nx, y0 + Ly * j / ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int p00 = vid(i, j), p10 = vid(i + 1, j), p11 = vid(i + 1, j + 1), p01 = vid(i, j + 1);
      m.cells.push_back({p00, p10, p11});
      m.cells.push_back({p00, p11, p01});
    }
  for (int j = 0; j < ny; ++j) m.boundary_facets.push_back({vid(0, j), vid(0, j + 1), 1});
  for (int j = 0; j < ny; ++j) m.boundary_facets.push_back({vid(nx, j), vid(nx, j + 1), 2});
  for (int i = 0; i < nx; ++i) m.boundary_facets.push_back({vid(i, 0), vid(i + 1, 0), 3});
  for (int i = 0; i < nx; ++i) m.boundary_facets.push_back({vid(i, ny), vid(i + 1, ny), 4});
  m.macro_parent.resize(m.cells.size());
  std::iota(m.macro_parent.begin(), m.macro_parent.end(), 0);
  return m;
}

namespace {

// Subdivide [a,b] into ceil((b-a)/h) equal pieces; append interior+right points.
void segment_points(double a, double b, double h, std::vector<double>& out) {
  const int n = std::max(1, static_cast<int>(std::ceil((b - a) / h - 1e-9)));
  for (int i = 1; i <= n; ++i) out.push_back(a + (b - a) * i / n);
}

}  // namespace

Triangulation channel_with_hole(int resolution) {
  if (resolution < 1) throw std::invalid_argument("channel_with_hole: resolution < 1");
  const double h = 0.1 / resolution;
  std::vector<double> xs{0.0}, ys{0.0};
  segment_points(0.0, 0.3, h, xs);
  segment_points(0.3, 0.4, h, xs);
  segment_points(0.4, 2.0, h, xs);
  segment_points(0.0, 0.15, h, ys);
  segment_points(0.15, 0.25, h, ys);
  segment_points(0.25, 0.41, h, ys);
  const int nx = static_cast<int>(xs.size()) - 1, ny = static_cast<int>(ys.size()) - 1;

  const auto in_hole = [&](int i, int j) {
    const double xm = 0.5 * (xs[i] + xs[i + 1]), ym = 0.5 * (ys[j] + ys[j + 1]);
    return xm > 0.3 && xm < 0.4 && ym > 0.15 && ym < 0.25;
  };

  Triangulation m;
  std::vector<int> vmap((nx + 1) * (ny + 1), -1);
  const auto grid = [nx](int i, int j) { return j * (nx + 1) + i; };
  const auto vertex = [&](int i, int j) {
    int& id = vmap[grid(i, j)];
    if (id < 0) {
      id = m.n_vertices();
      m.vertices.emplace_back(xs[i], ys[j]);
    }
    return id;
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (in_hole(i, j)) continue;
      const int p00 = vertex(i, j), p10 = vertex(i + 1, j);
      const int p11 = vertex(i + 1, j + 1), p01 = vertex(i, j + 1);
      m.cells.push_back({p00, p10, p11});
      m.cells.push_back({p00, p11, p01});
    }
  m.macro_parent.resize(m.cells.size());
  std::iota(m.macro_parent.begin(), m.macro_parent.end(), 0);

  // Boundary facets: edges adjacent to exactly one cell, classified by position.
  std::map<std::pair<int, int>, int> edge_count;
  std::vector<std::pair<int, int>> edge_order;
  for (const auto& c : m.cells)
    for (int e = 0; e < 3; ++e) {
      const int a = c[e], b = c[(e + 1) % 3];
      const auto key = std::minmax(a, b);
      if (edge_count.find(key) == edge_count.end()) edge_order.push_back(key);
      edge_count[key] += 1;
    }
  const double tol = 1e-12;
  for (const auto& key : edge_order) {
    if (edge_count[key] != 1) continue;
    const Vec2& p = m.vertices[key.first];
    const Vec2& q = m.vertices[key.second];
    int marker = 5;
    if (std::abs(p[0]) < tol && std::abs(q[0]) < tol) marker = 1;
    else if (std::abs(p[0] - 2.0) < tol && std::abs(q[0] - 2.0) < tol) marker = 2;
    else if (std::abs(p[1]) < tol && std::abs(q[1]) < tol) marker = 3;
    else if (std::abs(p[1] - 0.41) < tol && std::abs(q[1] - 0.41) < tol) marker = 4;
    m.boundary_facets.push_back({key.first, key.second, marker});
  }
  return m;
}

Triangulation uniform_refine(const Triangulation& mesh, std::vector<std::array<int, 4>>* child_map) {
  Triangulation out;
  out.vertices = mesh.vertices;
  std::map<std::pair<int, int>, int> midpoint;
  const auto mid = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = out.n_vertices();
    out.vertices.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
    midpoint.emplace(key, id);
    return id;
  };
  if (child_map) child_map->clear();
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& t = mesh.cells[c];
    const int mab = mid(t[0], t[1]), mbc = mid(t[1], t[2]), mca = mid(t[2], t[0]);
    const int base = out.n_cells();
    out.cells.push_back({t[0], mab, mca});
    out.cells.push_back({mab, t[1], mbc});
    out.cells.push_back({mca, mbc, t[2]});
    out.cells.push_back({mab, mbc, mca});
    if (child_map) child_map->push_back({base, base + 1, base + 2, base + 3});
  }
  for (const auto& f : mesh.boundary_facets) {
    const int mm = mid(f.v0, f.v1);
    out.boundary_facets.push_back({f.v0, mm, f.marker});
    out.boundary_facets.push_back({mm, f.v1, f.marker});
  }
  out.macro_parent.resize(out.cells.size());
  std::iota(out.macro_parent.begin(), out.macro_parent.end(), 0);
  return out;
}

Triangulation barycentric_refine(const Triangulation& mesh) {
  Triangulation out;
  out.vertices = mesh.vertices;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& t = mesh.cells[c];
    const Vec2 g = (mesh.vertices[t[0]] + mesh.vertices[t[1]] + mesh.vertices[t[2]]) / 3.0;
    const int gid = out.n_vertices();
    out.vertices.push_back(g);
    out.cells.push_back({t[0], t[1], gid});
    out.cells.push_back({t[1], t[2], gid});
    out.cells.push_back({t[2], t[0], gid});
    out.macro_parent.insert(out.macro_parent.end(), {c, c, c});
  }
  out.boundary_facets = mesh.boundary_facets;
  return out;
}

std::vector<MacroStarPatch> macrostar_patches(const Triangulation& fine, const Triangulation& macro) {
  if (fine.n_cells() != 3 * macro.n_cells())
    throw std::invalid_argument("macrostar_patches: fine mesh is not the barycentric refinement");
  std::vector<std::vector<int>> vertex_cells(macro.n_vertices());
  for (int c = 0; c < macro.n_cells(); ++c)
    for (int v : macro.cells[c]) vertex_cells[v].push_back(c);
  std::vector<MacroStarPatch> patches(macro.n_vertices());
  for (int v = 0; v < macro.n_vertices(); ++v) {
    patches[v].seed_vertex = v;
    patches[v].macro_cells = vertex_cells[v];
    for (int c : vertex_cells[v])
      for (int k = 0; k < 3; ++k) patches[v].fine_cells.push_back(3 * c + k);
  }
  return patches;
}

MeshHierarchy::MeshHierarchy() = default;
MeshHierarchy::MeshHierarchy(MeshHierarchy&&) noexcept = default;
MeshHierarchy& MeshHierarchy::operator=(MeshHierarchy&&) noexcept = default;
MeshHierarchy::~MeshHierarchy() = default;

MeshHierarchy build_hierarchy(const Triangulation& coarse_macro, int n_levels) {
  if (n_levels < 1) throw std::invalid_argument("build_hierarchy: n_levels < 1");
  MeshHierarchy h;
  h.macro.push_back(coarse_macro);
  h.macro.back().macro_parent.resize(coarse_macro.n_cells());
  std::iota(h.macro.back().macro_parent.begin(), h.macro.back().macro_parent.end(), 0);
  h.levels.push_back(barycentric_refine(h.macro[0]));
  for (int l = 1; l < n_levels; ++l) {
    std::vector<std::array<int, 4>> child;
    h.macro.push_back(uniform_refine(h.macro[l - 1], &child));
    h.macro_child.push_back(std::move(child));
    h.levels.push_back(barycentric_refine(h.macro[l]));
    h.supermeshes.push_back(build_supermesh(h.levels[l - 1], h.levels[l]));
  }
  return h;
}

CellLocator::CellLocator(const Triangulation& mesh, double tol) : mesh_(&mesh), tol_(tol) {
  lo_ = mesh.vertices[0];
  hi_ = mesh.vertices[0];
  for (const auto& v : mesh.vertices) {
    lo_ = lo_.cwiseMin(v);
    hi_ = hi_.cwiseMax(v);
  }
  const int n = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(mesh.n_cells()))));
  nx_ = ny_ = n;
  bins_.assign(nx_ * ny_, {});
  const Vec2 span = (hi_ - lo_).cwiseMax(Vec2(1e-300, 1e-300));
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Vec2 clo = mesh.vertices[mesh.cells[c][0]], chi = clo;
    for (int k = 1; k < 3; ++k) {
      clo = clo.cwiseMin(mesh.vertices[mesh.cells[c][k]]);
      chi = chi.cwiseMax(mesh.vertices[mesh.cells[c][k]]);
    }
    const int i0 = std::clamp(static_cast<int>((clo[0] - lo_[0]) / span[0] * nx_), 0, nx_ - 1);
    const int i1 = std::clamp(static_cast<int>((chi[0] - lo_[0]) / span[0] * nx_), 0, nx_ - 1);
    const int j0 = std::clamp(static_cast<int>((clo[1] - lo_[1]) / span[1] * ny_), 0, ny_ - 1);
    const int j1 = std::clamp(static_cast<int>((chi[1] - lo_[1]) / span[1] * ny_), 0, ny_ - 1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) bins_[j * nx_ + i].push_back(c);
  }
}

int CellLocator::locate(const Vec2& x) const {
  const Vec2 span = (hi_ - lo_).cwiseMax(Vec2(1e-300, 1e-300));
  const int i = std::clamp(static_cast<int>((x[0] - lo_[0]) / span[0] * nx_), 0, nx_ - 1);
  const int j = std::clamp(static_cast<int>((x[1] - lo_[1]) / span[1] * ny_), 0, ny_ - 1);
  int best = -1;
  for (int c : bins_[j * nx_ + i]) {
    const Vec2 r = mesh_->reference_coords(c, x);
    if (r[0] >= -tol_ && r[1] >= -tol_ && r[0] + r[1] <= 1.0 + tol_) {
      if (best < 0 || c < best) best = c;
    }
  }
  return best;
}

Triangulation read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_mesh: cannot open " + path);
  int nv, nc, nf;
  if (!(in >> nv >> nc >> nf)) throw std::runtime_error("read_mesh: bad header");
  Triangulation m;
  m.vertices.resize(nv);
  for (int i = 0; i < nv; ++i) in >> m.vertices[i][0] >> m.vertices[i][1];
  m.cells.resize(nc);
  m.macro_parent.resize(nc);
  for (int c = 0; c < nc; ++c)
    in >> m.cells[c][0] >> m.cells[c][1] >> m.cells[c][2] >> m.macro_parent[c];
  m.boundary_facets.resize(nf);
  for (int f = 0; f < nf; ++f)
    in >> m.boundary_facets[f].v0 >> m.boundary_facets[f].v1 >> m.boundary_facets[f].marker;
  if (!in) throw std::runtime_error("read_mesh: truncated file " + path);
  return m;
}

void write_mesh(const std::string& path, const Triangulation& mesh) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_mesh: cannot open " + path);
  out.precision(17);
  out << mesh.n_vertices() << ' ' << mesh.n_cells() << ' ' << mesh.boundary_facets.size() << '\n';
  for (const auto& v : mesh.vertices) out << v[0] << ' ' << v[1] << '\n';
  for (int c = 0; c < mesh.n_cells(); ++c)
    out << mesh.cells[c][0] << ' ' << mesh.cells[c][1] << ' ' << mesh.cells[c][2] << ' '
        << mesh.macro_parent[c] << '\n';
  for (const auto& f : mesh.boundary_facets) out << f.v0 << ' ' << f.v1 << ' ' << f.marker << '\n';
}

}  // namespace nnflow
