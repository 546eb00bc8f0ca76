#include "nnflow/supermesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nnflow {

namespace {

double tri_area(const std::array<Vec2, 3>& t) {
  return 0.5 * ((t[1][0] - t[0][0]) * (t[2][1] - t[0][1]) - (t[1][1] - t[0][1]) * (t[2][0] - t[0][0]));
}

double poly_area(const std::vector<Vec2>& p) {
  double a = 0.0;
  const int n = static_cast<int>(p.size());
  for (int i = 0; i < n; ++i) {
    const Vec2& u = p[i];
    const Vec2& v = p[(i + 1) % n];
    a += u[0] * v[1] - u[1] * v[0];
  }
  return 0.5 * a;
}

// Clip polygon against the half-plane left of a->b.
void clip_halfplane(std::vector<Vec2>& poly, const Vec2& a, const Vec2& b, std::vector<Vec2>& out) {
  out.clear();
  const int n = static_cast<int>(poly.size());
  if (n == 0) return;
  const Vec2 d = b - a;
  const auto side = [&](const Vec2& p) { return d[0] * (p[1] - a[1]) - d[1] * (p[0] - a[0]); };
  for (int i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    const double sp = side(p), sq = side(q);
    if (sp >= 0.0) out.push_back(p);
    if ((sp > 0.0 && sq < 0.0) || (sp < 0.0 && sq > 0.0)) {
      const double t = sp / (sp - sq);
      out.push_back(p + t * (q - p));
    }
  }
}

}  // namespace

std::vector<Vec2> triangle_intersection(const std::array<Vec2, 3>& ta, const std::array<Vec2, 3>& tb) {
  std::array<Vec2, 3> a = ta, b = tb;
  if (tri_area(a) < 0.0) std::swap(a[1], a[2]);
  if (tri_area(b) < 0.0) std::swap(b[1], b[2]);
  std::vector<Vec2> poly(a.begin(), a.end()), tmp;
  for (int e = 0; e < 3; ++e) {
    clip_halfplane(poly, b[e], b[(e + 1) % 3], tmp);
    poly.swap(tmp);
    if (poly.empty()) return {};
  }
  // Merge nearly coincident consecutive vertices.
  const double scale = std::sqrt(std::max(std::abs(tri_area(a)), std::abs(tri_area(b))));
  std::vector<Vec2> clean;
  for (const auto& p : poly) {
    if (clean.empty() || (p - clean.back()).norm() > 1e-13 * scale) clean.push_back(p);
  }
  while (clean.size() > 1 && (clean.front() - clean.back()).norm() <= 1e-13 * scale) clean.pop_back();
  if (clean.size() < 3) return {};
  const double amax = std::max(std::abs(tri_area(a)), std::abs(tri_area(b)));
  if (poly_area(clean) < 1e-14 * amax) return {};
  return clean;
}

Supermesh build_supermesh(const Triangulation& coarse, const Triangulation& fine) {
  Supermesh sm;
  // Bin fine cells by bbox on a uniform grid.
  Vec2 lo = fine.vertices[0], hi = fine.vertices[0];
  for (const auto& v : fine.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const Vec2 span = (hi - lo).cwiseMax(Vec2(1e-300, 1e-300));
  const int ng = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(fine.n_cells()))));
  std::vector<std::vector<int>> bins(ng * ng);
  const auto bbox = [&](const Triangulation& m, int c, Vec2& clo, Vec2& chi) {
    clo = chi = m.vertices[m.cells[c][0]];
    for (int k = 1; k < 3; ++k) {
      clo = clo.cwiseMin(m.vertices[m.cells[c][k]]);
      chi = chi.cwiseMax(m.vertices[m.cells[c][k]]);
    }
  };
  const auto range = [&](const Vec2& clo, const Vec2& chi, int& i0, int& i1, int& j0, int& j1) {
    i0 = std::clamp(static_cast<int>((clo[0] - lo[0]) / span[0] * ng), 0, ng - 1);
    i1 = std::clamp(static_cast<int>((chi[0] - lo[0]) / span[0] * ng), 0, ng - 1);
    j0 = std::clamp(static_cast<int>((clo[1] - lo[1]) / span[1] * ng), 0, ng - 1);
    j1 = std::clamp(static_cast<int>((chi[1] - lo[1]) / span[1] * ng), 0, ng - 1);
  };
  for (int c = 0; c < fine.n_cells(); ++c) {
    Vec2 clo, chi;
    int i0, i1, j0, j1;
    bbox(fine, c, clo, chi);
    range(clo, chi, i0, i1, j0, j1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) bins[j * ng + i].push_back(c);
  }

  double max_area = 0.0;
  for (int c = 0; c < coarse.n_cells(); ++c) max_area = std::max(max_area, coarse.cell_area(c));
  for (int c = 0; c < fine.n_cells(); ++c) max_area = std::max(max_area, fine.cell_area(c));

  std::vector<int> cand;
  for (int cc = 0; cc < coarse.n_cells(); ++cc) {
    std::array<Vec2, 3> tc{coarse.vertices[coarse.cells[cc][0]], coarse.vertices[coarse.cells[cc][1]],
                           coarse.vertices[coarse.cells[cc][2]]};
    Vec2 clo, chi;
    int i0, i1, j0, j1;
    bbox(coarse, cc, clo, chi);
    range(clo, chi, i0, i1, j0, j1);
    cand.clear();
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) cand.insert(cand.end(), bins[j * ng + i].begin(), bins[j * ng + i].end());
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    for (int fc : cand) {
      std::array<Vec2, 3> tf{fine.vertices[fine.cells[fc][0]], fine.vertices[fine.cells[fc][1]],
                             fine.vertices[fine.cells[fc][2]]};
      const auto poly = triangle_intersection(tc, tf);
      if (poly.size() < 3) continue;
      if (poly_area(poly) < 1e-14 * max_area) continue;
      for (size_t k = 1; k + 1 < poly.size(); ++k) {
        Supermesh::Tri tri;
        tri.v = {poly[0], poly[k], poly[k + 1]};
        tri.parent_coarse = cc;
        tri.parent_fine = fc;
        tri.area = tri_area(tri.v);
        if (tri.area <= 0.0) continue;
        sm.tris.push_back(tri);
      }
    }
  }
  double total = 0.0, comp = 0.0;
  for (const auto& t : sm.tris) {  // Kahan summation
    const double y = t.area - comp;
    const double s = total + y;
    comp = (s - total) - y;
    total = s;
  }
  sm.total_area = total;
  const double domain = coarse.total_area();
  if (std::abs(total - domain) > 1e-10 * domain)
    throw std::runtime_error("build_supermesh: area conservation failure");
  return sm;
}

}  // namespace nnflow
