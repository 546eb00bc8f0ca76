#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace nnflow {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Symmetric traceless 2x2 tensor [[a, b], [b, -a]] stored by its two
// independent components. The basis E1 = [[1,0],[0,-1]], E2 = [[0,1],[1,0]]
// satisfies Ei : Ej = 2 delta_ij; the factor 2 is carried explicitly in all
// contractions rather than folded into the components.
struct SymT {
  double a = 0.0;
  double b = 0.0;

  SymT() = default;
  SymT(double a_, double b_) : a(a_), b(b_) {}

  SymT operator+(const SymT& o) const { return {a + o.a, b + o.b}; }
  SymT operator-(const SymT& o) const { return {a - o.a, b - o.b}; }
  SymT operator*(double s) const { return {a * s, b * s}; }
  SymT& operator+=(const SymT& o) { a += o.a; b += o.b; return *this; }

  Mat2 full() const {
    Mat2 m;
    m << a, b, b, -a;
    return m;
  }
  Eigen::Vector2d vec() const { return {a, b}; }
};

inline SymT operator*(double s, const SymT& t) { return t * s; }

// T1 : T2 with the full 2x2 contraction.
inline double ddot(const SymT& t, const SymT& u) { return 2.0 * (t.a * u.a + t.b * u.b); }

// |T|^2 = T : T.
inline double norm2(const SymT& t) { return 2.0 * (t.a * t.a + t.b * t.b); }

inline double tnorm(const SymT& t) { return std::sqrt(norm2(t)); }

// Deviatoric (traceless) part of a symmetric 2x2 tensor given by entries.
inline SymT deviator(double t11, double t12, double t22) {
  return {0.5 * (t11 - t22), t12};
}

}  // namespace nnflow
