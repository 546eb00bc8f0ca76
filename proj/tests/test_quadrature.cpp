#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nnflow/quadrature.hpp"

using namespace nnflow;

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// int_T x^i y^j over the reference triangle.
double tri_monomial(int i, int j) { return factorial(i) * factorial(j) / factorial(i + j + 2); }

}  // namespace

TEST_CASE("gauss_legendre monomial exactness") {
  for (int n = 1; n <= 8; ++n) {
    std::vector<double> pts, wts;
    gauss_legendre(n, pts, wts);
    REQUIRE(pts.size() == static_cast<size_t>(n));
    for (int q = 0; q < n; ++q) {
      CHECK(wts[q] > 0.0);
      CHECK(pts[q] > 0.0);
      CHECK(pts[q] < 1.0);
    }
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double s = 0.0;
      for (int q = 0; q < n; ++q) s += wts[q] * std::pow(pts[q], d);
      CHECK(s == doctest::Approx(1.0 / (d + 1)).epsilon(1e-13));
    }
  }
  std::vector<double> pts, wts;
  CHECK_THROWS(gauss_legendre(0, pts, wts));
}

TEST_CASE("gauss_jacobi10 integrates (1-x) x^d") {
  for (int n = 1; n <= 8; ++n) {
    std::vector<double> pts, wts;
    gauss_jacobi10(n, pts, wts);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double s = 0.0;
      for (int q = 0; q < n; ++q) s += wts[q] * std::pow(pts[q], d);
      const double exact = 1.0 / (d + 1) - 1.0 / (d + 2);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("triangle_rule monomial exactness and positivity") {
  for (int deg = 0; deg <= 9; ++deg) {
    const QuadratureRule rule = triangle_rule(deg);
    REQUIRE(rule.degree >= deg);
    double wsum = 0.0;
    for (double w : rule.weights) {
      CHECK(w > 0.0);
      wsum += w;
    }
    CHECK(wsum == doctest::Approx(0.5).epsilon(1e-14));
    for (int i = 0; i <= deg; ++i)
      for (int j = 0; i + j <= deg; ++j) {
        double s = 0.0;
        for (size_t q = 0; q < rule.points.size(); ++q)
          s += rule.weights[q] * std::pow(rule.points[q][0], i) * std::pow(rule.points[q][1], j);
        CHECK(s == doctest::Approx(tri_monomial(i, j)).epsilon(1e-12));
      }
  }
}

TEST_CASE("triangle_rule points inside the reference triangle") {
  const QuadratureRule rule = triangle_rule(6);
  for (const Vec2& p : rule.points) {
    CHECK(p[0] >= 0.0);
    CHECK(p[1] >= 0.0);
    CHECK(p[0] + p[1] <= 1.0 + 1e-14);
  }
}

TEST_CASE("interval_rule monomial exactness") {
  for (int deg = 0; deg <= 9; ++deg) {
    const QuadratureRule rule = interval_rule(deg);
    for (int d = 0; d <= deg; ++d) {
      double s = 0.0;
      for (size_t q = 0; q < rule.points.size(); ++q) s += rule.weights[q] * std::pow(rule.points[q][0], d);
      CHECK(s == doctest::Approx(1.0 / (d + 1)).epsilon(1e-13));
    }
  }
}
