#include "doctest.h"

#include "hdg_biot/basis.hpp"
#include "hdg_biot/mesh.hpp"

#include <cmath>
#include <random>

using namespace hdg;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// exact integral of x^a y^b z^c over the reference simplex: a! b! c! / (dim + a + b + c)!
double monomial_integral(int dim, int a, int b, int c) {
  return factorial(a) * factorial(b) * factorial(c) / factorial(dim + a + b + c);
}

double integrate(const QuadratureRule& q, int a, int b, int c) {
  double s = 0;
  for (int i = 0; i < q.size(); ++i)
    s += q.weights[i] * std::pow(q.points[i][0], a) * std::pow(q.points[i][1], b) * std::pow(q.points[i][2], c);
  return s;
}

Point random_interior(int dim, std::mt19937& gen) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Point x = Point::Zero();
  double rest = 0.9;
  for (int i = 0; i < dim; ++i) {
    x[i] = rest * u(gen) / dim;
    rest -= x[i];
  }
  return x;
}

}  // namespace

TEST_CASE("quadrature examples") {
  const QuadratureRule c = quadrature(2, 1);
  CHECK(c.size() == 1);
  CHECK(std::abs(c.weights[0] - 0.5) < 1e-15);
  CHECK(std::abs(c.points[0][0] - 1.0 / 3) < 1e-14);
  CHECK(std::abs(c.points[0][1] - 1.0 / 3) < 1e-14);
  CHECK(std::abs(integrate(quadrature(2, 4), 2, 2, 0) - 1.0 / 180) < 1e-14);
  CHECK(std::abs(integrate(quadrature(3, 2), 2, 0, 0) - 1.0 / 60) < 1e-14);
  CHECK_THROWS_AS(quadrature(2, max_quadrature_degree + 1), Error);
}

TEST_CASE("quadrature exact for every monomial up to its degree") {
  for (int dim = 1; dim <= 3; ++dim)
    for (int deg : {0, 1, 2, 5, 8, 12}) {
      const QuadratureRule q = quadrature(dim, deg);
      double wsum = 0;
      for (double w : q.weights) {
        CHECK(w > 0);
        wsum += w;
      }
      CHECK(std::abs(wsum - reference_measure(dim)) < 1e-14);
      for (int a = 0; a <= deg; ++a)
        for (int b = 0; b <= (dim >= 2 ? deg - a : 0); ++b)
          for (int c = 0; c <= (dim >= 3 ? deg - a - b : 0); ++c) {
            const double exact = monomial_integral(dim, a, b, c);
            CHECK(std::abs(integrate(q, a, b, c) - exact) <= 1e-12 * std::max(1.0, exact));
          }
    }
}

TEST_CASE("basis sizes and constants") {
  const BasisSet b0 = simplex_basis(2, 0);
  CHECK(b0.size() == 1);
  // orthonormal constant on the reference triangle (measure 1/2)
  CHECK(std::abs(b0.values(Point(0.2, 0.3, 0))[0] - std::sqrt(2.0)) < 1e-13);
  CHECK(simplex_basis(2, 2).size() == 6);
  CHECK(simplex_basis(3, 2).size() == 10);
  CHECK(simplex_basis(1, 2).size() == 3);
  CHECK(simplex_basis(0, 2).size() == 1);
}

TEST_CASE("basis is orthonormal and hierarchical") {
  for (int dim = 1; dim <= 3; ++dim)
    for (int k = 1; k <= 3; ++k) {
      const BasisSet b(dim, k);
      const QuadratureRule q = quadrature(dim, 2 * k);
      Mat gram = Mat::Zero(b.size(), b.size());
      for (int i = 0; i < q.size(); ++i) {
        const Vec v = b.values(q.points[i]);
        gram += q.weights[i] * v * v.transpose();
      }
      CHECK((gram - Mat::Identity(b.size(), b.size())).norm() < 1e-11);
      // the leading functions of P_k coincide with the P_{k-1} basis
      const BasisSet lower(dim, k - 1);
      const Point x = Point(0.1, 0.2, 0.3).head(3);
      Point y = Point::Zero();
      for (int i = 0; i < dim; ++i) y[i] = x[i];
      CHECK((b.values(y).head(lower.size()) - lower.values(y)).norm() < 1e-11);
    }
}

TEST_CASE("gradients agree with central differences") {
  std::mt19937 gen(7);
  for (int dim : {2, 3}) {
    const BasisSet b(dim, 2);
    for (int trial = 0; trial < 5; ++trial) {
      const Point x = random_interior(dim, gen);
      const Mat g = b.gradients(x);
      const double h = 1e-6;
      for (int a = 0; a < dim; ++a) {
        Point xp = x, xm = x;
        xp[a] += h;
        xm[a] -= h;
        const Vec fd = (b.values(xp) - b.values(xm)) / (2 * h);
        CHECK((fd - g.col(a)).cwiseAbs().maxCoeff() < 1e-6);
      }
    }
  }
}

TEST_CASE("trace_points") {
  // triangle facet 0 joins vertices 1 and 2; its midpoint
  const std::vector<Point> mid{Point(0.5, 0, 0)};
  const auto p = trace_points(2, 0, mid);
  CHECK((p[0] - Point(0.5, 0.5, 0)).norm() < 1e-15);
  // tetrahedron facet 1: vertices 0, 2, 3
  const std::vector<Point> corners{Point(0, 0, 0), Point(1, 0, 0), Point(0, 1, 0)};
  const auto t = trace_points(3, 1, corners);
  CHECK((t[0] - reference_vertex(3, 0)).norm() < 1e-15);
  CHECK((t[1] - reference_vertex(3, 2)).norm() < 1e-15);
  CHECK((t[2] - reference_vertex(3, 3)).norm() < 1e-15);
}

TEST_CASE("trace points agree from both sides of interior facets") {
  for (int dim : {2, 3}) {
    const Mesh m = unit_box_mesh(dim, 2);
    const QuadratureRule q = quadrature(dim - 1, 4);
    for (int f = 0; f < m.num_facets(); ++f) {
      if (m.is_boundary(f)) continue;
      const auto fv = m.facet_vertices(f);
      std::vector<std::vector<Point>> phys;
      for (const auto& nb : m.facet_cells(f)) {
        const auto cv = m.cell_vertices(nb.cell);
        std::array<int, 3> lv{};
        for (int j = 0; j < dim; ++j)
          lv[j] = static_cast<int>(std::find(cv.begin(), cv.end(), fv[j]) - cv.begin());
        const auto ref = trace_points(dim, std::span<const int>(lv.data(), dim), q.points);
        std::vector<Point> x;
        for (const Point& r : ref) x.push_back(m.affine_map(nb.cell).map(r));
        phys.push_back(x);
      }
      for (int i = 0; i < q.size(); ++i) CHECK((phys[0][i] - phys[1][i]).norm() < 1e-13);
    }
  }
}

TEST_CASE("lattice points") {
  const auto l = lattice_points(2, 2);
  CHECK(l.size() == 6);
  for (const auto& p : l) CHECK(p.barycentric[0] + p.barycentric[1] + p.barycentric[2] == 2);
  CHECK(lattice_points(1, 2).size() == 3);
}
