#pragma once

#include "hdg_biot/types.hpp"

#include <array>
#include <span>
#include <vector>

namespace hdg {

/// Quadrature on the reference simplex with vertices 0, e_1, ..., e_dim.
struct QuadratureRule {
  int dim = 0;
  int exactness = 0;
  std::vector<Point> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Highest exactness degree `quadrature` accepts.
inline constexpr int max_quadrature_degree = 40;

/// Collapsed-coordinate Gauss-Jacobi rule exact for all polynomials of
/// total degree <= exactness. Weights are positive and sum to 1/dim!.
QuadratureRule quadrature(int dim, int exactness);

/// Gauss-Jacobi nodes and weights on [0,1] for the weight (1-t)^alpha.
void gauss_jacobi(int n, double alpha, std::vector<double>& nodes, std::vector<double>& weights);

/// Measure of the reference simplex (1, 1/2, 1/6).
double reference_measure(int dim);

/// Number of polynomials of total degree <= k in dim variables.
int polynomial_space_size(int dim, int k);

/// Orthonormal basis of P_k on the reference simplex.
///
/// Built from graded monomials (centred at the barycentre) by a Cholesky
/// factorisation of their Gram matrix, so the first
/// polynomial_space_size(dim, k-1) functions span P_{k-1}.
class BasisSet {
 public:
  BasisSet() = default;
  BasisSet(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int size() const { return size_; }

  /// Writes size() values at reference point xi into out.
  void values(const Point& xi, std::span<double> out) const;
  Vec values(const Point& xi) const;
  /// size() x dim reference gradients.
  Mat gradients(const Point& xi) const;

 private:
  int dim_ = 0;
  int degree_ = 0;
  int size_ = 0;
  Point centre_ = Point::Zero();
  std::vector<std::array<int, 3>> exponents_;
  Mat coeffs_;  // row i: monomial coefficients of basis function i
};

inline BasisSet simplex_basis(int dim, int k) { return BasisSet(dim, k); }

/// Reference coordinates of vertex i of the reference simplex.
Point reference_vertex(int dim, int i);

/// Maps points of the reference (cell_dim-1)-simplex onto local facet
/// `local_facet` of the reference cell. Facet vertex j corresponds to the
/// j-th cell vertex (in ascending order) other than local_facet.
std::vector<Point> trace_points(int cell_dim, int local_facet, std::span<const Point> facet_points);

/// Same mapping with an explicit vertex correspondence: facet vertex j is
/// cell vertex cell_vertices[j].
std::vector<Point> trace_points(int cell_dim, std::span<const int> cell_vertices, std::span<const Point> facet_points);

/// Equispaced lattice of degree k on the reference simplex, with the
/// barycentric multi-index (a_0..a_dim, sum k) of every point.
struct LatticePoint {
  Point xi;
  std::array<int, 4> barycentric{0, 0, 0, 0};
};
std::vector<LatticePoint> lattice_points(int dim, int k);

}  // namespace hdg
