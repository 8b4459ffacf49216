#include "hdg_biot/basis.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace hdg {

double reference_measure(int dim) {
  switch (dim) {
    case 0: return 1.0;
    case 1: return 1.0;
    case 2: return 0.5;
    case 3: return 1.0 / 6.0;
    default: throw Error("reference_measure: unsupported dimension " + std::to_string(dim));
  }
}

int polynomial_space_size(int dim, int k) {
  if (k < 0) return 0;
  long n = 1;
  for (int i = 1; i <= dim; ++i) n = n * (k + i) / i;
  return static_cast<int>(n);
}

void gauss_jacobi(int n, double alpha, std::vector<double>& nodes, std::vector<double>& weights) {
  // Golub-Welsch on [-1,1] with weight (1-x)^alpha, then mapped to [0,1]
  const double a = alpha, b = 0.0;
  Mat jac = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double s = 2.0 * i + a + b;
    jac(i, i) = (i == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (i + 1 < n) {
      const double m = i + 1;
      const double t = 2.0 * m + a + b;
      const double beta = 4.0 * m * (m + a) * (m + b) * (m + a + b) / (t * t * (t + 1.0) * (t - 1.0));
      jac(i, i + 1) = jac(i + 1, i) = std::sqrt(beta);
    }
  }
  const double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 2.0);
  Eigen::SelfAdjointEigenSolver<Mat> es(jac);
  nodes.resize(n);
  weights.resize(n);
  const double scale = std::pow(2.0, -a - 1.0);
  for (int i = 0; i < n; ++i) {
    nodes[i] = 0.5 * (1.0 + es.eigenvalues()[i]);
    const double v = es.eigenvectors()(0, i);
    weights[i] = mu0 * v * v * scale;
  }
}

QuadratureRule quadrature(int dim, int exactness) {
  if (dim < 0 || dim > 3) throw Error("quadrature: unsupported dimension " + std::to_string(dim));
  if (exactness < 0 || exactness > max_quadrature_degree)
    throw Error("quadrature: exactness degree " + std::to_string(exactness) + " exceeds implemented maximum " +
                std::to_string(max_quadrature_degree));
  QuadratureRule q;
  q.dim = dim;
  q.exactness = exactness;
  if (dim == 0) {
    q.points = {Point::Zero()};
    q.weights = {1.0};
    return q;
  }
  const int n = (exactness + 2) / 2;
  // collapsed direction j carries the Jacobian factor (1-t_j)^(dim-1-j)
  std::array<std::vector<double>, 3> x, w;
  for (int j = 0; j < dim; ++j) gauss_jacobi(n, dim - 1 - j, x[j], w[j]);

  if (dim == 1) {
    for (int i = 0; i < n; ++i) {
      q.points.push_back(Point(x[0][i], 0, 0));
      q.weights.push_back(w[0][i]);
    }
  } else if (dim == 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double u = x[0][i], v = x[1][j];
        q.points.push_back(Point(u, v * (1.0 - u), 0));
        q.weights.push_back(w[0][i] * w[1][j]);
      }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          const double u = x[0][i], v = x[1][j], s = x[2][l];
          q.points.push_back(Point(u, v * (1.0 - u), s * (1.0 - u) * (1.0 - v)));
          q.weights.push_back(w[0][i] * w[1][j] * w[2][l]);
        }
  }
  return q;
}

BasisSet::BasisSet(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 0 || dim > 3) throw Error("simplex_basis: unsupported dimension " + std::to_string(dim));
  if (degree < 0) throw Error("simplex_basis: negative degree");
  size_ = polynomial_space_size(dim, degree);
  for (int i = 0; i < dim; ++i) centre_[i] = 1.0 / (dim + 1);
  for (int total = 0; total <= degree; ++total) {
    if (dim == 0) {
      if (total == 0) exponents_.push_back({0, 0, 0});
      continue;
    }
    for (int a = total; a >= 0; --a) {
      if (dim == 1) {
        if (a == total) exponents_.push_back({a, 0, 0});
        continue;
      }
      for (int b = total - a; b >= 0; --b) {
        const int c = total - a - b;
        if (dim == 2 && c != 0) continue;
        exponents_.push_back({a, b, c});
      }
    }
  }

  // Gram matrix of the centred monomials under the reference measure
  const QuadratureRule q = quadrature(dim, 2 * degree);
  coeffs_ = Mat::Identity(size_, size_);
  Mat gram = Mat::Zero(size_, size_);
  Vec m(size_);
  for (int p = 0; p < q.size(); ++p) {
    m = values(q.points[p]);
    gram.noalias() += q.weights[p] * m * m.transpose();
  }
  Eigen::LLT<Mat> llt(gram);
  if (llt.info() != Eigen::Success) throw Error("simplex_basis: monomial Gram matrix is singular");
  const Mat lower = llt.matrixL();
  coeffs_ = lower.triangularView<Eigen::Lower>().solve(Mat::Identity(size_, size_));
}

void BasisSet::values(const Point& xi, std::span<double> out) const {
  const Point y = xi - centre_;
  std::array<std::array<double, 16>, 3> pw{};
  for (int a = 0; a < 3; ++a) {
    pw[a][0] = 1.0;
    for (int e = 1; e <= degree_ && e < 16; ++e) pw[a][e] = pw[a][e - 1] * y[a];
  }
  double mono[128];
  for (int j = 0; j < size_; ++j) {
    const auto& ex = exponents_[j];
    mono[j] = pw[0][ex[0]] * pw[1][ex[1]] * pw[2][ex[2]];
  }
  for (int i = 0; i < size_; ++i) {
    double s = 0.0;
    for (int j = 0; j <= i; ++j) s += coeffs_(i, j) * mono[j];
    out[i] = s;
  }
}

Vec BasisSet::values(const Point& xi) const {
  Vec v(size_);
  values(xi, std::span<double>(v.data(), size_));
  return v;
}

Mat BasisSet::gradients(const Point& xi) const {
  const Point y = xi - centre_;
  std::array<std::array<double, 16>, 3> pw{};
  for (int a = 0; a < 3; ++a) {
    pw[a][0] = 1.0;
    for (int e = 1; e <= degree_ && e < 16; ++e) pw[a][e] = pw[a][e - 1] * y[a];
  }
  Mat mono = Mat::Zero(size_, std::max(dim_, 1));
  for (int j = 0; j < size_; ++j) {
    const auto& ex = exponents_[j];
    for (int a = 0; a < dim_; ++a) {
      if (ex[a] == 0) continue;
      double g = ex[a];
      for (int b = 0; b < 3; ++b) g *= pw[b][b == a ? ex[b] - 1 : ex[b]];
      mono(j, a) = g;
    }
  }
  Mat out = coeffs_.triangularView<Eigen::Lower>() * mono;
  return out.leftCols(dim_);
}

Point reference_vertex(int dim, int i) {
  if (i < 0 || i > dim) throw Error("reference_vertex: index out of range");
  Point v = Point::Zero();
  if (i > 0) v[i - 1] = 1.0;
  return v;
}

std::vector<Point> trace_points(int cell_dim, std::span<const int> cell_vertices, std::span<const Point> facet_points) {
  if (static_cast<int>(cell_vertices.size()) != cell_dim) throw Error("trace_points: facet needs cell_dim vertices");
  std::vector<Point> out;
  out.reserve(facet_points.size());
  for (const Point& s : facet_points) {
    double first = 1.0;
    for (int j = 0; j < cell_dim - 1; ++j) first -= s[j];
    Point x = first * reference_vertex(cell_dim, cell_vertices[0]);
    for (int j = 1; j < cell_dim; ++j) x += s[j - 1] * reference_vertex(cell_dim, cell_vertices[j]);
    out.push_back(x);
  }
  return out;
}

std::vector<Point> trace_points(int cell_dim, int local_facet, std::span<const Point> facet_points) {
  if (local_facet < 0 || local_facet > cell_dim) throw Error("trace_points: invalid local facet");
  std::array<int, 3> verts{};
  int j = 0;
  for (int i = 0; i <= cell_dim; ++i)
    if (i != local_facet) verts[j++] = i;
  return trace_points(cell_dim, std::span<const int>(verts.data(), cell_dim), facet_points);
}

std::vector<LatticePoint> lattice_points(int dim, int k) {
  std::vector<LatticePoint> out;
  if (k == 0) {
    LatticePoint p;
    p.xi = Point::Zero();
    for (int i = 0; i < dim; ++i) p.xi[i] = 1.0 / (dim + 1);
    out.push_back(p);
    return out;
  }
  std::array<int, 3> a{0, 0, 0};
  for (a[2] = 0; a[2] <= (dim >= 3 ? k : 0); ++a[2])
    for (a[1] = 0; a[1] <= (dim >= 2 ? k - a[2] : 0); ++a[1])
      for (a[0] = 0; a[0] <= (dim >= 1 ? k - a[1] - a[2] : 0); ++a[0]) {
        LatticePoint p;
        p.xi = Point::Zero();
        int sum = 0;
        for (int i = 0; i < dim; ++i) {
          p.xi[i] = static_cast<double>(a[i]) / k;
          p.barycentric[i + 1] = a[i];
          sum += a[i];
        }
        p.barycentric[0] = k - sum;
        out.push_back(p);
      }
  return out;
}

}  // namespace hdg
