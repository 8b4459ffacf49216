#pragma once

// Independent pointwise evaluation of the discrete forms, used as test oracles.
// Facet points are pulled back through the affine map instead of the cached
// trace tables, and every term is evaluated at quadrature points directly.

#include "hdg_biot/basis.hpp"
#include "hdg_biot/mesh.hpp"
#include "hdg_biot/spaces.hpp"

#include <functional>

namespace oracle {

using hdg::Mat;
using hdg::Point;
using hdg::Vec;

struct CellEval {
  Vec value;  // components
  Mat grad;   // components x dim (physical)
};

inline CellEval eval_cell(const hdg::Mesh& mesh, int cell, const hdg::BasisSet& b, const Vec& coef, int comps,
                          int nb, const Point& x) {
  const int d = mesh.dim();
  const auto& map = mesh.affine_map(cell);
  const Point xi = map.pull_back(x);
  const Vec phi = b.values(xi);
  const Mat g = b.gradients(xi) * map.inverse_jacobian.topLeftCorner(d, d);
  CellEval e{Vec::Zero(comps), Mat::Zero(comps, d)};
  for (int a = 0; a < comps; ++a)
    for (int i = 0; i < nb; ++i) {
      e.value[a] += coef[a * nb + i] * phi[i];
      e.grad.row(a) += coef[a * nb + i] * g.row(i);
    }
  return e;
}

inline Vec eval_facet(const hdg::BasisSet& fb, const Vec& coef, int comps, const Point& s) {
  const int m = fb.size();
  const Vec chi = fb.values(s);
  Vec v = Vec::Zero(comps);
  for (int a = 0; a < comps; ++a) v[a] = coef.segment(a * m, m).dot(chi);
  return v;
}

inline Mat sym(const Mat& g) { return 0.5 * (g + g.transpose()); }

/// Loops over quadrature points of the cell.
inline void cell_loop(const hdg::Mesh& mesh, int cell, int degree, const std::function<void(const Point&, double)>& f) {
  const int d = mesh.dim();
  const auto q = hdg::quadrature(d, degree);
  const auto& map = mesh.affine_map(cell);
  for (int i = 0; i < q.size(); ++i) f(map.map(q.points[i]), q.weights[i] * std::abs(map.det));
}

/// Loops over quadrature points of local facet i (facet-reference coordinate s, physical x, weight, normal).
inline void facet_loop(const hdg::Mesh& mesh, int cell, int i, int degree,
                       const std::function<void(const Point&, const Point&, double, const Point&)>& f) {
  const int d = mesh.dim();
  const int facet = mesh.cell_facets(cell)[i];
  const auto q = hdg::quadrature(d - 1, degree);
  const double scale = mesh.facet_area(facet) / hdg::reference_measure(d - 1);
  const Point n = mesh.facet_normal(facet, cell);
  for (int k = 0; k < q.size(); ++k) f(q.points[k], hdg::facet_point(mesh, facet, q.points[k]), q.weights[k] * scale, n);
}

/// d_h on one cell for coefficient vectors [u | ubar] (facet-major, component-major inside a facet).
inline double dh(const hdg::Mesh& mesh, int cell, int k, double mu, double eta, const Vec& U, const Vec& V,
                 bool symmetric_terms = true) {
  const int d = mesh.dim();
  const hdg::BasisSet cb(d, k), fb(d - 1, k);
  const int n = cb.size(), m = fb.size(), dn = d * n, dm = d * m;
  double s = 0;
  cell_loop(mesh, cell, 2 * k + 2, [&](const Point& x, double w) {
    const auto u = eval_cell(mesh, cell, cb, U.head(dn), d, n, x);
    const auto v = eval_cell(mesh, cell, cb, V.head(dn), d, n, x);
    s += w * mu * (sym(u.grad).cwiseProduct(sym(v.grad))).sum();
  });
  const double h = hdg::cell_length(mesh, cell, hdg::CellLength::volume);
  for (int i = 0; i <= d; ++i)
    facet_loop(mesh, cell, i, 2 * k + 2, [&](const Point& sp, const Point& x, double w, const Point& n3) {
      const Vec nv = n3.head(d);
      const auto u = eval_cell(mesh, cell, cb, U.head(dn), d, n, x);
      const auto v = eval_cell(mesh, cell, cb, V.head(dn), d, n, x);
      const Vec ub = eval_facet(fb, U.segment(dn + i * dm, dm), d, sp);
      const Vec vb = eval_facet(fb, V.segment(dn + i * dm, dm), d, sp);
      const Vec ju = u.value - ub, jv = v.value - vb;
      s += w * eta * mu / h * ju.dot(jv);
      if (symmetric_terms) s -= w * mu * ((sym(u.grad) * nv).dot(jv) + (sym(v.grad) * nv).dot(ju));
    });
  return s;
}

/// b_h(v, q) on one cell with v = [v | vbar], q = [q | qbar]; boundary facets pair qbar with (v - vbar).n.
inline double bh(const hdg::Mesh& mesh, int cell, int k, const Vec& V, const Vec& Q) {
  const int d = mesh.dim();
  const hdg::BasisSet cb(d, k), fb(d - 1, k);
  const int n = cb.size(), m = fb.size(), dn = d * n, dm = d * m;
  const int np = hdg::polynomial_space_size(d, k - 1);
  double s = 0;
  cell_loop(mesh, cell, 2 * k + 2, [&](const Point& x, double w) {
    const auto v = eval_cell(mesh, cell, cb, V.head(dn), d, n, x);
    Vec qc = Vec::Zero(n);
    qc.head(np) = Q.head(np);
    const auto q = eval_cell(mesh, cell, cb, qc, 1, n, x);
    s -= w * q.value[0] * v.grad.trace();
  });
  for (int i = 0; i <= d; ++i) {
    const int facet = mesh.cell_facets(cell)[i];
    const bool boundary = mesh.is_boundary(facet);
    facet_loop(mesh, cell, i, 2 * k + 2, [&](const Point& sp, const Point& x, double w, const Point& n3) {
      const Vec nv = n3.head(d);
      const auto v = eval_cell(mesh, cell, cb, V.head(dn), d, n, x);
      Vec trace = v.value;
      if (boundary && V.size() > dn) trace -= eval_facet(fb, V.segment(dn + i * dm, dm), d, sp);
      const double qb = eval_facet(fb, Q.segment(np + i * m, m), 1, sp)[0];
      s += w * qb * trace.dot(nv);
    });
  }
  return s;
}

/// kappa (grad p, grad q) + r (p, q) + kappa eta / h <p - pbar, q - qbar> [- kappa <grad p.n, q - qbar> - sym].
inline double diffusion(const hdg::Mesh& mesh, int cell, int k, double kappa, double r, double eta, const Vec& P,
                        const Vec& Q, bool symmetric_terms) {
  const int d = mesh.dim();
  const hdg::BasisSet cb(d, k), fb(d - 1, k);
  const int n = cb.size(), m = fb.size();
  const int np = hdg::polynomial_space_size(d, k - 1);
  Vec pc = Vec::Zero(n), qc = Vec::Zero(n);
  pc.head(np) = P.head(np);
  qc.head(np) = Q.head(np);
  double s = 0;
  cell_loop(mesh, cell, 2 * k + 2, [&](const Point& x, double w) {
    const auto p = eval_cell(mesh, cell, cb, pc, 1, n, x);
    const auto q = eval_cell(mesh, cell, cb, qc, 1, n, x);
    s += w * (kappa * p.grad.row(0).dot(q.grad.row(0)) + r * p.value[0] * q.value[0]);
  });
  const double h = hdg::cell_length(mesh, cell, hdg::CellLength::volume);
  for (int i = 0; i <= d; ++i)
    facet_loop(mesh, cell, i, 2 * k + 2, [&](const Point& sp, const Point& x, double w, const Point& n3) {
      const Vec nn = n3.head(d);
      const auto p = eval_cell(mesh, cell, cb, pc, 1, n, x);
      const auto q = eval_cell(mesh, cell, cb, qc, 1, n, x);
      const double jp = p.value[0] - eval_facet(fb, P.segment(np + i * m, m), 1, sp)[0];
      const double jq = q.value[0] - eval_facet(fb, Q.segment(np + i * m, m), 1, sp)[0];
      s += w * kappa * eta / h * jp * jq;
      if (symmetric_terms) s -= w * kappa * (p.grad.row(0).dot(nn) * jq + q.grad.row(0).dot(nn) * jp);
    });
  return s;
}

/// L2 projection of a function onto P_deg(K) in the cell basis (components stacked).
inline Vec project_cell(const hdg::Mesh& mesh, int cell, int k, int deg, int comps,
                        const std::function<Eigen::Vector3d(const Point&)>& g) {
  const int d = mesh.dim();
  const hdg::BasisSet cb(d, k);
  const int nb = hdg::polynomial_space_size(d, deg);
  Mat M = Mat::Zero(nb, nb);
  Mat rhs = Mat::Zero(nb, comps);
  cell_loop(mesh, cell, 2 * k + 6, [&](const Point& x, double w) {
    const Vec phi = cb.values(mesh.affine_map(cell).pull_back(x)).head(nb);
    M += w * phi * phi.transpose();
    const Eigen::Vector3d gv = g(x);
    for (int a = 0; a < comps; ++a) rhs.col(a) += w * gv[a] * phi;
  });
  const Mat c = M.ldlt().solve(rhs);
  Vec out(comps * nb);
  for (int a = 0; a < comps; ++a) out.segment(a * nb, nb) = c.col(a);
  return out;
}

/// Facet L2 projection in the facet basis (orthonormal on the reference facet).
inline Vec project_facet(const hdg::Mesh& mesh, int facet, int k, int comps,
                         const std::function<Eigen::Vector3d(const Point&)>& g) {
  const int d = mesh.dim();
  const hdg::BasisSet fb(d - 1, k);
  const int m = fb.size();
  const auto q = hdg::quadrature(d - 1, 2 * k + 6);
  Vec out = Vec::Zero(comps * m);
  for (int i = 0; i < q.size(); ++i) {
    const Vec chi = fb.values(q.points[i]);
    const Eigen::Vector3d gv = g(hdg::facet_point(mesh, facet, q.points[i]));
    for (int a = 0; a < comps; ++a) out.segment(a * m, m) += q.weights[i] * gv[a] * chi;
  }
  return out;
}

}  // namespace oracle
