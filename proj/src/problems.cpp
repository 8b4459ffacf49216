#include "hdg_biot/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hdg {

namespace {

using V3 = Eigen::Vector3d;
constexpr double pi = std::numbers::pi;

// Builds f and g from u, p and the closed forms of lap u, grad div u, div u, grad p and lap p:
// div eps(u) = (lap u + grad div u) / 2, pT = alpha p - lambda div u, z = -kappa grad p.
struct Closed {
  FieldFunction u, lap_u, grad_div_u;
  std::function<double(const Point&)> p, div_u, lap_p;
  FieldFunction grad_p;
};

ExactSolution assemble_exact(int dim, const ModelParams& m, Closed c) {
  ExactSolution e;
  e.dim = dim;
  e.u = c.u;
  e.p = [c](const Point& x) { return V3(c.p(x), 0, 0); };
  e.pT = [c, m](const Point& x) { return V3(m.alpha * c.p(x) - m.lambda * c.div_u(x), 0, 0); };
  e.z = [c, m](const Point& x) { return V3(-m.kappa * c.grad_p(x)); };
  e.f = [c, m](const Point& x) {
    const V3 div_eps = 0.5 * (c.lap_u(x) + c.grad_div_u(x));
    return V3(-m.mu * div_eps + m.alpha * c.grad_p(x) - m.lambda * c.grad_div_u(x));
  };
  // alpha/lambda (alpha p - pT) = alpha div u and div z = -kappa lap p
  e.g = [c, m](const Point& x) { return V3(m.c0 * c.p(x) + m.alpha * c.div_u(x) - m.kappa * c.lap_p(x), 0, 0); };
  return e;
}

double max_diameter(const Mesh& mesh) {
  double h = 0;
  for (int c = 0; c < mesh.num_cells(); ++c) h = std::max(h, mesh.cell_diameter(c));
  return h;
}

SpMat block_diagonal(const std::array<SpMat, 3>& blocks) {
  std::vector<Eigen::Triplet<double>> t;
  int off = 0;
  for (const SpMat& b : blocks) {
    for (int r = 0; r < b.outerSize(); ++r)
      for (SpMat::InnerIterator it(b, r); it; ++it) t.emplace_back(off + r, off + it.col(), it.value());
    off += static_cast<int>(b.rows());
  }
  SpMat m(off, off);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

ExactSolution manufactured_solution(const ModelParams& params) {
  Closed c;
  if (params.dim == 2) {
    c.u = [](const Point& x) { return V3(std::sin(pi * x[0]) * std::sin(pi * x[1]), std::sin(pi * x[0]) * std::cos(pi * x[1]), 0); };
    c.div_u = [](const Point& x) { return pi * std::sin(pi * x[1]) * (std::cos(pi * x[0]) - std::sin(pi * x[0])); };
    c.grad_div_u = [](const Point& x) {
      const double sx = std::sin(pi * x[0]), cx = std::cos(pi * x[0]), sy = std::sin(pi * x[1]), cy = std::cos(pi * x[1]);
      return V3(-pi * pi * sy * (sx + cx), pi * pi * cy * (cx - sx), 0);
    };
    c.p = [](const Point& x) { return std::sin(pi * (x[0] - x[1])); };
    c.grad_p = [](const Point& x) {
      const double g = pi * std::cos(pi * (x[0] - x[1]));
      return V3(g, -g, 0);
    };
  } else {
    c.u = [](const Point& x) {
      const double sx = std::sin(pi * x[0]), sy = std::sin(pi * x[1]), cy = std::cos(pi * x[1]), sz = std::sin(pi * x[2]),
                   cz = std::cos(pi * x[2]);
      return V3(sx * sy * sz, sx * cy * sz, sx * cy * cz);
    };
    c.div_u = [](const Point& x) {
      const double sx = std::sin(pi * x[0]), cx = std::cos(pi * x[0]), sy = std::sin(pi * x[1]), cy = std::cos(pi * x[1]),
                   sz = std::sin(pi * x[2]);
      return pi * sz * (cx * sy - sx * sy - sx * cy);
    };
    c.grad_div_u = [](const Point& x) -> V3 {
      const double sx = std::sin(pi * x[0]), cx = std::cos(pi * x[0]), sy = std::sin(pi * x[1]), cy = std::cos(pi * x[1]),
                   sz = std::sin(pi * x[2]), cz = std::cos(pi * x[2]);
      return pi * pi * V3(-sz * (sx * sy + cx * sy + cx * cy), sz * (cx * cy - sx * cy + sx * sy), cz * (cx * sy - sx * sy - sx * cy));
    };
    c.p = [](const Point& x) { return std::sin(pi * (x[0] - x[1] - x[2])); };
    c.grad_p = [](const Point& x) {
      const double g = pi * std::cos(pi * (x[0] - x[1] - x[2]));
      return V3(g, -g, -g);
    };
  }
  // every component is a product of sines and cosines of pi x_i
  const double d = params.dim;
  const FieldFunction u = c.u;
  const auto p = c.p;
  c.lap_u = [u, d](const Point& x) { return V3(-d * pi * pi * u(x)); };
  c.lap_p = [p, d](const Point& x) { return -d * pi * pi * p(x); };
  return assemble_exact(params.dim, params, c);
}

ExactSolution polynomial_solution(const ModelParams& params) {
  Closed c;
  if (params.dim == 2) {
    c.u = [](const Point& x) { return V3(x[0] * x[0], x[0] * x[1], 0); };
    c.div_u = [](const Point& x) { return 3 * x[0]; };
    c.lap_u = [](const Point&) { return V3(2, 0, 0); };
    c.grad_div_u = [](const Point&) { return V3(3, 0, 0); };
    c.p = [](const Point& x) { return 1 + x[0] - 2 * x[1]; };
    c.grad_p = [](const Point&) { return V3(1, -2, 0); };
  } else {
    c.u = [](const Point& x) { return V3(x[0] * x[0], x[0] * x[1], x[1] * x[2]); };
    c.div_u = [](const Point& x) { return 3 * x[0] + x[1]; };
    c.lap_u = [](const Point&) { return V3(2, 0, 0); };
    c.grad_div_u = [](const Point&) { return V3(3, 1, 0); };
    c.p = [](const Point& x) { return 1 + x[0] - 2 * x[1] + x[2]; };
    c.grad_p = [](const Point&) { return V3(1, -2, 1); };
  }
  c.lap_p = [](const Point&) { return 0.0; };
  return assemble_exact(params.dim, params, c);
}

double default_tolerance(int dim) { return dim == 2 ? 1e-8 : 1e-6; }

CellFields split_cell_fields(const CondensedSystem& sys, const Vec& cells) {
  if (cells.size() != sys.num_cell_unknowns()) throw Error("split_cell_fields: size mismatch");
  auto seg = [&](int i) { return Vec(cells.segment(sys.cell_offsets[i], sys.cell_offsets[i + 1] - sys.cell_offsets[i])); };
  return {seg(0), seg(1), seg(2), seg(3)};
}

DiscreteSolution solve_biot(const Mesh& mesh, const Spaces& spaces, const ModelParams& params, const Loads& loads,
                            const ReducedPreconditioner& pc, const SolverOptions& options) {
  const CondensedSystem cs = condense_biot(mesh, spaces, params, loads, {options.exec, true});
  if (pc.size() != cs.size()) throw Error("solve_biot: preconditioner does not match the trace system");
  const double tol = options.tol > 0 ? options.tol : default_tolerance(mesh.dim());
  const int max_iter = options.max_iter > 0 ? options.max_iter : std::max(10, 10 * cs.size());
  const LinearOperator A = [&](const Vec& x, Vec& y) { spmv(cs.matrix, x, y, options.exec); };
  const LinearOperator P = [&](const Vec& r, Vec& z) { pc.apply(r, z); };
  DiscreteSolution sol;
  sol.trace_dofs = cs.size();
  sol.report = minres(A, P, cs.rhs, sol.traces, tol, max_iter);
  sol.cells = split_cell_fields(cs, back_substitute(cs, sol.traces, options.exec));
  return sol;
}

DiscreteSolution solve_biot(const Mesh& mesh, const Spaces& spaces, const ModelParams& params, const Loads& loads,
                            const SolverOptions& options) {
  const ReducedPreconditioner pc = build_reduced_preconditioner(mesh, spaces, params, options.pc, options.exec);
  return solve_biot(mesh, spaces, params, loads, pc, options);
}

ErrorNorms compute_errors(const Mesh& mesh, const Spaces& spaces, const CellFields& fields, const FieldFunction& u,
                          const FieldFunction& p) {
  const int d = mesh.dim();
  const QuadratureRule q = quadrature(d, 2 * spaces.k + 4);
  const BasisSet& b = spaces.cell_basis;
  const int n = b.size(), np = spaces.cell_size(spaces.k - 1);
  Mat phi(q.size(), n);
  for (int i = 0; i < q.size(); ++i) phi.row(i) = b.values(q.points[i]).transpose();
  const DofMap& um = spaces[Field::u];
  const DofMap& pm = spaces[Field::p];
  const int ncells = mesh.num_cells();
  // per-cell contributions summed in cell order, so the result does not depend on the thread count
  std::vector<double> eu(ncells, 0.0), ep(ncells, 0.0);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < ncells; ++c) {
    const AffineMap& map = mesh.affine_map(c);
    const auto ud = um.dofs(c);
    const auto pd = pm.dofs(c);
    for (int i = 0; i < q.size(); ++i) {
      const Point x = map.map(q.points[i]);
      const double w = q.weights[i] * std::abs(map.det);
      const V3 ue = u ? u(x) : V3::Zero();
      for (int a = 0; a < d; ++a) {
        double uh = 0;
        for (int j = 0; j < n; ++j) uh += fields.u[ud[a * n + j]] * phi(i, j);
        eu[c] += w * (ue[a] - uh) * (ue[a] - uh);
      }
      double ph = 0;
      for (int j = 0; j < np; ++j) ph += fields.p[pd[j]] * phi(i, j);
      const double pe = p ? p(x)[0] : 0.0;
      ep[c] += w * (pe - ph) * (pe - ph);
    }
  }
  double su = 0, sp = 0;
  for (int c = 0; c < ncells; ++c) {
    su += eu[c];
    sp += ep[c];
  }
  return {std::sqrt(su), std::sqrt(sp)};
}

Spaces manufactured_spaces(const Mesh& mesh, int k, TraceVariant variant, const ExactSolution& exact) {
  Spaces sp = build_spaces(mesh, k, variant);
  set_dirichlet(mesh, sp, Field::ubar, -1, exact.u);
  set_dirichlet(mesh, sp, Field::pbar, -1, exact.p);
  return sp;
}

ManufacturedResult run_manufactured(const Mesh& mesh, const ModelParams& params, const ExactSolution& exact,
                                    const SolverOptions& options) {
  params.validate();
  if (params.dim != mesh.dim() || exact.dim != mesh.dim()) throw Error("run_manufactured: dimension mismatch");
  const Spaces sp = manufactured_spaces(mesh, params.k, options.variant, exact);
  Loads loads;
  loads.body_force = exact.f;
  loads.source = exact.g;
  const DiscreteSolution sol = solve_biot(mesh, sp, params, loads, options);
  ManufacturedResult r;
  r.cells = mesh.num_cells();
  r.h = max_diameter(mesh);
  r.trace_dofs = sol.trace_dofs;
  r.report = sol.report;
  r.errors = compute_errors(mesh, sp, sol.cells, exact.u, exact.p);
  r.fields = sol.cells;
  return r;
}

ManufacturedResult run_manufactured(int dim, int level, const ModelParams& params, const SolverOptions& options) {
  if (level < 1) throw Error("run_manufactured: mesh level must be at least 1");
  return run_manufactured(unit_box_mesh(dim, level), params, manufactured_solution(params), options);
}

std::vector<SweepPoint> parameter_grid(double mu) {
  std::vector<SweepPoint> g;
  for (double kappa : {1.0, 1e-4, 1e-8})
    for (double alpha : {1.0, 1e-4})
      for (double c0 : {1.0, 1e-4, 0.0})
        for (double lambda : {1.0, 1e4, 1e8}) g.push_back({kappa, alpha, c0, lambda, mu});
  return g;
}

std::vector<SweepRow> run_param_sweep(const Mesh& mesh, const std::vector<SweepPoint>& grid, const SolverOptions& options,
                                      int k) {
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (const SweepPoint& pt : grid) {
    const ModelParams prm = ModelParams::with_defaults(mesh.dim(), k, pt.mu, pt.lambda, pt.alpha, pt.c0, pt.kappa);
    const ManufacturedResult r = run_manufactured(mesh, prm, manufactured_solution(prm), options);
    rows.push_back({pt, r.report, r.errors});
  }
  return rows;
}

ModelParams FootingCase::params() const {
  const LameParameters l = lame_from_young(young, poisson);
  ModelParams m = ModelParams::with_defaults(dim, k, 2 * l.shear, l.lambda, alpha, c0, tau * permeability);
  if (eta > 0) m.eta = eta;
  return m;
}

int FootingCase::num_steps() const {
  if (!(tau > 0) || !(final_time > 0)) throw Error("footing: time step and final time must be positive");
  const int n = std::max(1, static_cast<int>(std::ceil(final_time / tau - 1e-9)));
  return max_steps > 0 ? std::min(n, max_steps) : n;
}

FootingCase footing_2d(double tau, int ny) {
  FootingCase fc;
  fc.dim = 2;
  fc.box.lower = Point(-50, 0, 0);
  fc.box.upper = Point(50, 75, 0);
  // nx a multiple of 3 so that |x| = 50/3 lies on grid lines
  const int nx = std::max(3, 3 * static_cast<int>(std::lround(ny * 100.0 / 75.0 / 3.0)));
  fc.cells = {nx, ny, 1};
  fc.load_halfwidth = 50.0 / 3.0;
  fc.sigma0 = 1e4;
  fc.final_time = 50;
  fc.tau = tau;
  fc.young = 3e4;
  fc.poisson = 0.4995;
  fc.permeability = 1e-4;
  fc.c0 = 1e-3;
  fc.alpha = 0.1;
  return fc;
}

FootingCase footing_3d(double tau, int n) {
  FootingCase fc;
  fc.dim = 3;
  fc.box.lower = Point(-32, -32, 0);
  fc.box.upper = Point(32, 32, 64);
  const int m = std::max(4, 4 * ((n + 3) / 4));  // |x|, |y| = 16 on grid planes
  fc.cells = {m, m, m};
  fc.load_halfwidth = 16;
  fc.sigma0 = 0.1;
  fc.final_time = 1;
  fc.tau = tau;
  fc.young = 3e4;
  fc.poisson = 0.45;
  fc.permeability = 1e-7;
  fc.c0 = 0.5;
  fc.alpha = 0.5;
  return fc;
}

namespace {

bool under_load(const FootingCase& fc, const Point& x) {
  bool in = std::abs(x[0]) <= fc.load_halfwidth;
  if (fc.dim == 3) in = in && std::abs(x[1]) <= fc.load_halfwidth;
  return in;
}

}  // namespace

Mesh footing_mesh(const FootingCase& fc) {
  Mesh mesh = box_mesh(fc.dim, fc.cells, fc.box);
  const int top = fc.dim - 1;
  const double tol = 1e-9 * (fc.box.upper - fc.box.lower).norm();
  for (int f = 0; f < mesh.num_facets(); ++f) {
    if (!mesh.is_boundary(f)) continue;
    const Point c = mesh.facet_centroid(f);
    int tag = footing_clamped;
    if (std::abs(c[top] - fc.box.upper[top]) < tol) tag = under_load(fc, c) ? footing_load : footing_free;
    mesh.set_boundary_marker(f, tag);
  }
  return mesh;
}

FootingResult run_footing(const FootingCase& fc, const SolverOptions& options) {
  const ModelParams prm = fc.params();
  prm.validate();
  const Mesh mesh = footing_mesh(fc);
  const Spaces sp = build_spaces(mesh, fc.k, options.variant, {footing_load, footing_free});
  const ReducedPreconditioner pc = build_reduced_preconditioner(mesh, sp, prm, options.pc, options.exec);
  const FieldFunction traction = [fc](const Point& x) {
    V3 t = V3::Zero();
    if (under_load(fc, x)) t[fc.dim - 1] = -fc.sigma0;
    return t;
  };

  FootingResult res;
  Vec p_prev, pT_prev;
  const int steps = fc.num_steps();
  long total = 0;
  for (int s = 0; s < steps; ++s) {
    Loads loads = assemble_timestep_rhs(prm, {}, p_prev, pT_prev, fc.tau);
    loads.traction = traction;
    const DiscreteSolution sol = solve_biot(mesh, sp, prm, loads, pc, options);
    res.steps.push_back(sol.report);
    res.converged = res.converged && sol.report.converged;
    total += sol.report.iterations;
    res.max_iterations = std::max(res.max_iterations, sol.report.iterations);
    p_prev = sol.cells.p;
    pT_prev = sol.cells.pT;
    res.fields = sol.cells;
    res.time = std::min(fc.final_time, (s + 1) * fc.tau);
  }
  res.mean_iterations = static_cast<double>(total) / steps;
  return res;
}

SpectrumReport preconditioned_spectrum(const Mesh& mesh, const ModelParams& params, const SolverOptions& options,
                                       int dense_limit) {
  params.validate();
  const Spaces sp = build_spaces(mesh, params.k, options.variant);
  const CondensedSystem cs = condense_biot(mesh, sp, params, Loads{}, {options.exec, false});
  const SpMat P = block_diagonal(reduced_preconditioner_blocks(mesh, sp, params, options.pc, options.exec));
  return generalized_extreme_eigs(cs.matrix, P, dense_limit);
}

std::vector<SpectrumRow> run_spectrum(const Mesh& mesh, const std::vector<SweepPoint>& grid, const SolverOptions& options,
                                      int k) {
  std::vector<SpectrumRow> rows;
  for (const SweepPoint& pt : grid) {
    const ModelParams prm = ModelParams::with_defaults(mesh.dim(), k, pt.mu, pt.lambda, pt.alpha, pt.c0, pt.kappa);
    SpectrumRow row{pt, preconditioned_spectrum(mesh, prm, options), 0.0};
    row.deflated_condition = row.spectrum.condition();
    if (row.spectrum.dense && row.spectrum.eigenvalues.size() > 2) {
      std::vector<double> a(row.spectrum.eigenvalues.size());
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(row.spectrum.eigenvalues[i]);
      std::sort(a.begin(), a.end());
      row.deflated_condition = a.back() / a[1];
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<VtkPointField> vertex_fields(const Mesh& mesh, const Spaces& spaces, const CellFields& fields) {
  const int d = mesh.dim(), nv = d + 1;
  const BasisSet& b = spaces.cell_basis;
  const int n = b.size(), np = spaces.cell_size(spaces.k - 1);
  VtkPointField u{"u", 3, {}}, p{"p", 1, {}}, pT{"pT", 1, {}};
  const auto& um = spaces[Field::u];
  const auto& pm = spaces[Field::p];
  const auto& tm = spaces[Field::pT];
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto verts = mesh.cell_vertices(c);
    for (int j = 0; j < nv; ++j) {
      const Vec phi = b.values(mesh.affine_map(c).pull_back(mesh.vertex(verts[j])));
      const auto ud = um.dofs(c);
      for (int a = 0; a < 3; ++a) {
        double v = 0;
        if (a < d)
          for (int i = 0; i < n; ++i) v += fields.u[ud[a * n + i]] * phi[i];
        u.values.push_back(v);
      }
      double pv = 0, tv = 0;
      for (int i = 0; i < np; ++i) {
        pv += fields.p[pm.dofs(c)[i]] * phi[i];
        tv += fields.pT[tm.dofs(c)[i]] * phi[i];
      }
      p.values.push_back(pv);
      pT.values.push_back(tv);
    }
  }
  return {u, p, pT};
}

}  // namespace hdg
