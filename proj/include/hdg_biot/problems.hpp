#pragma once

#include "hdg_biot/condense.hpp"
#include "hdg_biot/mesh_io.hpp"

#include <vector>

namespace hdg {

/// Closed-form fields of a stationary problem together with the data that
/// produces them: f = -div(mu eps(u)) + grad pT, g = c0 p + alpha/lambda (alpha p - pT) + div z.
struct ExactSolution {
  int dim = 2;
  FieldFunction u, p, pT, z;
  FieldFunction f, g;
};

/// Sine/cosine displacement and pressure on the unit square or cube.
ExactSolution manufactured_solution(const ModelParams& params);
/// Quadratic displacement and linear pressure; lies in the discrete spaces for k >= 2.
ExactSolution polynomial_solution(const ModelParams& params);

struct SolverOptions {
  TraceVariant variant = TraceVariant::hdg;
  PcVariant pc = PcVariant::Phat;
  double tol = 0.0;   // 0: 1e-8 in 2D, 1e-6 in 3D
  int max_iter = 0;   // 0: 10 x number of trace unknowns
  Execution exec = Execution::parallel;
};

double default_tolerance(int dim);

/// Cell unknowns of each cell field in its dof-map layout.
struct CellFields {
  Vec u, pT, z, p;
};

CellFields split_cell_fields(const CondensedSystem& sys, const Vec& cells);

struct DiscreteSolution {
  Vec traces;  // [ubar | pTbar | pbar], free dofs only
  CellFields cells;
  SolveReport report;
  int trace_dofs = 0;
};

/// Condenses, runs preconditioned MINRES on the trace system and recovers the cell unknowns.
DiscreteSolution solve_biot(const Mesh& mesh, const Spaces& spaces, const ModelParams& params, const Loads& loads,
                            const ReducedPreconditioner& pc, const SolverOptions& options);
DiscreteSolution solve_biot(const Mesh& mesh, const Spaces& spaces, const ModelParams& params, const Loads& loads,
                            const SolverOptions& options);

struct ErrorNorms {
  double u = 0.0;  // L2 norm of u - u_h
  double p = 0.0;  // L2 norm of p - p_h
};

ErrorNorms compute_errors(const Mesh& mesh, const Spaces& spaces, const CellFields& fields, const FieldFunction& u,
                          const FieldFunction& p);

/// Spaces with displacement and pressure traces prescribed from the exact solution on the whole boundary.
Spaces manufactured_spaces(const Mesh& mesh, int k, TraceVariant variant, const ExactSolution& exact);

struct ManufacturedResult {
  int cells = 0;
  double h = 0.0;  // largest cell diameter
  int trace_dofs = 0;
  SolveReport report;
  ErrorNorms errors;
  CellFields fields;
};

ManufacturedResult run_manufactured(const Mesh& mesh, const ModelParams& params, const ExactSolution& exact,
                                    const SolverOptions& options);
/// Sine solution on unit_box_mesh(dim, level).
ManufacturedResult run_manufactured(int dim, int level, const ModelParams& params, const SolverOptions& options);

struct SweepPoint {
  double kappa = 1.0, alpha = 1.0, c0 = 0.0, lambda = 1.0, mu = 0.5;
};

/// kappa in {1, 1e-4, 1e-8} x alpha in {1, 1e-4} x c0 in {1, 1e-4, 0} x lambda in {1, 1e4, 1e8}.
std::vector<SweepPoint> parameter_grid(double mu = 0.5);

struct SweepRow {
  SweepPoint point;
  SolveReport report;
  ErrorNorms errors;
};

std::vector<SweepRow> run_param_sweep(const Mesh& mesh, const std::vector<SweepPoint>& grid, const SolverOptions& options,
                                      int k = 2);

/// Footing benchmark: load on the central part of the top face, traction-free
/// remainder of the top face, clamped elsewhere, zero pressure on the boundary.
struct FootingCase {
  int dim = 2;
  BoundingBox box;
  std::array<int, 3> cells{1, 1, 1};
  double load_halfwidth = 50.0 / 3.0;  // |x| (and |y| in 3D) below this carries the load
  double sigma0 = 1e4;
  double final_time = 50.0;
  double tau = 1.0;
  int max_steps = 0;  // 0: run to final_time
  double young = 3e4, poisson = 0.4995;
  double permeability = 1e-4;
  double c0 = 1e-3, alpha = 0.1;
  int k = 2;
  double eta = 0.0;  // 0: 2 d k^2

  ModelParams params() const;  // kappa = tau * permeability
  int num_steps() const;
};

enum FootingMarker : int { footing_load = 1, footing_free = 2, footing_clamped = 3 };

FootingCase footing_2d(double tau, int ny = 60);
FootingCase footing_3d(double tau, int n = 8);
Mesh footing_mesh(const FootingCase& fc);

struct FootingResult {
  std::vector<SolveReport> steps;
  double mean_iterations = 0.0;
  int max_iterations = 0;
  bool converged = true;
  CellFields fields;  // final step
  double time = 0.0;
};

FootingResult run_footing(const FootingCase& fc, const SolverOptions& options);

/// Extreme generalized eigenvalues of (S_A, S_P) on the manufactured setup.
SpectrumReport preconditioned_spectrum(const Mesh& mesh, const ModelParams& params, const SolverOptions& options,
                                       int dense_limit = 4000);

struct SpectrumRow {
  SweepPoint point;
  SpectrumReport spectrum;
  double deflated_condition = 0.0;  // without the smallest |eigenvalue| (dense path only)
};

std::vector<SpectrumRow> run_spectrum(const Mesh& mesh, const std::vector<SweepPoint>& grid, const SolverOptions& options,
                                      int k = 2);

/// Cell-wise values of u, p and pT at the cell vertices, for write_vtk.
std::vector<VtkPointField> vertex_fields(const Mesh& mesh, const Spaces& spaces, const CellFields& fields);

}  // namespace hdg
