// Acceptance criteria 1-7. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Pass criterion numbers as arguments to run a subset.

#include "hdg_biot/problems.hpp"
#include "meshes.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace hdg;

namespace {

struct Outcome {
  bool pass = true;
  std::string summary;
};

void note(const std::string& s) { std::cout << "    " << s << std::endl; }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string label(const SweepPoint& p) {
  std::ostringstream s;
  s << "(kappa " << p.kappa << ", alpha " << p.alpha << ", c0 " << p.c0 << ", lambda " << p.lambda << ")";
  return s.str();
}

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

constexpr std::array<Field, 4> cell_fields{Field::u, Field::pT, Field::z, Field::p};
constexpr std::array<Field, 3> trace_fields{Field::ubar, Field::pTbar, Field::pbar};

// Criterion 1 -----------------------------------------------------------------

Outcome condensation_oracle() {
  std::mt19937 rng(2024);
  auto logu = [&](double lo, double hi) { return std::pow(10.0, std::uniform_real_distribution<double>(lo, hi)(rng)); };
  double worst = 0;
  int cases = 0;
  for (int dim : {2, 3}) {
    const Mesh mesh = unit_box_mesh(dim, 1);  // 2 triangles or 6 tetrahedra
    for (int t = 0; t < 5; ++t) {
      const SweepPoint pt{logu(-8, 0), logu(-4, 0), logu(-4, 0), logu(0, 8), 0.5};
      const ModelParams m = ModelParams::with_defaults(dim, 2, pt.mu, pt.lambda, pt.alpha, pt.c0, pt.kappa);
      for (auto v : {TraceVariant::hdg, TraceVariant::edg}) {
        // Generic data: the manufactured solution vanishes on the diagonal facet of the
        // two-triangle mesh, which would leave pbar with no signal to compare.
        Spaces sp = build_spaces(mesh, 2, v, {2});
        set_dirichlet(mesh, sp, Field::ubar, -1, [](const Point& x) {
          return Eigen::Vector3d(x[1] * x[1] + 0.3, x[2] - x[0], std::sin(x[0] + 2 * x[1]));
        });
        set_dirichlet(mesh, sp, Field::pbar, -1,
                      [](const Point& x) { return Eigen::Vector3d(std::cos(x[0] - 0.5 * x[1]) + x[2], 0, 0); });
        Loads loads;
        loads.body_force = [](const Point& x) { return Eigen::Vector3d(1 + x[0], std::sin(x[1]), x[2] - x[0]); };
        loads.source = [](const Point& x) { return Eigen::Vector3d(x[0] * x[1] - 0.3 + x[2], 0, 0); };
        loads.traction = [](const Point& x) { return Eigen::Vector3d(0.5, x[1], -x[2]); };
        const BlockSystem full = assemble_biot(mesh, sp, m, loads);
        // Monolithic reference in extended precision with iterative refinement; a plain
        // double dense solve is less accurate than the condensed path at small kappa.
        const MatL A = Mat(full.matrix).cast<long double>();
        const VecL b = full.rhs.cast<long double>();
        const auto lu = A.fullPivLu();
        VecL xl = lu.solve(b);
        for (int it = 0; it < 3; ++it) xl += lu.solve(VecL(b - A * xl));
        const Vec xm = xl.cast<double>();
        const CondensedSystem cs = condense_biot(mesh, sp, m, loads);
        const Vec xbar = Mat(cs.matrix).fullPivLu().solve(cs.rhs);
        const Vec cells = back_substitute(cs, xbar);
        double w = 0;
        for (int i = 0; i < 4; ++i) {
          const Vec a = cells.segment(cs.cell_offsets[i], cs.cell_offsets[i + 1] - cs.cell_offsets[i]);
          const Vec b = full.segment(xm, cell_fields[i]);
          if (b.size()) w = std::max(w, (a - b).norm() / b.norm());
        }
        for (int i = 0; i < 3; ++i) {
          const Vec a = xbar.segment(cs.offsets[i], cs.offsets[i + 1] - cs.offsets[i]);
          const Vec b = full.segment(xm, trace_fields[i]);
          if (b.size()) w = std::max(w, (a - b).norm() / b.norm());
        }
        if (w > 1e-9) note("dim " + std::to_string(dim) + " " + label(pt) + ": relative field difference " + fmt("%.2e", w));
        worst = std::max(worst, w);
        ++cases;
      }
    }
  }
  return {worst <= 1e-9, std::to_string(cases) + " cases, worst relative field difference " + fmt("%.2e", worst) +
                             " (bound 1e-9)"};
}

// Criterion 2 -----------------------------------------------------------------

Outcome polynomial_exactness() {
  double worst = 0;
  struct Case {
    std::string name;
    Mesh mesh;
  };
  std::vector<Case> meshes;
  meshes.push_back({"2D structured 4x4", unit_box_mesh(2, 4)});
  meshes.push_back({"2D jittered 3x3", fixtures::jittered_mesh(2, 3, 3)});
  meshes.push_back({"3D structured 2x2x2", unit_box_mesh(3, 2)});
  meshes.push_back({"3D jittered 2x2x2", fixtures::jittered_mesh(3, 2, 4)});
  for (const Case& c : meshes) {
    const int d = c.mesh.dim();
    const ModelParams m = ModelParams::with_defaults(d, 2, 1.0, 10.0, 0.1, 0.1, 1e-4);
    for (auto v : {TraceVariant::hdg, TraceVariant::edg}) {
      SolverOptions o;
      o.variant = v;
      o.tol = 1e-14;
      const ManufacturedResult r = run_manufactured(c.mesh, m, polynomial_solution(m), o);
      const double err = std::max(r.errors.u, r.errors.p);
      note(c.name + (v == TraceVariant::hdg ? " HDG" : " EDG") + ": L2 errors u " + fmt("%.2e", r.errors.u) + ", p " +
           fmt("%.2e", r.errors.p));
      worst = std::max(worst, err);
    }
  }
  return {worst <= 1e-8, "worst L2 error " + fmt("%.2e", worst) + " (bound 1e-8)"};
}

// Criterion 3 -----------------------------------------------------------------

Outcome h_robustness() {
  const ModelParams m = ModelParams::with_defaults(2, 2, 1.0, 10.0, 0.1, 0.1, 1e-4);
  std::vector<double> its;
  bool in_band = true, converged = true;
  for (int n : {16, 32, 64, 128}) {
    const ManufacturedResult r = run_manufactured(2, n, m, {});
    note(std::to_string(r.cells) + " cells, " + std::to_string(r.trace_dofs) + " trace dofs: " +
         std::to_string(r.report.iterations) + " iterations, errors u " + fmt("%.2e", r.errors.u) + " p " +
         fmt("%.2e", r.errors.p) + fmt(", %.1f s", r.report.seconds));
    its.push_back(r.report.iterations);
    in_band = in_band && r.report.iterations >= 55 && r.report.iterations <= 125;
    converged = converged && r.report.converged;
  }
  const double s = spread(its);
  return {in_band && converged && s <= 1.25,
          "iterations " + fmt("%.0f", its[0]) + ", " + fmt("%.0f", its[1]) + ", " + fmt("%.0f", its[2]) + ", " +
              fmt("%.0f", its[3]) + " (band [55, 125]); max/min " + fmt("%.3f", s) + " (bound 1.25)"};
}

// Criterion 4 -----------------------------------------------------------------

struct SweepSummary {
  bool converged = true;
  double ratio = 0;
  std::string text;
};

SweepSummary sweep(const Mesh& mesh) {
  const auto grid = parameter_grid();
  const auto rows = run_param_sweep(mesh, grid, {});
  SweepSummary s;
  std::vector<double> its, mid;
  for (const auto& r : rows) {
    its.push_back(r.report.iterations);
    if (r.point.lambda == 1e4) mid.push_back(r.report.iterations);
    if (!r.report.converged) {
      s.converged = false;
      note("not converged: " + label(r.point));
    }
  }
  // table in the layout of rows (kappa, alpha, c0) by columns lambda = 1, 1e4, 1e8
  for (std::size_t i = 0; i < rows.size(); i += 3) {
    std::ostringstream line;
    line << label(rows[i].point).substr(0, label(rows[i].point).find(", lambda")) << "): ";
    for (std::size_t j = i; j < i + 3; ++j) line << rows[j].report.iterations << " ";
    note(line.str());
  }
  s.ratio = spread(its);
  s.text = std::to_string(mesh.num_cells()) + " cells: min " + fmt("%.0f", *std::min_element(its.begin(), its.end())) +
           ", max " + fmt("%.0f", *std::max_element(its.begin(), its.end())) + ", max/min " + fmt("%.2f", s.ratio) +
           "; lambda=1e4 column max/min " + fmt("%.2f", spread(mid));
  note(s.text);
  return s;
}

Outcome parameter_robustness() {
  note("2D, HDG, exact S_Phat");
  const SweepSummary a = sweep(unit_box_mesh(2, 69));
  note("3D, HDG, exact S_Phat");
  const SweepSummary b = sweep(unit_box_mesh(3, 8));
  return {a.converged && b.converged && a.ratio <= 2.5 && b.ratio <= 2.5,
          "2D max/min " + fmt("%.2f", a.ratio) + ", 3D max/min " + fmt("%.2f", b.ratio) + " (bound 2.5)" +
              (a.converged && b.converged ? "" : "; some points did not converge")};
}

// Criterion 5 -----------------------------------------------------------------

Outcome tau_robustness() {
  std::vector<double> means;
  bool converged = true;
  for (double tau : {1.0, 0.25, 0.025, 0.0025, 0.0001}) {
    FootingCase fc = footing_2d(tau);
    fc.max_steps = 5;
    const FootingResult r = run_footing(fc, {});
    std::ostringstream its;
    for (const auto& s : r.steps) its << s.iterations << " ";
    note("tau " + fmt("%g", tau) + " (" + std::to_string(fc.cells[0] * fc.cells[1] * 2) + " cells): iterations " +
         its.str() + "mean " + fmt("%.1f", r.mean_iterations));
    means.push_back(r.mean_iterations);
    converged = converged && r.converged;
  }
  const double s = spread(means);
  return {converged && s <= 1.2, "mean iterations per step vary by max/min " + fmt("%.3f", s) + " (bound 1.2)"};
}

// Criterion 6 -----------------------------------------------------------------

std::filesystem::path baseline_path() {
  return std::filesystem::path(HDG_BIOT_SOURCE_DIR) / "tests" / "data" / "spectrum_2d_level2.csv";
}

Outcome spectral_robustness() {
  const Mesh mesh = unit_box_mesh(2, 2);
  const auto grid = parameter_grid();
  const auto rows = run_spectrum(mesh, grid, {});
  std::vector<double> cond, deflated;
  for (const auto& r : rows) {
    cond.push_back(r.spectrum.condition());
    deflated.push_back(r.deflated_condition);
  }
  const auto [lo, hi] = std::minmax_element(cond.begin(), cond.end());
  note("condition max|ev|/min|ev|: min " + fmt("%.3g", *lo) + " at " + label(rows[lo - cond.begin()].point) + ", max " +
       fmt("%.3g", *hi) + " at " + label(rows[hi - cond.begin()].point));
  note("diagnostic, smallest |ev| removed: condition in [" +
       fmt("%.3g", *std::min_element(deflated.begin(), deflated.end())) + ", " +
       fmt("%.3g", *std::max_element(deflated.begin(), deflated.end())) + "], max/min " +
       fmt("%.3f", spread(deflated)));

  // regression baseline of the extreme eigenvalues
  bool baseline_ok = true;
  const auto path = baseline_path();
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    double worst = 0;
    std::size_t i = 0;
    for (; std::getline(in, line) && i < rows.size(); ++i) {
      std::stringstream ss(line);
      std::vector<double> v;
      for (std::string f; std::getline(ss, f, ',');) v.push_back(std::stod(f));
      const SpectrumReport& s = rows[i].spectrum;
      const double ref[] = {v[4], v[5], v[6], v[7]}, got[] = {s.min, s.max, s.min_abs, s.max_abs};
      for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(got[j] - ref[j]) / std::abs(ref[j]));
    }
    baseline_ok = i == rows.size() && worst <= 1e-6;
    note("baseline " + path.filename().string() + ": worst relative change " + fmt("%.2e", worst) +
         (baseline_ok ? "" : " (regression)"));
  } else {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    out << "kappa,alpha,c0,lambda,min,max,min_abs,max_abs\n";
    out.precision(17);
    for (const auto& r : rows)
      out << r.point.kappa << "," << r.point.alpha << "," << r.point.c0 << "," << r.point.lambda << "," << r.spectrum.min
          << "," << r.spectrum.max << "," << r.spectrum.min_abs << "," << r.spectrum.max_abs << "\n";
    note("baseline recorded in " + path.string());
  }
  const double s = *hi / *lo;
  return {s < 3 && baseline_ok, "condition number varies by a factor " + fmt("%.3g", s) + " over the grid (bound 3)" +
                                    (baseline_ok ? "" : "; spectrum baseline mismatch")};
}

// Criterion 7 -----------------------------------------------------------------

Outcome structural_invariants() {
  bool ok = true;
  const auto grid = parameter_grid();
  auto check = [&](bool c, const std::string& what) {
    if (!c) note("violated: " + what);
    ok = ok && c;
  };

  // a_h and S_A symmetry
  double asym_a = 0, asym_s = 0;
  for (int dim : {2, 3}) {
    const Mesh mesh = fixtures::jittered_mesh(dim, dim == 2 ? 3 : 1, 17);
    for (const auto& pt : grid) {
      const ModelParams m = ModelParams::with_defaults(dim, 2, pt.mu, pt.lambda, pt.alpha, pt.c0, pt.kappa);
      for (auto v : {TraceVariant::hdg, TraceVariant::edg}) {
        const Spaces sp = build_spaces(mesh, 2, v, {2});
        const BlockSystem full = assemble_biot(mesh, sp, m, {});
        asym_a = std::max(asym_a, full.asymmetry());
        asym_s = std::max(asym_s, condense(full).asymmetry());
      }
    }
  }
  note("a_h asymmetry " + fmt("%.2e", asym_a) + ", S_A asymmetry " + fmt("%.2e", asym_s) + " (bound 1e-12)");
  check(asym_a <= 1e-12 && asym_s <= 1e-12, "symmetry");

  // S_P and S_Phat positive definite over the grid
  double min_ev = 1e300;
  int factored = 0;
  for (int dim : {2, 3}) {
    const Mesh mesh = unit_box_mesh(dim, dim == 2 ? 2 : 1);
    const Spaces sp = build_spaces(mesh, 2, TraceVariant::hdg);
    for (const auto& pt : grid)
      for (auto var : {PcVariant::P, PcVariant::Phat}) {
        const ModelParams m = ModelParams::with_defaults(dim, 2, pt.mu, pt.lambda, pt.alpha, pt.c0, pt.kappa);
        try {
          const ReducedPreconditioner R = build_reduced_preconditioner(mesh, sp, m, var);
          for (int b = 0; b < 3; ++b) {
            const Mat B = Mat(R.block(b));
            if (B.rows() == 0) continue;
            const Eigen::SelfAdjointEigenSolver<Mat> es(B, Eigen::EigenvaluesOnly);
            min_ev = std::min(min_ev, es.eigenvalues()[0] / es.eigenvalues().maxCoeff());
          }
          ++factored;
        } catch (const NotPositiveDefinite& e) {
          check(false, std::string("positive definiteness at ") + label(pt) + ": " + e.what());
        }
      }
  }
  note(std::to_string(factored) + " reduced preconditioners factored; smallest relative eigenvalue " +
       fmt("%.2e", min_ev));
  check(min_ev > 0, "positive definiteness");

  // monotone MINRES residuals
  double worst_rise = 0;
  for (const auto& pt : grid) {
    const ModelParams m = ModelParams::with_defaults(2, 2, pt.mu, pt.lambda, pt.alpha, pt.c0, pt.kappa);
    const ManufacturedResult r = run_manufactured(2, 4, m, {});
    const auto& h = r.report.history;
    for (std::size_t i = 1; i < h.size(); ++i) worst_rise = std::max(worst_rise, h[i] / h[i - 1] - 1);
    check(r.report.converged, "convergence at " + label(pt));
  }
  note("largest relative increase of the preconditioned residual " + fmt("%.2e", worst_rise));
  check(worst_rise <= 1e-10, "monotone residual");

  // Schur complement inequalities for d_h and the reaction-diffusion form
  std::mt19937 gen(99);
  std::normal_distribution<double> nd;
  double worst_d = -1e300, worst_a = -1e300;
  const Mesh mesh = fixtures::jittered_mesh(2, 2, 5);
  const Spaces sp = build_spaces(mesh, 2, TraceVariant::hdg);
  for (int t = 0; t < 100; ++t) {
    const SweepPoint& pt = grid[(t * 7) % grid.size()];
    const ModelParams m = ModelParams::with_defaults(2, 2, pt.mu, pt.lambda, pt.alpha, pt.c0, pt.kappa);
    const PreconditionerBlocks pc = assemble_preconditioner(mesh, sp, m, PcVariant::Phat);
    for (const FieldBlock* blk : {&pc.u, &pc.p}) {
      const SpMat S = reduce_field_block(*blk);
      Vec x(blk->size());
      for (int i = 0; i < x.size(); ++i) x[i] = nd(gen);
      const Vec xb = x.tail(blk->size() - blk->num_cell);
      const double full = x.dot(blk->matrix * x), red = xb.dot(S * xb);
      const double gap = (red - full) / std::abs(full);  // must be <= 0
      (blk == &pc.u ? worst_d : worst_a) = std::max(blk == &pc.u ? worst_d : worst_a, gap);
    }
  }
  note("max (S x.x - A x.x)/|A x.x| over 100 random vectors: d_h " + fmt("%.2e", worst_d) + ", reaction-diffusion " +
       fmt("%.2e", worst_a));
  check(worst_d <= 1e-12 && worst_a <= 1e-12, "Schur complement inequalities");
  return {ok, ok ? "symmetry, positive definiteness, monotone residuals and Schur inequalities hold"
                 : "see violations above"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "condensation oracle", condensation_oracle},
      {2, "polynomial exactness", polynomial_exactness},
      {3, "h-robustness", h_robustness},
      {4, "parameter robustness", parameter_robustness},
      {5, "time step robustness", tau_robustness},
      {6, "spectral robustness", spectral_robustness},
      {7, "structural invariants", structural_invariants},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  std::vector<std::string> lines;
  bool all = true;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    std::cout << "criterion " << c.id << ": " << c.name << std::endl;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream line;
    line << (o.pass ? "PASS" : "FAIL") << " " << c.id << " " << c.name << ": " << o.summary << fmt(" [%.0f s]", secs);
    std::cout << line.str() << std::endl;
    lines.push_back(line.str());
    all = all && o.pass;
  }
  std::cout << "\nsummary\n";
  for (const auto& l : lines) std::cout << l << "\n";
  return all ? 0 : 1;
}
