#include "hdg_biot/cli.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace hdg {

namespace {

const std::vector<double> default_taus{1.0, 0.25, 0.025, 0.0025, 0.0001};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid value for " + key + ": '" + v + "' is not a number");
  }
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid value for " + key + ": '" + v + "' is not an integer");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("invalid value for " + key + ": '" + v + "' is not a boolean");
}

// Fixed-width number formatting so that identical runs give identical files.
std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::string variant_name(TraceVariant v) { return v == TraceVariant::hdg ? "hdg" : "edg"; }
std::string pc_name(PcVariant p) { return p == PcVariant::P ? "p" : "phat"; }

struct Row {
  std::vector<std::string> cells;
  Row& operator<<(const std::string& s) {
    cells.push_back(s);
    return *this;
  }
  Row& operator<<(double x) { return *this << num(x); }
  Row& operator<<(int x) { return *this << std::to_string(x); }
};

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header, const std::vector<Row>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  auto line = [&](const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
    out << '\n';
  };
  line(header);
  for (const Row& r : rows) line(r.cells);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

std::string point_label(const SweepPoint& p) {
  return "kappa=" + num(p.kappa) + " alpha=" + num(p.alpha) + " c0=" + num(p.c0) + " lambda=" + num(p.lambda) +
         " mu=" + num(p.mu);
}

SolverOptions solver_options(const RunConfig& cfg) {
  SolverOptions o;
  o.variant = cfg.variant;
  o.pc = cfg.pc;
  o.tol = cfg.tol;
  o.max_iter = cfg.max_iter;
  o.exec = cfg.serial ? Execution::serial : Execution::parallel;
  return o;
}

double effective_tol(const RunConfig& cfg) { return cfg.tol > 0 ? cfg.tol : default_tolerance(cfg.dim); }

Mesh load_mesh(const RunConfig& cfg, int level) {
  if (cfg.mesh_file.empty()) return unit_box_mesh(cfg.dim, level);
  Mesh m = import_gmsh(cfg.mesh_file);
  if (m.dim() != cfg.dim) throw ConfigError("mesh " + cfg.mesh_file + " has dimension " + std::to_string(m.dim()));
  return m;
}

ModelParams manufactured_params(const RunConfig& cfg, double mu, double lambda, double alpha, double c0, double kappa) {
  ModelParams m = ModelParams::with_defaults(cfg.dim, cfg.k, mu, lambda, alpha, c0, kappa);
  if (cfg.eta) m.eta = *cfg.eta;
  return m;
}

std::vector<std::string> param_header() {
  return {"experiment", "dim", "variant", "pc", "k", "eta", "mu", "lambda", "alpha", "c0", "kappa"};
}

Row param_row(const RunConfig& cfg, const ModelParams& m) {
  Row r;
  r << experiment_name(cfg.experiment) << cfg.dim << variant_name(cfg.variant) << pc_name(cfg.pc) << cfg.k << m.eta << m.mu
    << m.lambda << m.alpha << m.c0 << m.kappa;
  return r;
}

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

void write_fields(const RunConfig& cfg, const Mesh& mesh, const Spaces& sp, const CellFields& f) {
  std::ofstream out(cfg.output / "fields.vtk");
  if (!out) throw ConfigError("cannot write " + (cfg.output / "fields.vtk").string());
  write_vtk(mesh, vertex_fields(mesh, sp, f), out);
}

int run_convergence(const RunConfig& cfg, std::ostream& log) {
  const ModelParams m = manufactured_params(cfg, cfg.mu.value_or(1.0), cfg.lambda.value_or(10.0), cfg.alpha.value_or(0.1),
                                            cfg.c0.value_or(0.1), cfg.kappa.value_or(1e-4));
  const ExactSolution exact = manufactured_solution(m);
  const SolverOptions opt = solver_options(cfg);
  const int first = cfg.level > 0 ? cfg.level : (cfg.dim == 2 ? 4 : 2);
  const int count = cfg.mesh_file.empty() ? cfg.levels : 1;

  std::vector<Row> rows;
  std::ostringstream md;
  md << "| level | cells | h | trace dofs | iterations | L2 error u | rate | L2 error p | rate |\n"
     << "|---|---|---|---|---|---|---|---|---|\n";
  int status = 0;
  double prev_h = 0, prev_u = 0, prev_p = 0;
  for (int i = 0; i < count; ++i) {
    const int level = cfg.mesh_file.empty() ? first << i : 0;
    const Mesh mesh = load_mesh(cfg, level);
    const ManufacturedResult r = run_manufactured(mesh, m, exact, opt);
    Row row = param_row(cfg, m);
    row << level << r.cells << r.h << r.trace_dofs << effective_tol(cfg) << r.report.iterations
        << std::string(r.report.converged ? "true" : "false") << sci(r.report.relative_residual) << sci(r.errors.u)
        << sci(r.errors.p);
    rows.push_back(row);
    auto rate = [&](double e, double ep) {
      return prev_h > 0 ? num(std::round(100 * std::log(ep / e) / std::log(prev_h / r.h)) / 100) : std::string("-");
    };
    md << "| " << level << " | " << r.cells << " | " << num(r.h) << " | " << r.trace_dofs << " | " << r.report.iterations
       << (r.report.converged ? "" : " (not converged)") << " | " << sci(r.errors.u) << " | " << rate(r.errors.u, prev_u)
       << " | " << sci(r.errors.p) << " | " << rate(r.errors.p, prev_p) << " |\n";
    if (!r.report.converged) {
      log << "not converged: level " << level << " mu=" << num(m.mu) << " lambda=" << num(m.lambda)
          << " alpha=" << num(m.alpha) << " c0=" << num(m.c0) << " kappa=" << num(m.kappa) << "\n";
      status = 1;
    }
    prev_h = r.h;
    prev_u = r.errors.u;
    prev_p = r.errors.p;
    if (cfg.vtk && i + 1 == count) write_fields(cfg, mesh, manufactured_spaces(mesh, cfg.k, cfg.variant, exact), r.fields);
  }
  write_csv(cfg.output / "results.csv",
            with(param_header(), {"level", "cells", "h", "trace_dofs", "tol", "iterations", "converged", "relative_residual",
                                  "error_u", "error_p"}),
            rows);
  write_text(cfg.output / "table.md", md.str());
  return status;
}

// Table laid out with (kappa, alpha, c0) rows and one column per lambda.
template <class Cell>
std::string grid_table(const std::vector<SweepPoint>& grid, const std::string& what, Cell cell) {
  std::vector<double> lambdas;
  for (const auto& p : grid)
    if (std::find(lambdas.begin(), lambdas.end(), p.lambda) == lambdas.end()) lambdas.push_back(p.lambda);
  std::ostringstream md;
  md << "| kappa | alpha | c0 |";
  for (double l : lambdas) md << " " << what << " lambda=" << num(l) << " |";
  md << "\n|---|---|---|";
  for (std::size_t i = 0; i < lambdas.size(); ++i) md << "---|";
  md << "\n";
  for (std::size_t i = 0; i < grid.size(); i += lambdas.size()) {
    md << "| " << num(grid[i].kappa) << " | " << num(grid[i].alpha) << " | " << num(grid[i].c0) << " |";
    for (std::size_t j = 0; j < lambdas.size() && i + j < grid.size(); ++j) md << " " << cell(i + j) << " |";
    md << "\n";
  }
  return md.str();
}

int run_sweep(const RunConfig& cfg, std::ostream& log) {
  const int level = cfg.mesh_file.empty() ? (cfg.level > 0 ? cfg.level : (cfg.dim == 2 ? 16 : 4)) : 0;
  const Mesh mesh = load_mesh(cfg, level);
  const auto grid = parameter_grid(cfg.mu.value_or(0.5));
  const SolverOptions opt = solver_options(cfg);
  std::vector<Row> rows;
  std::vector<SweepRow> results;
  int status = 0;
  int trace_dofs = 0;
  for (const SweepPoint& pt : grid) {
    const ModelParams m = manufactured_params(cfg, pt.mu, pt.lambda, pt.alpha, pt.c0, pt.kappa);
    const ManufacturedResult r = run_manufactured(mesh, m, manufactured_solution(m), opt);
    trace_dofs = r.trace_dofs;
    results.push_back({pt, r.report, r.errors});
    Row row = param_row(cfg, m);
    row << level << r.cells << r.trace_dofs << effective_tol(cfg) << r.report.iterations
        << std::string(r.report.converged ? "true" : "false") << sci(r.report.relative_residual) << sci(r.errors.u)
        << sci(r.errors.p);
    rows.push_back(row);
    if (!r.report.converged) {
      log << "not converged: " << point_label(pt) << "\n";
      status = 1;
    }
  }
  write_csv(cfg.output / "results.csv",
            with(param_header(), {"level", "cells", "trace_dofs", "tol", "iterations", "converged", "relative_residual",
                                  "error_u", "error_p"}),
            rows);
  int lo = results.front().report.iterations, hi = lo;
  for (const auto& r : results) {
    lo = std::min(lo, r.report.iterations);
    hi = std::max(hi, r.report.iterations);
  }
  std::ostringstream md;
  md << "MINRES iterations, " << (cfg.dim == 2 ? "2D" : "3D") << " " << variant_name(cfg.variant) << ", preconditioner "
     << pc_name(cfg.pc) << ", " << mesh.num_cells() << " cells, " << trace_dofs << " trace dofs, mu = "
     << num(grid.front().mu) << "\n\n";
  md << grid_table(grid, "it", [&](std::size_t i) {
    return std::to_string(results[i].report.iterations) + (results[i].report.converged ? "" : "*");
  });
  md << "\nmin " << lo << ", max " << hi << ", max/min " << num(std::round(100.0 * hi / std::max(lo, 1)) / 100) << "\n";
  write_text(cfg.output / "table.md", md.str());
  return status;
}

int run_spectrum_cli(const RunConfig& cfg, std::ostream&) {
  const int level = cfg.mesh_file.empty() ? (cfg.level > 0 ? cfg.level : 2) : 0;
  const Mesh mesh = load_mesh(cfg, level);
  const auto grid = parameter_grid(cfg.mu.value_or(0.5));
  const SolverOptions opt = solver_options(cfg);
  std::vector<Row> rows;
  std::vector<SpectrumRow> results;
  for (const SweepPoint& pt : grid) {
    const ModelParams m = manufactured_params(cfg, pt.mu, pt.lambda, pt.alpha, pt.c0, pt.kappa);
    SpectrumRow r{pt, preconditioned_spectrum(mesh, m, opt), 0.0};
    r.deflated_condition = r.spectrum.condition();
    if (r.spectrum.dense && r.spectrum.eigenvalues.size() > 2) {
      std::vector<double> a(r.spectrum.eigenvalues.size());
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(r.spectrum.eigenvalues[i]);
      std::sort(a.begin(), a.end());
      r.deflated_condition = a.back() / a[1];
    }
    Row row = param_row(cfg, m);
    row << level << mesh.num_cells() << sci(r.spectrum.min) << sci(r.spectrum.max) << sci(r.spectrum.min_abs)
        << sci(r.spectrum.max_abs) << sci(r.spectrum.condition()) << sci(r.deflated_condition)
        << std::string(r.spectrum.dense ? "true" : "false");
    rows.push_back(row);
    results.push_back(r);
  }
  write_csv(cfg.output / "results.csv",
            with(param_header(), {"level", "cells", "min", "max", "min_abs", "max_abs", "condition", "deflated_condition",
                                  "dense"}),
            rows);
  std::ostringstream md;
  md << "Condition numbers max|ev|/min|ev| of the preconditioned trace system, " << mesh.num_cells()
     << " cells; in brackets without the smallest |ev|\n\n";
  md << grid_table(grid, "cond", [&](std::size_t i) {
    return num(std::round(results[i].spectrum.condition() * 100) / 100) + " (" +
           num(std::round(results[i].deflated_condition * 100) / 100) + ")";
  });
  write_text(cfg.output / "table.md", md.str());
  return 0;
}

int run_footing_cli(const RunConfig& cfg, std::ostream& log) {
  const std::vector<double>& taus = cfg.taus.empty() ? default_taus : cfg.taus;
  const SolverOptions opt = solver_options(cfg);
  std::vector<Row> rows;
  std::ostringstream md;
  md << "| tau | steps | mean iterations | max iterations |\n|---|---|---|---|\n";
  int status = 0;
  for (double tau : taus) {
    FootingCase fc = cfg.dim == 2 ? (cfg.level > 0 ? footing_2d(tau, cfg.level) : footing_2d(tau))
                                  : (cfg.level > 0 ? footing_3d(tau, cfg.level) : footing_3d(tau));
    fc.k = cfg.k;
    fc.max_steps = cfg.steps;
    if (cfg.eta) fc.eta = *cfg.eta;
    const ModelParams m = fc.params();
    const FootingResult r = run_footing(fc, opt);
    Row row = param_row(cfg, m);
    row << tau << fc.permeability << fc.sigma0 << fc.cells[0] << fc.cells[1] << (fc.dim == 3 ? fc.cells[2] : 0)
        << static_cast<int>(r.steps.size()) << effective_tol(cfg) << r.mean_iterations << r.max_iterations
        << std::string(r.converged ? "true" : "false");
    rows.push_back(row);
    md << "| " << num(tau) << " | " << r.steps.size() << " | " << num(std::round(r.mean_iterations * 10) / 10) << " | "
       << r.max_iterations << (r.converged ? "" : " (not converged)") << " |\n";
    if (!r.converged) {
      log << "not converged: footing tau=" << num(tau) << "\n";
      status = 1;
    }
    if (cfg.vtk && tau == taus.back()) {
      const Mesh mesh = footing_mesh(fc);
      write_fields(cfg, mesh, build_spaces(mesh, fc.k, cfg.variant, {footing_load, footing_free}), r.fields);
    }
  }
  write_csv(cfg.output / "results.csv",
            with(param_header(), {"tau", "permeability", "sigma0", "nx", "ny", "nz", "steps", "tol", "mean_iterations",
                                  "max_iterations", "converged"}),
            rows);
  write_text(cfg.output / "table.md", md.str());
  return status;
}

}  // namespace

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::convergence: return "convergence";
    case Experiment::param_sweep: return "param-sweep";
    case Experiment::footing: return "footing";
    case Experiment::spectrum: return "spectrum";
  }
  return "";
}

Experiment parse_experiment(const std::string& name) {
  for (auto e : {Experiment::convergence, Experiment::param_sweep, Experiment::footing, Experiment::spectrum})
    if (experiment_name(e) == name) return e;
  throw ConfigError("unknown experiment '" + name + "'");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{"experiment", "dim",    "level",  "levels", "mesh",   "variant",
                                             "pc",         "tol",    "max_iter", "k",    "mu",     "lambda",
                                             "alpha",      "c0",     "kappa",  "eta",    "tau",    "steps",
                                             "output",     "vtk",    "threads", "serial"};
  return keys;
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "experiment") cfg.experiment = parse_experiment(v);
  else if (key == "dim") cfg.dim = to_int(key, v);
  else if (key == "level") cfg.level = to_int(key, v);
  else if (key == "levels") cfg.levels = to_int(key, v);
  else if (key == "mesh") cfg.mesh_file = v;
  else if (key == "variant") {
    if (v == "hdg") cfg.variant = TraceVariant::hdg;
    else if (v == "edg") cfg.variant = TraceVariant::edg;
    else throw ConfigError("invalid value for variant: '" + v + "' (expected hdg or edg)");
  } else if (key == "pc") {
    if (v == "p" || v == "P") cfg.pc = PcVariant::P;
    else if (v == "phat" || v == "Phat") cfg.pc = PcVariant::Phat;
    else throw ConfigError("invalid value for pc: '" + v + "' (expected p or phat)");
  } else if (key == "tol") cfg.tol = to_double(key, v);
  else if (key == "max_iter") cfg.max_iter = to_int(key, v);
  else if (key == "k") cfg.k = to_int(key, v);
  else if (key == "mu") cfg.mu = to_double(key, v);
  else if (key == "lambda") cfg.lambda = to_double(key, v);
  else if (key == "alpha") cfg.alpha = to_double(key, v);
  else if (key == "c0") cfg.c0 = to_double(key, v);
  else if (key == "kappa") cfg.kappa = to_double(key, v);
  else if (key == "eta") cfg.eta = to_double(key, v);
  else if (key == "tau") {
    cfg.taus.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) cfg.taus.push_back(to_double(key, trim(item)));
  } else if (key == "steps") cfg.steps = to_int(key, v);
  else if (key == "output") cfg.output = v;
  else if (key == "vtk") cfg.vtk = to_bool(key, v);
  else if (key == "threads") cfg.threads = to_int(key, v);
  else if (key == "serial") cfg.serial = to_bool(key, v);
  else throw ConfigError("unknown configuration key '" + key + "'");
}

void read_config(RunConfig& cfg, std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    set_config_value(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

void read_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  read_config(cfg, in);
}

void RunConfig::validate() const {
  if (dim != 2 && dim != 3) throw ConfigError("dim must be 2 or 3");
  if (!(tol >= 0 && tol < 1)) throw ConfigError("tol must lie in (0, 1)");
  if (level < 0) throw ConfigError("level must be at least 1");
  if (levels < 1) throw ConfigError("levels must be at least 1");
  if (k < 1) throw ConfigError("k must be at least 1");
  if (max_iter < 0) throw ConfigError("max_iter must be non-negative");
  if (steps < 0) throw ConfigError("steps must be non-negative");
  if (threads < 0) throw ConfigError("threads must be non-negative");
  if (eta && !(*eta > 0)) throw ConfigError("eta must be positive");
  for (double t : taus)
    if (!(t > 0)) throw ConfigError("tau values must be positive");
  const bool grid = experiment == Experiment::param_sweep || experiment == Experiment::spectrum;
  if (grid && (lambda || alpha || c0 || kappa))
    throw ConfigError(experiment_name(experiment) + ": kappa, alpha, c0 and lambda are fixed by the parameter grid");
  if (experiment == Experiment::footing) {
    if (mu || lambda || alpha || c0 || kappa)
      throw ConfigError("footing: material parameters are fixed by the benchmark definition");
    if (!mesh_file.empty()) throw ConfigError("footing: runs on its generated box mesh; mesh files are not supported");
  }
  if (experiment != Experiment::footing && !taus.empty()) throw ConfigError("tau only applies to the footing experiment");
  if (grid && vtk) throw ConfigError(experiment_name(experiment) + ": fields.vtk is only written by convergence and footing");
}

int run(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
  std::error_code ec;
  std::filesystem::create_directories(cfg.output, ec);
  if (ec) throw ConfigError("cannot create output directory " + cfg.output.string() + ": " + ec.message());
  switch (cfg.experiment) {
    case Experiment::convergence: return run_convergence(cfg, log);
    case Experiment::param_sweep: return run_sweep(cfg, log);
    case Experiment::footing: return run_footing_cli(cfg, log);
    case Experiment::spectrum: return run_spectrum_cli(cfg, log);
  }
  return 2;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"HDG discretisation of the four-field Biot model with parameter-robust preconditioners"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::map<std::string, std::string> values;
  bool vtk = false, serial = false;
  const std::map<std::string, std::string> help{
      {"dim", "spatial dimension (2 or 3)"},
      {"level", "unit-box subdivisions (first level of a convergence study; footing: ny in 2D, n in 3D)"},
      {"levels", "convergence: number of meshes, each twice as fine as the previous"},
      {"mesh", "Gmsh v2.2 mesh file used instead of the unit box"},
      {"variant", "hdg or edg"},
      {"pc", "p or phat"},
      {"tol", "relative preconditioned residual tolerance"},
      {"max_iter", "MINRES iteration cap"},
      {"k", "polynomial degree"},
      {"tau", "footing: comma-separated time step sizes"},
      {"steps", "footing: time steps per tau (0: run to the final time)"},
      {"output", "output directory"},
      {"threads", "OpenMP threads"}};
  auto summary = [](Experiment e) -> std::string {
    switch (e) {
      case Experiment::convergence: return "errors and MINRES iterations on refined meshes (manufactured solution)";
      case Experiment::param_sweep: return "MINRES iterations over the 54-point parameter grid";
      case Experiment::footing: return "footing consolidation problem for a list of time step sizes";
      case Experiment::spectrum: return "extreme eigenvalues of the preconditioned trace system over the grid";
    }
    return {};
  };
  for (auto e : {Experiment::convergence, Experiment::param_sweep, Experiment::footing, Experiment::spectrum}) {
    CLI::App* sub = app.add_subcommand(experiment_name(e), summary(e));
    sub->add_option("--config", config_path, "key=value configuration file; flags override it");
    for (const std::string& key : config_keys()) {
      if (key == "experiment" || key == "vtk" || key == "serial") continue;
      const auto h = help.find(key);
      sub->add_option("--" + key, values[key], h == help.end() ? "model parameter " + key : h->second);
    }
    sub->add_flag("--vtk", vtk, "write fields.vtk");
    sub->add_flag("--serial", serial, "use the serial reference kernels");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    RunConfig cfg;
    if (!config_path.empty()) read_config_file(cfg, config_path);
    cfg.experiment = parse_experiment(app.get_subcommands().front()->get_name());
    for (const CLI::App* sub : app.get_subcommands())
      for (const auto& [key, value] : values)
        if (sub->count("--" + key) > 0) set_config_value(cfg, key, value);
    if (vtk) cfg.vtk = true;
    if (serial) cfg.serial = true;
    const int status = run(cfg, std::cerr);
    std::cout << "wrote " << (cfg.output / "results.csv").string() << " and " << (cfg.output / "table.md").string() << "\n";
    return status;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace hdg
