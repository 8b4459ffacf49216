#pragma once

#include "hdg_biot/problems.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hdg {

/// Raised for invalid configuration values, unknown keys and unusable mesh input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Experiment { convergence, param_sweep, footing, spectrum };

struct RunConfig {
  Experiment experiment = Experiment::convergence;
  int dim = 2;
  int level = 0;   // 0: experiment default (first level of a convergence study, footing ny or n)
  int levels = 4;  // convergence: number of meshes, each refining the previous by 2
  std::string mesh_file;
  TraceVariant variant = TraceVariant::hdg;
  PcVariant pc = PcVariant::Phat;
  double tol = 0.0;  // 0: 1e-8 in 2D, 1e-6 in 3D
  int max_iter = 0;
  int k = 2;
  std::optional<double> mu, lambda, alpha, c0, kappa, eta;
  std::vector<double> taus;  // footing; empty: 1, 0.25, 0.025, 0.0025, 0.0001
  int steps = 10;            // footing steps per time step size; 0: run to the final time
  std::filesystem::path output = "results";
  bool vtk = false;
  int threads = 0;  // 0: OpenMP default
  bool serial = false;

  /// Throws ConfigError when a value is out of range or an override does not apply to the experiment.
  void validate() const;
};

std::string experiment_name(Experiment e);
Experiment parse_experiment(const std::string& name);

/// Sets one configuration key from its text value; unknown keys throw ConfigError.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);
/// Plain key=value lines; blank lines and '#' comments are skipped.
void read_config(RunConfig& cfg, std::istream& in);
void read_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// Configuration keys accepted by set_config_value.
const std::vector<std::string>& config_keys();

/// Runs the experiment and writes results.csv, table.md and optionally fields.vtk into cfg.output.
/// Returns 0 if every solve converged and 1 otherwise; failing points are reported on `log`.
int run(const RunConfig& cfg, std::ostream& log);

/// Command-line entry point: `hdg-biot <experiment> [--config file] [--key value ...]`.
/// Exit status 0 on success, 1 on non-convergence, 2 on configuration or mesh errors.
int cli_main(int argc, char** argv);

}  // namespace hdg
