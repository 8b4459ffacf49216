#pragma once

#include "hdg_biot/types.hpp"

#include <string>
#include <vector>

namespace hdg {

/// Coefficients of the time-discrete four-field Biot problem.
///
/// mu is twice the Lame shear modulus and kappa is the time step times the
/// permeability, so both enter the discrete forms directly.
struct ModelParams {
  double mu = 1.0;
  double lambda = 1.0;
  double alpha = 1.0;
  double c0 = 0.0;
  double kappa = 1.0;
  double eta = 8.0;  // interior penalty
  CellLength cell_length = CellLength::volume;  // h_K in the penalty terms
  int k = 2;
  int dim = 2;

  /// Parameters with the default penalty eta = 2 d k^2.
  static ModelParams with_defaults(int dim, int k, double mu, double lambda, double alpha, double c0, double kappa);

  /// Throws hdg::Error on a violated sign constraint.
  void validate() const;
  /// Non-fatal notes, e.g. when mu / lambda exceeds the range covered by the analysis.
  std::vector<std::string> warnings() const;
};

inline double default_penalty(int dim, int k) { return 2.0 * dim * k * k; }

/// Plane-strain Lame parameters from Young's modulus and Poisson's ratio.
struct LameParameters {
  double lambda;
  double shear;  // the physical shear modulus; ModelParams::mu is twice this
};
LameParameters lame_from_young(double young, double poisson);

}  // namespace hdg
