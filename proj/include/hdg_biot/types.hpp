#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>

namespace hdg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Point = Eigen::Vector3d;  // unused trailing coordinates are zero in 2D

/// Cell length h_K used by the penalty terms: (d! |K|)^{1/d} (the leg length
/// of a right reference-shaped simplex) or the longest edge.
enum class CellLength { volume, diameter };

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hdg
