#pragma once

#include "hdg_biot/types.hpp"

#include <functional>
#include <memory>
#include <mutex>
#include <vector>

namespace hdg {

/// y = Op(x); y is resized by the callee.
using LinearOperator = std::function<void(const Vec& x, Vec& y)>;

enum class SolveStatus { converged, max_iterations, breakdown };

struct SolveReport {
  int iterations = 0;
  std::vector<double> history;  // relative preconditioned residual after each iteration
  bool converged = false;
  SolveStatus status = SolveStatus::max_iterations;
  double relative_residual = 1.0;
  double seconds = 0.0;
};

/// Preconditioned MINRES with zero initial guess. Stops when
/// sqrt(r^T P^{-1} r) / sqrt(b^T P^{-1} b) <= rel_tol.
SolveReport minres(const LinearOperator& A, const LinearOperator& Pinv, const Vec& b, Vec& x, double rel_tol,
                   int max_iter);

/// Raised when a Cholesky factorisation meets a non-positive pivot.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// Sparse Cholesky factor of a symmetric positive definite matrix.
class SpdFactor {
 public:
  explicit SpdFactor(const SpMat& M);
  ~SpdFactor();
  SpdFactor(const SpdFactor&) = delete;
  SpdFactor& operator=(const SpdFactor&) = delete;

  int size() const { return n_; }
  void solve(const Vec& b, Vec& x) const;
  Vec solve(const Vec& b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_ = 0;
  mutable std::mutex mutex_;  // the factor's workspace is shared between solves
};

std::unique_ptr<SpdFactor> sparse_spd_factorize(const SpMat& M);

/// Direct solve of a general sparse system by sparse LU.
Vec sparse_lu_solve(const SpMat& A, const Vec& b);

/// Extreme generalized eigenvalues of A x = lambda B x (A symmetric, B SPD).
struct SpectrumReport {
  double min = 0.0, max = 0.0;          // algebraic extremes
  double min_abs = 0.0, max_abs = 0.0;  // over the nonzero spectrum
  bool dense = false;
  Vec eigenvalues;  // full spectrum on the dense path
  double condition() const { return max_abs / min_abs; }
};

SpectrumReport generalized_extreme_eigs(const SpMat& A, const SpMat& B, int dense_limit = 600);
SpectrumReport generalized_extreme_eigs(const Mat& A, const Mat& B);

}  // namespace hdg
