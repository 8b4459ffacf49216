#include "doctest.h"

#include "hdg_biot/krylov.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

using namespace hdg;

namespace {

LinearOperator matrix_op(const SpMat& A) {
  return [&A](const Vec& x, Vec& y) { y = A * x; };
}

LinearOperator identity_op() {
  return [](const Vec& x, Vec& y) { y = x; };
}

SpMat diagonal(const std::vector<double>& d) {
  SpMat A(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) A.insert(int(i), int(i)) = d[i];
  A.makeCompressed();
  return A;
}

// Symmetric indefinite saddle-point test matrix [K B^T; B -C].
SpMat saddle(int n, int m, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 4.0);
    if (i + 1 < n) {
      t.emplace_back(i, i + 1, -1.0);
      t.emplace_back(i + 1, i, -1.0);
    }
  }
  for (int j = 0; j < m; ++j) {
    for (int r = 0; r < 3; ++r) {
      const int i = (j * 7 + r * 5) % n;
      const double v = U(gen);
      t.emplace_back(n + j, i, v);
      t.emplace_back(i, n + j, v);
    }
    t.emplace_back(n + j, n + j, -0.1);
  }
  SpMat A(n + m, n + m);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

}  // namespace

TEST_CASE("minres on the identity converges in one step") {
  const SpMat I = diagonal(std::vector<double>(5, 1.0));
  Vec b(5);
  b << 1, 2, 3, 4, 5;
  Vec x;
  const SolveReport r = minres(matrix_op(I), identity_op(), b, x, 1e-12, 10);
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  CHECK((x - b).norm() < 1e-14);
}

TEST_CASE("minres on an indefinite diagonal") {
  const SpMat D = diagonal({1.0, -1.0});
  Vec b(2);
  b << 1, 1;
  Vec x;
  const SolveReport r = minres(matrix_op(D), identity_op(), b, x, 1e-12, 10);
  CHECK(r.converged);
  CHECK(r.iterations <= 2);
  CHECK(std::abs(x[0] - 1.0) < 1e-12);
  CHECK(std::abs(x[1] + 1.0) < 1e-12);
}

TEST_CASE("zero right-hand side") {
  const SpMat I = diagonal({2.0, 3.0});
  Vec x;
  const SolveReport r = minres(matrix_op(I), identity_op(), Vec::Zero(2), x, 1e-8, 10);
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(x.norm() == 0.0);
}

TEST_CASE("preconditioned minres: monotone residual, finite termination, direct agreement") {
  const SpMat A = saddle(40, 15, 1);
  const Vec b = Vec::LinSpaced(A.rows(), -1.0, 2.0);
  // block-diagonal SPD preconditioner |diag|
  Vec d = Mat(A).diagonal().cwiseAbs();
  const LinearOperator P = [&](const Vec& r, Vec& z) { z = r.cwiseQuotient(d); };
  Vec x;
  const SolveReport rep = minres(matrix_op(A), P, b, x, 1e-10, 1000);
  CHECK(rep.converged);
  CHECK(rep.status == SolveStatus::converged);
  CHECK(rep.iterations <= A.rows() + 5);
  for (std::size_t i = 1; i < rep.history.size(); ++i) CHECK(rep.history[i] <= rep.history[i - 1] * (1 + 1e-12));
  const Vec xd = sparse_lu_solve(A, b);
  CHECK((x - xd).norm() <= 1e-7 * xd.norm());
  CHECK(rep.seconds >= 0.0);

  Vec y;
  const SolveReport capped = minres(matrix_op(A), P, b, y, 1e-14, 3);
  CHECK_FALSE(capped.converged);
  CHECK(capped.status == SolveStatus::max_iterations);
  CHECK(capped.iterations == 3);
}

TEST_CASE("indefinite preconditioner is a breakdown") {
  const SpMat I = diagonal({1.0, 1.0, 1.0});
  const LinearOperator bad = [](const Vec& r, Vec& z) { z = -r; };
  Vec x;
  const SolveReport r = minres(matrix_op(I), bad, Vec::Ones(3), x, 1e-8, 10);
  CHECK(r.status == SolveStatus::breakdown);
  CHECK_FALSE(r.converged);
}

TEST_CASE("sparse Cholesky") {
  const SpMat A = diagonal({4.0, 9.0, 1.0});
  SpdFactor f(A);
  CHECK(f.size() == 3);
  const Vec x = f.solve(Vec::Ones(3));
  CHECK(std::abs(x[1] - 1.0 / 9.0) < 1e-15);
  CHECK_THROWS_AS(SpdFactor(diagonal({1.0, -1.0})), NotPositiveDefinite);
  CHECK_THROWS_AS(f.solve(Vec::Ones(2)), Error);
  SpMat rect(2, 3);
  CHECK_THROWS_AS(SpdFactor{rect}, Error);

  // larger SPD system through the factory
  const int n = 400;
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.5);
    if (i + 1 < n) {
      t.emplace_back(i, i + 1, -1.0);
      t.emplace_back(i + 1, i, -1.0);
    }
    if (i + 20 < n) {
      t.emplace_back(i, i + 20, -0.2);
      t.emplace_back(i + 20, i, -0.2);
    }
  }
  SpMat L(n, n);
  L.setFromTriplets(t.begin(), t.end());
  const auto F = sparse_spd_factorize(L);
  const Vec b = Vec::Random(n);
  CHECK((L * F->solve(b) - b).norm() <= 1e-12 * b.norm());
}

TEST_CASE("generalized eigenvalues") {
  // A = diag(1, 4), B = I: {1, 4}
  const SpectrumReport s = generalized_extreme_eigs(Mat(diagonal({1.0, 4.0})), Mat(diagonal({1.0, 1.0})));
  CHECK(s.min == doctest::Approx(1.0));
  CHECK(s.max == doctest::Approx(4.0));
  CHECK(s.condition() == doctest::Approx(4.0));
  // indefinite A = diag(-2, 1, 3), B = diag(1, 1, 2): {-2, 1, 1.5}
  const SpectrumReport t = generalized_extreme_eigs(diagonal({-2.0, 1.0, 3.0}), diagonal({1.0, 1.0, 2.0}));
  CHECK(t.min == doctest::Approx(-2.0));
  CHECK(t.max == doctest::Approx(1.5));
  CHECK(t.min_abs == doctest::Approx(1.0));
  CHECK(t.max_abs == doctest::Approx(2.0));
  CHECK_THROWS_AS(generalized_extreme_eigs(Mat(diagonal({1.0})), Mat(diagonal({-1.0}))), NotPositiveDefinite);
  CHECK_THROWS_AS(generalized_extreme_eigs(Mat(diagonal({1.0})), Mat(diagonal({1.0, 1.0}))), Error);
}

TEST_CASE("Lanczos path agrees with the dense path") {
  const SpMat A = saddle(300, 120, 9);
  const Vec bd = Vec::LinSpaced(A.rows(), 1.0, 3.0);
  const SpMat B = diagonal(std::vector<double>(bd.data(), bd.data() + bd.size()));
  const SpectrumReport dense = generalized_extreme_eigs(A, B, 1000);
  const SpectrumReport lanczos = generalized_extreme_eigs(A, B, 10);
  CHECK(dense.dense);
  CHECK_FALSE(lanczos.dense);
  CHECK(lanczos.max == doctest::Approx(dense.max).epsilon(1e-8));
  CHECK(lanczos.min == doctest::Approx(dense.min).epsilon(1e-8));
  CHECK(lanczos.max_abs == doctest::Approx(dense.max_abs).epsilon(1e-8));
  CHECK(lanczos.min_abs == doctest::Approx(dense.min_abs).epsilon(1e-6));
}
