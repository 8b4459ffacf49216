#include "hdg_biot/krylov.hpp"

#include <Eigen/CholmodSupport>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

namespace hdg {

SolveReport minres(const LinearOperator& A, const LinearOperator& Pinv, const Vec& b, Vec& x, double rel_tol,
                   int max_iter) {
  const auto start = std::chrono::steady_clock::now();
  SolveReport rep;
  const Eigen::Index n = b.size();
  x = Vec::Zero(n);
  auto finish = [&](SolveStatus s) {
    rep.status = s;
    rep.converged = s == SolveStatus::converged;
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
  };

  Vec r1 = b, r2 = b, y, v(n), w = Vec::Zero(n), w1(n), w2 = Vec::Zero(n);
  Pinv(r1, y);
  double beta1 = r1.dot(y);
  if (beta1 < 0) return finish(SolveStatus::breakdown);
  beta1 = std::sqrt(beta1);
  if (beta1 == 0.0) {
    rep.relative_residual = 0.0;
    return finish(SolveStatus::converged);
  }

  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs = -1.0, sn = 0.0;
  const double tiny = std::numeric_limits<double>::epsilon();
  for (int itn = 1; itn <= max_iter; ++itn) {
    v = y / beta;
    A(v, y);
    if (itn >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1.swap(r2);
    r2 = y;
    Pinv(r2, y);
    oldb = beta;
    const double bb = r2.dot(y);
    if (bb < 0) {
      rep.iterations = itn;
      return finish(SolveStatus::breakdown);
    }
    beta = std::sqrt(bb);

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), tiny);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1.swap(w2);
    w2.swap(w);
    w = (v - oldeps * w1 - delta * w2) / gamma;
    x += phi * w;

    rep.iterations = itn;
    rep.relative_residual = phibar / beta1;
    rep.history.push_back(rep.relative_residual);
    if (rep.relative_residual <= rel_tol) return finish(SolveStatus::converged);
    if (beta == 0.0) return finish(SolveStatus::converged);
  }
  return finish(SolveStatus::max_iterations);
}

struct SpdFactor::Impl {
  Eigen::SparseMatrix<double> matrix;
  std::unique_ptr<Eigen::CholmodSupernodalLLT<Eigen::SparseMatrix<double>>> super;
  std::unique_ptr<Eigen::CholmodSimplicialLLT<Eigen::SparseMatrix<double>>> simplicial;

  // The supernodal factor runs through BLAS; a misconfigured BLAS shows up as a
  // failed or inaccurate factor, in which case the BLAS-free simplicial one is used.
  bool supernodal_ok() const {
    if (super->info() != Eigen::Success) return false;
    const Vec b = Vec::Ones(matrix.rows());
    const Vec x = super->solve(b);
    const double res = (matrix * x - b).norm();
    return std::isfinite(res) && res <= 1e-6 * b.norm();
  }

  Vec solve(const Vec& b) const { return super ? Vec(super->solve(b)) : Vec(simplicial->solve(b)); }
};

SpdFactor::SpdFactor(const SpMat& M) : impl_(std::make_unique<Impl>()), n_(static_cast<int>(M.rows())) {
  if (M.rows() != M.cols()) throw Error("sparse_spd_factorize: matrix is not square");
  if (n_ == 0) return;
  impl_->matrix = M;
  impl_->matrix.makeCompressed();
  impl_->super = std::make_unique<Eigen::CholmodSupernodalLLT<Eigen::SparseMatrix<double>>>();
  impl_->super->cholmod().print = 0;
  impl_->super->compute(impl_->matrix);
  if (impl_->supernodal_ok()) return;
  impl_->super.reset();
  impl_->simplicial = std::make_unique<Eigen::CholmodSimplicialLLT<Eigen::SparseMatrix<double>>>();
  impl_->simplicial->cholmod().print = 0;
  impl_->simplicial->compute(impl_->matrix);
  if (impl_->simplicial->info() != Eigen::Success)
    throw NotPositiveDefinite("sparse_spd_factorize: non-positive pivot, matrix is not positive definite");
}

SpdFactor::~SpdFactor() = default;

void SpdFactor::solve(const Vec& b, Vec& x) const {
  if (b.size() != n_) throw Error("SpdFactor::solve: size mismatch");
  if (n_ == 0) {
    x.resize(0);
    return;
  }
  std::lock_guard<std::mutex> lock(mutex_);
  x = impl_->solve(b);
}

Vec SpdFactor::solve(const Vec& b) const {
  Vec x;
  solve(b, x);
  return x;
}

std::unique_ptr<SpdFactor> sparse_spd_factorize(const SpMat& M) { return std::make_unique<SpdFactor>(M); }

Vec sparse_lu_solve(const SpMat& A, const Vec& b) {
  Eigen::SparseMatrix<double> cm = A;
  cm.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(cm);
  lu.factorize(cm);
  if (lu.info() != Eigen::Success) throw Error("sparse_lu_solve: factorization failed: " + lu.lastErrorMessage());
  return lu.solve(b);
}

namespace {

SpectrumReport from_values(const Vec& ev, bool dense) {
  SpectrumReport r;
  r.dense = dense;
  r.eigenvalues = ev;
  r.min = ev.minCoeff();
  r.max = ev.maxCoeff();
  const double amax = ev.cwiseAbs().maxCoeff();
  r.max_abs = amax;
  r.min_abs = amax;
  for (double e : ev)
    if (std::abs(e) > 1e-12 * amax) r.min_abs = std::min(r.min_abs, std::abs(e));
  return r;
}

// Lanczos on a B-self-adjoint operator with full reorthogonalisation; returns Ritz values.
Vec lanczos_ritz(const LinearOperator& op, const SpMat& B, int n, int max_steps) {
  std::mt19937 gen(12345);
  std::normal_distribution<double> dist;
  Vec q(n);
  for (int i = 0; i < n; ++i) q[i] = dist(gen);
  std::vector<Vec> Q, BQ;
  Vec bq = B * q;
  q /= std::sqrt(q.dot(bq));
  bq = B * q;
  std::vector<double> alpha, beta;
  Vec w, ritz, prev;
  const int steps = std::min(n, max_steps);
  for (int j = 0; j < steps; ++j) {
    Q.push_back(q);
    BQ.push_back(bq);
    op(q, w);
    const double a = bq.dot(w);
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t i = 0; i < Q.size(); ++i) w -= BQ[i].dot(w) * Q[i];
    const Vec bw = B * w;
    const double b = std::sqrt(std::max(w.dot(bw), 0.0));

    const int m = static_cast<int>(alpha.size());
    Mat T = Mat::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    ritz = Eigen::SelfAdjointEigenSolver<Mat>(T, Eigen::EigenvaluesOnly).eigenvalues();
    if (j >= 10 && prev.size() > 0) {
      const double scale = ritz.cwiseAbs().maxCoeff();
      if (std::abs(ritz[0] - prev[0]) <= 1e-9 * scale && std::abs(ritz[m - 1] - prev[m - 2]) <= 1e-9 * scale) break;
    }
    prev = ritz;
    if (b <= 1e-14 * std::abs(a) || b == 0.0) break;
    beta.push_back(b);
    q = w / b;
    bq = bw / b;
  }
  return ritz;
}

}  // namespace

SpectrumReport generalized_extreme_eigs(const Mat& A, const Mat& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw Error("generalized_extreme_eigs: dimension mismatch");
  if (A.rows() == 0) throw Error("generalized_extreme_eigs: empty matrices");
  Eigen::LLT<Mat> llt(B);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("generalized_extreme_eigs: B is not positive definite");
  const Mat Lm = llt.matrixL();
  // L^{-1} A L^{-T}
  Mat C = Lm.triangularView<Eigen::Lower>().solve(A);
  C = Lm.triangularView<Eigen::Lower>().solve(C.transpose()).transpose();
  C = 0.5 * (C + C.transpose()).eval();
  const Vec ev = Eigen::SelfAdjointEigenSolver<Mat>(C, Eigen::EigenvaluesOnly).eigenvalues();
  return from_values(ev, true);
}

SpectrumReport generalized_extreme_eigs(const SpMat& A, const SpMat& B, int dense_limit) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw Error("generalized_extreme_eigs: dimension mismatch");
  const int n = static_cast<int>(A.rows());
  if (n <= dense_limit) return generalized_extreme_eigs(Mat(A), Mat(B));

  SpdFactor bf(B);  // throws when B is indefinite
  LinearOperator binv_a = [&](const Vec& x, Vec& y) {
    const Vec ax = A * x;
    bf.solve(ax, y);
  };
  Eigen::SparseMatrix<double> acm = A;
  acm.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(acm);
  if (lu.info() != Eigen::Success) throw Error("generalized_extreme_eigs: A is singular");
  LinearOperator ainv_b = [&](const Vec& x, Vec& y) { y = lu.solve(B * x); };

  const Vec top = lanczos_ritz(binv_a, B, n, 400);
  const Vec inv = lanczos_ritz(ainv_b, B, n, 400);
  SpectrumReport r;
  r.dense = false;
  r.min = top.minCoeff();
  r.max = top.maxCoeff();
  r.max_abs = top.cwiseAbs().maxCoeff();
  r.min_abs = 1.0 / inv.cwiseAbs().maxCoeff();
  return r;
}

}  // namespace hdg
