#include "hdg_biot/kernels.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hdg {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::vector<std::vector<int>> color_lists(const IndexLists& lists, int num_indices) {
  std::vector<std::vector<int>> users(num_indices);
  for (int c = 0; c < lists.size(); ++c)
    for (int i : lists[c])
      if (i >= 0 && (users[i].empty() || users[i].back() != c)) users[i].push_back(c);

  std::vector<int> color(lists.size(), -1);
  std::vector<int> mark;
  int num_colors = 0;
  for (int c = 0; c < lists.size(); ++c) {
    for (int i : lists[c]) {
      if (i < 0) continue;
      for (int other : users[i])
        if (color[other] >= 0) {
          if (static_cast<int>(mark.size()) <= color[other]) mark.resize(color[other] + 1, -1);
          mark[color[other]] = c;
        }
    }
    int chosen = 0;
    while (chosen < static_cast<int>(mark.size()) && mark[chosen] == c) ++chosen;
    color[c] = chosen;
    num_colors = std::max(num_colors, chosen + 1);
  }
  std::vector<std::vector<int>> groups(num_colors);
  for (int c = 0; c < lists.size(); ++c) groups[color[c]].push_back(c);
  return groups;
}

SpMat clique_pattern(const IndexLists& lists, int n) {
  std::vector<std::vector<int>> rows(n);
  for (int i = 0; i < n; ++i) rows[i].push_back(i);
  for (int c = 0; c < lists.size(); ++c) {
    const auto l = lists[c];
    for (int r : l) {
      if (r < 0) continue;
      for (int s : l)
        if (s >= 0) rows[r].push_back(s);
    }
  }
  SpMat A(n, n);
  std::vector<int> outer(n + 1, 0);
  std::size_t nnz = 0;
  for (int i = 0; i < n; ++i) {
    std::sort(rows[i].begin(), rows[i].end());
    rows[i].erase(std::unique(rows[i].begin(), rows[i].end()), rows[i].end());
    nnz += rows[i].size();
  }
  A.resizeNonZeros(static_cast<Eigen::Index>(nnz));
  int* op = A.outerIndexPtr();
  int* ip = A.innerIndexPtr();
  double* vp = A.valuePtr();
  op[0] = 0;
  for (int i = 0; i < n; ++i) {
    std::copy(rows[i].begin(), rows[i].end(), ip + op[i]);
    op[i + 1] = op[i] + static_cast<int>(rows[i].size());
    std::vector<int>().swap(rows[i]);
  }
  std::fill(vp, vp + nnz, 0.0);
  return A;
}

void add_block(SpMat& A, std::span<const int> rows, std::span<const int> cols, const Mat& block) {
  const int* op = A.outerIndexPtr();
  const int* ip = A.innerIndexPtr();
  double* vp = A.valuePtr();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int r = rows[i];
    if (r < 0) continue;
    const int* begin = ip + op[r];
    const int* end = ip + op[r + 1];
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const int c = cols[j];
      if (c < 0) continue;
      const double v = block(i, j);
      if (v == 0.0) continue;
      const int* pos = std::lower_bound(begin, end, c);
      if (pos == end || *pos != c) throw Error("add_block: entry outside the sparsity pattern");
      vp[pos - ip] += v;
    }
  }
}

void spmv(const SpMat& A, const Vec& x, Vec& y, Execution exec) {
  const long n = A.rows();
  y.resize(n);
  const int* op = A.outerIndexPtr();
  const int* ip = A.innerIndexPtr();
  const double* vp = A.valuePtr();
  const double* xp = x.data();
  double* yp = y.data();
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = op[i]; k < op[i + 1]; ++k) s += vp[k] * xp[ip[k]];
      yp[i] = s;
    }
  } else {
    for (long i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = op[i]; k < op[i + 1]; ++k) s += vp[k] * xp[ip[k]];
      yp[i] = s;
    }
  }
}

}  // namespace hdg
