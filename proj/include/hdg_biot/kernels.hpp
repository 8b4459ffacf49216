#pragma once

#include "hdg_biot/types.hpp"

#include <span>
#include <vector>

namespace hdg {

/// Serial loops are the reference; parallel loops must reproduce them up to
/// floating-point summation order within a row.
enum class Execution { serial, parallel };

/// Index lists stored back to back (one list per cell).
struct IndexLists {
  std::vector<int> ptr{0};
  std::vector<int> idx;

  int size() const { return static_cast<int>(ptr.size()) - 1; }
  std::span<const int> operator[](int i) const {
    return {idx.data() + ptr[i], static_cast<std::size_t>(ptr[i + 1] - ptr[i])};
  }
  void push(std::span<const int> list) {
    idx.insert(idx.end(), list.begin(), list.end());
    ptr.push_back(static_cast<int>(idx.size()));
  }
};

/// Greedy coloring such that no two lists of one color share an index >= 0.
/// Returns the lists grouped by color, in ascending order within a color.
std::vector<std::vector<int>> color_lists(const IndexLists& lists, int num_indices);

/// Square CSR matrix whose pattern is the union of dense cliques over each
/// list (negative indices are skipped), plus the diagonal.
SpMat clique_pattern(const IndexLists& lists, int n);

/// Adds a dense block into an existing pattern; entries with a negative row or
/// column index are dropped. Throws if a target entry is missing from the pattern.
void add_block(SpMat& A, std::span<const int> rows, std::span<const int> cols, const Mat& block);

/// y = A x.
void spmv(const SpMat& A, const Vec& x, Vec& y, Execution exec = Execution::parallel);

/// Number of OpenMP threads a parallel loop will use (1 without OpenMP).
int max_threads();

/// Runs body(i) for every item, color by color. Within a color items are
/// processed concurrently under Execution::parallel, in natural order otherwise.
template <class Body>
void for_each_colored(const std::vector<std::vector<int>>& colors, Execution exec, Body&& body) {
  for (const auto& group : colors) {
    const long count = static_cast<long>(group.size());
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
      for (long i = 0; i < count; ++i) body(group[i]);
    } else {
      for (long i = 0; i < count; ++i) body(group[i]);
    }
  }
}

/// Serial reference traversal: body(i) for i = 0..count-1.
template <class Body>
void for_each_serial(int count, Body&& body) {
  for (int i = 0; i < count; ++i) body(i);
}

}  // namespace hdg
