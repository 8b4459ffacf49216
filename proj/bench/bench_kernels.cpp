// Serial reference versus OpenMP kernels: monolithic assembly, streaming
// condensation, preconditioner blocks and the sparse matrix-vector product.
// Arguments: dimension flag (0: 2D square, 1: 3D cube) and execution (0: serial, 1: OpenMP).

#include "hdg_biot/problems.hpp"

#include <benchmark/benchmark.h>

#include <map>

using namespace hdg;

namespace {

struct Setup {
  Mesh mesh;
  ModelParams params;
  Spaces spaces;
  Loads loads;
};

const Setup& setup(int dim) {
  static std::map<int, Setup> cache;
  auto it = cache.find(dim);
  if (it == cache.end()) {
    Mesh mesh = unit_box_mesh(dim, dim == 2 ? 32 : 6);
    const ModelParams params = ModelParams::with_defaults(dim, 2, 1.0, 10.0, 0.1, 1e-4, 0.1);
    const ExactSolution e = manufactured_solution(params);
    Spaces spaces = manufactured_spaces(mesh, 2, TraceVariant::hdg, e);
    Loads loads;
    loads.body_force = e.f;
    loads.source = e.g;
    it = cache.emplace(dim, Setup{std::move(mesh), params, std::move(spaces), loads}).first;
  }
  return it->second;
}

Execution exec_of(const benchmark::State& state) { return state.range(1) ? Execution::parallel : Execution::serial; }

void label(benchmark::State& state) {
  state.SetLabel(std::string(state.range(0) ? "3d" : "2d") + (state.range(1) ? " omp" : " serial"));
}

void BM_assemble(benchmark::State& state) {
  const Setup& s = setup(state.range(0) ? 3 : 2);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_biot(s.mesh, s.spaces, s.params, s.loads, exec_of(state)));
  label(state);
}

void BM_condense(benchmark::State& state) {
  const Setup& s = setup(state.range(0) ? 3 : 2);
  CondenseOptions opt;
  opt.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(condense_biot(s.mesh, s.spaces, s.params, s.loads, opt));
  label(state);
}

void BM_preconditioner_blocks(benchmark::State& state) {
  const Setup& s = setup(state.range(0) ? 3 : 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(reduced_preconditioner_blocks(s.mesh, s.spaces, s.params, PcVariant::Phat, exec_of(state)));
  label(state);
}

void BM_spmv(benchmark::State& state) {
  const Setup& s = setup(state.range(0) ? 3 : 2);
  static std::map<int, CondensedSystem> systems;
  auto it = systems.find(int(state.range(0)));
  if (it == systems.end()) it = systems.emplace(int(state.range(0)), condense_biot(s.mesh, s.spaces, s.params, s.loads)).first;
  const SpMat& A = it->second.matrix;
  const Vec x = Vec::Ones(A.cols());
  Vec y(A.rows());
  for (auto _ : state) {
    spmv(A, x, y, exec_of(state));
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * A.nonZeros());
  label(state);
}

const std::vector<std::vector<int64_t>> grid{{0, 1}, {0, 1}};

}  // namespace

BENCHMARK(BM_assemble)->ArgsProduct(grid)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_condense)->ArgsProduct(grid)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_preconditioner_blocks)->ArgsProduct(grid)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_spmv)->ArgsProduct(grid)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
