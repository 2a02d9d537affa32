// Serial reference vs OpenMP Schur-complement assembly on problems taken from
// the smoothed D_max solver, plus end-to-end solves with each kernel.

#include <benchmark/benchmark.h>

#include <map>

#include "subalg/solver.hpp"

using namespace subalg;

namespace {

struct Instance {
  std::shared_ptr<const SdpProblem> problem;
  std::vector<Mat> x, sinv;
};

// Qubit state to the n-th tensor power against the diagonal algebra.
const Instance& instance(int n) {
  static std::map<int, Instance> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Rng rng(7);
  Mat rho = kron_power(random_state(rng, 2), n);
  auto res = smooth_dmax_subalgebra(rho, tensor_power(make_diagonal(2), n), 0.1);
  Instance inst;
  inst.problem = res.cert->problem;
  inst.x = res.cert->x;
  for (const auto& s : dual_slack(*inst.problem, res.cert->y)) {
    // Interior point: shift the slack away from the boundary before inverting.
    Mat shifted = s + 1e-3 * Mat::Identity(s.rows(), s.cols());
    inst.sinv.push_back(shifted.inverse());
  }
  return cache.emplace(n, std::move(inst)).first->second;
}

void BM_SchurReference(benchmark::State& st) {
  const auto& in = instance(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(schur_reference(*in.problem, in.x, in.sinv));
  st.counters["vars"] = in.problem->num_vars();
}

void BM_SchurParallel(benchmark::State& st) {
  const auto& in = instance(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(schur_parallel(*in.problem, in.x, in.sinv));
  st.counters["vars"] = in.problem->num_vars();
}

void BM_Solve(benchmark::State& st) {
  const auto& in = instance(static_cast<int>(st.range(0)));
  SdpOptions opts;
  opts.parallel = st.range(1) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(solve_sdp(in.problem, opts));
}

}  // namespace

BENCHMARK(BM_SchurReference)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SchurParallel)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Solve)->ArgsProduct({{2, 3}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
