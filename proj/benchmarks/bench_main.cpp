#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "lrtc/fft.hpp"
#include "lrtc/mri_sim.hpp"
#include "lrtc/sampling.hpp"
#include "lrtc/solver.hpp"

using namespace lrtc;

namespace {

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = Complex(g(rng), g(rng));
  return m;
}

ProblemSpec cartesian_problem(std::size_t n, SolverKind kind) {
  const PhantomSpec ps{Shape{n, n, 8}, {3, 3, 3}, 0.0, 0.0, 1};
  const Phantom ph = synth_ground_truth(ps);
  auto p = ProblemSpec::with_defaults(init_cartesian_mask({ps.shape, 0, 0.1, 0.2, 2}, ph.kspace), kind);
  return p;
}

}  // namespace

static void BM_Svd(benchmark::State& state) {
  const auto n = state.range(0);
  const Matrix m = random_matrix(n, n * 8, 3);
  for (auto _ : state) benchmark::DoNotOptimize(svd(m));
}
BENCHMARK(BM_Svd)->Arg(16)->Arg(32)->Arg(64);

static void BM_Svt(benchmark::State& state) {
  const auto n = state.range(0);
  const Matrix m = random_matrix(n, n * 8, 4);
  for (auto _ : state) benchmark::DoNotOptimize(svt(m, 1.0));
}
BENCHMARK(BM_Svt)->Arg(16)->Arg(32)->Arg(64);

static void BM_FftForward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  DenseTensor t(Shape{n, n, 10});
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  for (auto& z : t.data()) z = Complex(g(rng), g(rng));
  for (auto _ : state) benchmark::DoNotOptimize(fft_forward(t));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(t.size()));
}
BENCHMARK(BM_FftForward)->Arg(32)->Arg(64)->Arg(256);

static void BM_AdmmSweep(benchmark::State& state) {
  const auto p = cartesian_problem(static_cast<std::size_t>(state.range(0)), SolverKind::Admm);
  SolverState st = init_state(p);
  for (auto _ : state) st = admm_sweep(std::move(st), p);
}
BENCHMARK(BM_AdmmSweep)->Arg(16)->Arg(24)->Arg(48);

static void BM_BcdSweep(benchmark::State& state) {
  const auto p = cartesian_problem(static_cast<std::size_t>(state.range(0)), SolverKind::Bcd);
  SolverState st = init_state(p);
  for (auto _ : state) st = bcd_sweep(std::move(st), p);
}
BENCHMARK(BM_BcdSweep)->Arg(16)->Arg(24)->Arg(48);

static void BM_Utilities(benchmark::State& state) {
  auto p = cartesian_problem(static_cast<std::size_t>(state.range(0)), SolverKind::Admm);
  p.max_sweeps = 10;
  const auto res = solve(p);
  const auto patterns = enumerate_fiber_patterns(p.shape, 0, p.omega);
  for (auto _ : state) {
    const auto var = variance_utility(res.modes);
    const auto lev = leverage_utility(res.state, p);
    const auto both = combine_utilities(var, lev, Combine::Product);
    benchmark::DoNotOptimize(select_batch(both, patterns, 4));
  }
}
BENCHMARK(BM_Utilities)->Arg(16)->Arg(24)->Arg(48);
BENCHMARK_MAIN();
