// Serial reference loops against the OpenMP kernels on solver-sized arrays.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "kgl/kernels.hpp"

namespace {

using kgl::kernels::cplx;

std::vector<cplx> sample(std::size_t n, double shift) {
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = cplx(std::sin(0.01 * i + shift), std::cos(0.013 * i - shift));
  return v;
}

template <bool Parallel>
void BM_Cubic(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto u = sample(n, 0.1);
  std::vector<cplx> out(n);
  for (auto _ : state) {
    if constexpr (Parallel) {
      kgl::kernels::cubic(u, out, 3.0);
    } else {
      kgl::kernels::serial::cubic(u, out, 3.0);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

template <bool Parallel>
void BM_Apply2x2(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto a = sample(n, 0.1), b = sample(n, 0.2);
  const auto m00 = sample(n, 0.3), m01 = sample(n, 0.4), m10 = sample(n, 0.5), m11 = sample(n, 0.6);
  for (auto _ : state) {
    if constexpr (Parallel) {
      kgl::kernels::apply_2x2(a, b, m00, m01, m10, m11);
    } else {
      kgl::kernels::serial::apply_2x2(a, b, m00, m01, m10, m11);
    }
    benchmark::DoNotOptimize(a.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

template <bool Parallel>
void BM_PhaseRotate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto v = sample(n, 0.1);
  for (auto _ : state) {
    if constexpr (Parallel) {
      kgl::kernels::phase_rotate(v, 1e-3);
    } else {
      kgl::kernels::serial::phase_rotate(v, 1e-3);
    }
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

template <bool Parallel>
void BM_WeightedSumSq(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto v = sample(n, 0.1);
  std::vector<double> w(n, 0.5);
  for (auto _ : state) {
    double s = Parallel ? kgl::kernels::weighted_sum_sq(v, w) : kgl::kernels::serial::weighted_sum_sq(v, w);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

}  // namespace

BENCHMARK(BM_Cubic<false>)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_Cubic<true>)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_Apply2x2<false>)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_Apply2x2<true>)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_PhaseRotate<false>)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_PhaseRotate<true>)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_WeightedSumSq<false>)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_WeightedSumSq<true>)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);

BENCHMARK_MAIN();
