#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "dropsvm/design.hpp"
#include "dropsvm/kernels.hpp"
#include "dropsvm/noise.hpp"
#include "dropsvm/synth.hpp"

using namespace dropsvm;

namespace {

struct Fixture {
  CorruptedDesign design;
  std::vector<double> weights, targets, w;
};

// Redundant-sparse training set under dropout, sized by the benchmark range.
const Fixture& fixture(std::size_t n) {
  static std::vector<std::pair<std::size_t, Fixture>> cache;
  for (const auto& [size, f] : cache)
    if (size == n) return f;
  auto data = make_redundant_sparse(n, 1, 17).train;
  const std::size_t d = data.dim();
  std::vector<CorruptionMoments> ms;
  for (const auto& x : data.examples()) {
    ms.push_back(moments(NoiseSpec::dropout(0.5), x, d));
    append_offset(ms.back(), d);
  }
  Fixture f{CorruptedDesign(ms, d + 1), {}, {}, {}};
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> pos(0.1, 3.0);
  for (std::size_t i = 0; i < n; ++i) {
    f.weights.push_back(pos(rng));
    f.targets.push_back(g(rng));
  }
  for (std::size_t j = 0; j <= d; ++j) f.w.push_back(g(rng));
  cache.emplace_back(n, std::move(f));
  return cache.back().second;
}

template <bool Parallel>
void BM_RowMoments(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto r = Parallel ? kernels::row_moments(f.design, f.w) : kernels::serial::row_moments(f.design, f.w);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_NormalEquations(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto r = Parallel ? kernels::normal_equations(f.design, f.weights, f.targets, 1.0)
                      : kernels::serial::normal_equations(f.design, f.weights, f.targets, 1.0);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_WlsValueGradient(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  std::vector<double> grad(f.w.size());
  for (auto _ : state) {
    double v = Parallel ? kernels::wls_value_gradient(f.design, f.weights, f.targets, 1.0, f.w, grad)
                        : kernels::serial::wls_value_gradient(f.design, f.weights, f.targets, 1.0, f.w, grad);
    benchmark::DoNotOptimize(v);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_RowMoments<false>)->Name("row_moments/serial")->Arg(1000)->Arg(10000);
BENCHMARK(BM_RowMoments<true>)->Name("row_moments/parallel")->Arg(1000)->Arg(10000);
BENCHMARK(BM_NormalEquations<false>)->Name("normal_equations/serial")->Arg(1000)->Arg(10000);
BENCHMARK(BM_NormalEquations<true>)->Name("normal_equations/parallel")->Arg(1000)->Arg(10000);
BENCHMARK(BM_WlsValueGradient<false>)->Name("wls_value_gradient/serial")->Arg(1000)->Arg(10000);
BENCHMARK(BM_WlsValueGradient<true>)->Name("wls_value_gradient/parallel")->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();
