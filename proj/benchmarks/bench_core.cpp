#include <benchmark/benchmark.h>

#include <vector>

#include "adiaq/builders.hpp"
#include "adiaq/positivity.hpp"
#include "adiaq/spectral.hpp"

namespace {

using namespace adiaq;

void bm_matvec_separable(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto h0 = build_h0(TransverseFieldSpec{n, {}});
  std::vector<double> in(dimension(n), 1.0), out(dimension(n));
  for (auto _ : state) {
    h0.apply(in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(dimension(n)));
}
BENCHMARK(bm_matvec_separable)->Arg(10)->Arg(14)->Arg(18);

void bm_matvec_interpolated(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto fam = build_separable_pair(n);
  auto h = fam.at(0.5);
  std::vector<double> in(dimension(n), 1.0), out(dimension(n));
  for (auto _ : state) {
    h.apply(in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(dimension(n)));
}
BENCHMARK(bm_matvec_interpolated)->Arg(10)->Arg(14)->Arg(18);

void bm_lowest_two(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto fam = build_separable_pair(n);
  auto h = fam.at(0.5);
  LanczosOptions opts;
  for (auto _ : state) {
    auto r = lowest_two(h, opts);
    benchmark::DoNotOptimize(r.e0);
  }
}
BENCHMARK(bm_lowest_two)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void bm_trotter_apply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto fam = build_separable_pair(n);
  TrotterApproximant product(fam, 0.5, 64);
  std::vector<double> in(dimension(n), 1.0), out(dimension(n));
  for (auto _ : state) {
    product.apply(in, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(bm_trotter_apply)->Arg(8)->Arg(10)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
