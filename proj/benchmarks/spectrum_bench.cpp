#include <benchmark/benchmark.h>

#include "grm/spectrum.hpp"
#include "grm/structure.hpp"

using namespace grm;

namespace {

void BM_EnumerateSpectrum(benchmark::State& state) {
    CodeParams params{FieldParams(static_cast<int>(state.range(0))),
                      static_cast<int>(state.range(1)), static_cast<int>(state.range(2))};
    int workers = static_cast<int>(state.range(3));
    for (auto _ : state) {
        WeightSpectrum spectrum = enumerate_spectrum(params, {}, workers);
        benchmark::DoNotOptimize(spectrum.counts);
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            params.codeword_count().get_si());
}

void BM_Weight(benchmark::State& state) {
    FieldParams f2(2);
    int m = static_cast<int>(state.range(0));
    Polynomial f(f2, m);
    for (int i = 0; i + 1 < m; i += 2) {
        Exponents e(static_cast<size_t>(m), 0);
        e[static_cast<size_t>(i)] = 1;
        e[static_cast<size_t>(i + 1)] = 1;
        f.add_term(e, 1);
    }
    for (auto _ : state) {
        auto result = weight(f);
        benchmark::DoNotOptimize(result.first);
    }
}

void BM_RankFastPath(benchmark::State& state) {
    FieldParams f2(2);
    int m = static_cast<int>(state.range(0));
    Polynomial f(f2, m);
    for (int i = 0; i + 1 < m; i += 2) {
        Exponents e(static_cast<size_t>(m), 0);
        e[static_cast<size_t>(i)] = 1;
        e[static_cast<size_t>(i + 1)] = 1;
        f.add_term(e, 1);
    }
    for (auto _ : state) {
        RankResult result = rank(f, 1);
        benchmark::DoNotOptimize(result.value);
    }
}

}  // namespace

BENCHMARK(BM_EnumerateSpectrum)
    ->Args({2, 2, 4, 1})
    ->Args({2, 2, 6, 1})
    ->Args({2, 3, 5, 1})
    ->Args({2, 3, 5, 4})
    ->Args({3, 2, 3, 1})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Weight)->Arg(6)->Arg(10)->Arg(16);
BENCHMARK(BM_RankFastPath)->Arg(4)->Arg(6)->Arg(8);

BENCHMARK_MAIN();
