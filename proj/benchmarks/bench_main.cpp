#include <benchmark/benchmark.h>

#include <persym/analysis.hpp>
#include <persym/gabor.hpp>
#include <persym/oracle.hpp>

using namespace persym;

namespace {

GridSignal gaussian(double T, int N) { return TestSignal::gaussian(1).sample(T, N); }

PeriodicSymbol dense_symbol(int K, std::uint64_t seed) {
    SplitMix64 rng(seed);
    PeriodicSymbol p(PeriodMatrix::identity(2));
    for (const MultiIndex& k : enumerate_truncation(K, 2)) p.coeffs.emplace(k, 0.1 * rng.gaussian());
    return p;
}

}  // namespace

static void BM_Dft(benchmark::State& state) {
    auto f = gaussian(16.0, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto spec = dft(f, FftDirection::forward);
        benchmark::DoNotOptimize(spec.values.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Dft)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

static void BM_FractionalTranslate(benchmark::State& state) {
    auto f = gaussian(16.0, static_cast<int>(state.range(0)));
    std::vector<double> x{0.377};
    for (auto _ : state) {
        auto g = translate(f, x);
        benchmark::DoNotOptimize(g.values.data());
    }
}
BENCHMARK(BM_FractionalTranslate)->RangeMultiplier(2)->Range(256, 4096);

static void BM_ApplySeries(benchmark::State& state) {
    auto f = gaussian(32.0, 512);
    auto p = dense_symbol(static_cast<int>(state.range(0)), 7);
    OperatorSpec spec(p, 0.5, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto g = apply_series(spec, f);
        benchmark::DoNotOptimize(g.values.data());
    }
    state.counters["terms"] = static_cast<double>(p.coeffs.size());
}
BENCHMARK(BM_ApplySeries)->DenseRange(1, 4);

static void BM_NeumannInverse(benchmark::State& state) {
    auto f = gaussian(32.0, 512);
    PeriodicSymbol p(PeriodMatrix::identity(2));
    p.coeffs.emplace(MultiIndex{0, 0}, cplx(1.0, 0.0));
    p.coeffs.emplace(MultiIndex{1, 0}, cplx(0.2, 0.0));
    p.coeffs.emplace(MultiIndex{0, 1}, cplx(0.0, 0.2));
    OperatorSpec spec(p, 0.5, 1);
    PolynomialWeight v0(0.0);
    for (auto _ : state) {
        auto res = neumann_inverse_apply(spec, f, static_cast<int>(state.range(0)), v0, 1.0, 1.0);
        benchmark::DoNotOptimize(res.result.values.data());
    }
}
BENCHMARK(BM_NeumannInverse)->Arg(8)->Arg(16)->Arg(24);

static void BM_FrameOperatorApply(benchmark::State& state) {
    auto g = gaussian(16.0, 256);
    GaborSystem sys(g, 0.5, 0.5, static_cast<int>(state.range(0)));
    FrameOperator S(sys);
    auto f = gaussian(16.0, 256);
    for (auto _ : state) {
        auto sf = S.apply(f);
        benchmark::DoNotOptimize(sf.values.data());
    }
}
BENCHMARK(BM_FrameOperatorApply)->Arg(4)->Arg(8)->Arg(12);

static void BM_Stft(benchmark::State& state) {
    auto g = gaussian(16.0, static_cast<int>(state.range(0)));
    auto f = gaussian(16.0, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto table = stft(f, g, StftGrid::native(f));
        benchmark::DoNotOptimize(table.values.data());
    }
}
BENCHMARK(BM_Stft)->Arg(128)->Arg(256)->Arg(512);

static void BM_GaborSymbol(benchmark::State& state) {
    auto g_eval = gaussian_window_evaluator(1);
    for (auto _ : state) {
        auto cell = gabor_symbol(g_eval, g_eval, 0.5, 0.5, static_cast<int>(state.range(0)), 1, 32);
        benchmark::DoNotOptimize(cell.values.data());
    }
}
BENCHMARK(BM_GaborSymbol)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
