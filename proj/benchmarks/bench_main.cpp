#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

#include "alphaseed/cross_validation.hpp"
#include "alphaseed/linalg.hpp"
#include "alphaseed/synthetic.hpp"

using namespace alphaseed;

namespace {

struct Fixture {
    Dataset ds;
    KernelEvaluator kern;
    FoldPlan plan;
    FoldTransition trans;
    SvmState prev;
    static constexpr double C = 10.0;

    Fixture()
        : ds(make_blobs({300, 37, 4.0, 2.2})),
          kern(ds, KernelSpec{KernelKind::gaussian, 0.5}, 256u << 20),
          plan(make_folds(ds, 10, 1)),
          trans(make_transition(plan, 1)) {
        std::vector<int> train = trans.shared;
        train.insert(train.end(), trans.removed.begin(), trans.removed.end());
        std::sort(train.begin(), train.end());
        prev = init_state(kern, train, C, std::vector<double>(train.size(), 0.0));
        prev = solve(std::move(prev), kern, SolverConfig{});
    }

    static Fixture& instance() {
        static Fixture f;
        return f;
    }
};

std::vector<int> next_train(const Fixture& f) {
    std::vector<int> ids = f.trans.shared;
    ids.insert(ids.end(), f.trans.added.begin(), f.trans.added.end());
    std::sort(ids.begin(), ids.end());
    return ids;
}

} // namespace

static void BM_KernelRowCold(benchmark::State& state) {
    const Fixture& f = Fixture::instance();
    for (auto _ : state) {
        KernelEvaluator cold(f.ds, f.kern.spec(), 256u << 20);
        benchmark::DoNotOptimize(cold.row(0));
    }
}
BENCHMARK(BM_KernelRowCold);

static void BM_KernelRowHot(benchmark::State& state) {
    const Fixture& f = Fixture::instance();
    f.kern.row(1);
    for (auto _ : state) benchmark::DoNotOptimize(f.kern.row(1));
}
BENCHMARK(BM_KernelRowHot);

static void BM_SolveZeroSeed(benchmark::State& state) {
    const Fixture& f = Fixture::instance();
    const std::vector<int> ids = next_train(f);
    for (auto _ : state) {
        SvmState s = init_state(f.kern, ids, Fixture::C, std::vector<double>(ids.size(), 0.0));
        s = solve(std::move(s), f.kern, SolverConfig{});
        benchmark::DoNotOptimize(s.iterations);
    }
}
BENCHMARK(BM_SolveZeroSeed)->Unit(benchmark::kMillisecond);

static void BM_SolveSirSeed(benchmark::State& state) {
    const Fixture& f = Fixture::instance();
    for (auto _ : state) {
        const SeedResult seeded = seed_sir(f.prev, f.trans, f.kern, SeedingConfig{});
        SvmState s = init_state(f.kern, seeded.ids, Fixture::C, seeded.alpha);
        s = solve(std::move(s), f.kern, SolverConfig{});
        benchmark::DoNotOptimize(s.iterations);
    }
}
BENCHMARK(BM_SolveSirSeed)->Unit(benchmark::kMillisecond);

static void BM_SeedSir(benchmark::State& state) {
    const Fixture& f = Fixture::instance();
    for (auto _ : state) benchmark::DoNotOptimize(seed_sir(f.prev, f.trans, f.kern, SeedingConfig{}));
}
BENCHMARK(BM_SeedSir)->Unit(benchmark::kMicrosecond);

static void BM_SeedMir(benchmark::State& state) {
    const Fixture& f = Fixture::instance();
    for (auto _ : state) benchmark::DoNotOptimize(seed_mir(f.prev, f.trans, f.kern));
}
BENCHMARK(BM_SeedMir)->Unit(benchmark::kMicrosecond);

static void BM_SeedAto(benchmark::State& state) {
    const Fixture& f = Fixture::instance();
    for (auto _ : state)
        benchmark::DoNotOptimize(seed_ato(f.prev, f.trans, f.kern, SeedingConfig{}));
}
BENCHMARK(BM_SeedAto)->Unit(benchmark::kMicrosecond);

static void BM_SeedAvg(benchmark::State& state) {
    const Fixture& f = Fixture::instance();
    for (auto _ : state)
        benchmark::DoNotOptimize(seed_avg(f.prev, f.trans.removed, Fixture::C));
}
BENCHMARK(BM_SeedAvg)->Unit(benchmark::kMicrosecond);

static void BM_SeedTop(benchmark::State& state) {
    const Fixture& f = Fixture::instance();
    for (auto _ : state) benchmark::DoNotOptimize(seed_top(f.prev, f.trans.removed, f.kern));
}
BENCHMARK(BM_SeedTop)->Unit(benchmark::kMicrosecond);

static void BM_AdjustAlpha(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<int> y(static_cast<std::size_t>(n));
    std::vector<double> a(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        y[static_cast<std::size_t>(i)] = i % 2 == 0 ? +1 : -1;
        a[static_cast<std::size_t>(i)] = (i % 7) / 7.0;
    }
    for (auto _ : state) benchmark::DoNotOptimize(adjust_alpha_t(a, y, 0.25, 1.0));
}
BENCHMARK(BM_AdjustAlpha)->Arg(30)->Arg(300);

static void BM_LeastSquaresMirShape(benchmark::State& state) {
    DenseMatrix a(241, 30);
    std::vector<double> b(241);
    std::mt19937_64 rng(1);
    for (double& v : a.data) v = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    for (double& v : b) v = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    for (auto _ : state) benchmark::DoNotOptimize(solve_least_squares(a, b));
}
BENCHMARK(BM_LeastSquaresMirShape)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
