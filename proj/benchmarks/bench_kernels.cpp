#include <benchmark/benchmark.h>

#include "hbp/bench.hpp"
#include "hbp/linalg.hpp"
#include "hbp/mlp.hpp"
#include "hbp/optim.hpp"
#include "hbp/random.hpp"

namespace {

hbp::Dataset booth_data() { return hbp::sample_dataset(hbp::booth_function(), 500, 0.8, 42); }

static void BM_LossMse(benchmark::State& state) {
    const auto data = booth_data();
    const hbp::Network net(hbp::init_params({2, static_cast<std::size_t>(state.range(0)), 1}, 1));
    for (auto _ : state) benchmark::DoNotOptimize(hbp::loss_mse(net, data, hbp::RowSet::train));
}
BENCHMARK(BM_LossMse)->Arg(5)->Arg(10)->Arg(40);

static void BM_GradBackprop(benchmark::State& state) {
    const auto data = booth_data();
    const hbp::Network net(hbp::init_params({2, static_cast<std::size_t>(state.range(0)), 1}, 1));
    for (auto _ : state) benchmark::DoNotOptimize(hbp::grad_backprop(net, data, hbp::RowSet::train));
}
BENCHMARK(BM_GradBackprop)->Arg(5)->Arg(10)->Arg(40);

static void BM_BfgsUpdateH(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    hbp::Rng rng(3);
    hbp::RealVector s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = hbp::uniform(rng, -1.0, 1.0);
        y[i] = s[i] * hbp::uniform(rng, 0.5, 2.0);
    }
    const auto H = hbp::RealMatrix::identity(n);
    for (auto _ : state) benchmark::DoNotOptimize(hbp::bfgs_update_H(H, s, y));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BfgsUpdateH)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oNSquared);

static void BM_BfgsBeale(benchmark::State& state) {
    const auto obj = hbp::surface_objective(hbp::beale_function());
    const hbp::StopCriteria stop{1e-6, 100, 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(hbp::bfgs_minimize(obj, hbp::RealVector{1.0, 1.0}, stop, {}));
}
BENCHMARK(BM_BfgsBeale);

static void BM_TrainBfgsBooth(benchmark::State& state) {
    hbp::BenchConfig cfg;
    cfg.stop.max_iters = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(hbp::run_benchmark(cfg));
}
BENCHMARK(BM_TrainBfgsBooth)->Arg(50)->Arg(500)->Unit(benchmark::kMillisecond);

static void BM_TrainGdBooth(benchmark::State& state) {
    hbp::BenchConfig cfg;
    cfg.optimizer = hbp::OptimizerKind::gd;
    cfg.gd.epochs = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(hbp::run_benchmark(cfg));
}
BENCHMARK(BM_TrainGdBooth)->Arg(50)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
