#include "hbp/bench.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <future>
#include <string>
#include <utility>

#include "hbp/errors.hpp"
#include "hbp/random.hpp"

namespace hbp {
namespace {

void beale_gradient(double x, double y, double& gx, double& gy) noexcept {
    const double y2 = y * y;
    const double y3 = y2 * y;
    const double r1 = 1.5 - x + x * y;
    const double r2 = 2.25 - x + x * y2;
    const double r3 = 2.625 - x + x * y3;
    gx = 2.0 * (r1 * (y - 1.0) + r2 * (y2 - 1.0) + r3 * (y3 - 1.0));
    gy = 2.0 * x * (r1 + 2.0 * r2 * y + 3.0 * r3 * y2);
}

void booth_gradient(double x, double y, double& gx, double& gy) noexcept {
    const double a = x + 2.0 * y - 7.0;
    const double b = 2.0 * x + y - 5.0;
    gx = 2.0 * a + 4.0 * b;
    gy = 4.0 * a + 2.0 * b;
}

constexpr BenchFunction kBeale{"beale", -4.5, 4.5, &beale, &beale_gradient};
constexpr BenchFunction kBooth{"booth", -10.0, 10.0, &booth, &booth_gradient};

void mix(std::uint64_t& h, double v) noexcept {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int byte = 0; byte < 8; ++byte) {
        h ^= (bits >> (8 * byte)) & 0xffU;
        h *= 0x100000001b3ULL;
    }
}

TrainReport make_report(OptimizerKind kind, const TrainResult& trained, const Dataset& data, double seconds,
                        std::uint64_t initial_hash) {
    TrainReport report{kind,
                       error_percent(trained.net, data, RowSet::train),
                       error_percent(trained.net, data, RowSet::test),
                       trained.result.iters,
                       seconds,
                       {},
                       trained.result.status,
                       initial_hash,
                       dataset_hash(data),
                       data.row_count(RowSet::train),
                       data.row_count(RowSet::test)};
    report.history.reserve(trained.result.history.size());
    for (const auto& h : trained.result.history) {
        report.history.push_back({h.iter, 100.0 * h.f, 100.0 * h.test_f.value_or(std::nan("")), h.grad_norm});
    }
    return report;
}

TrainReport train_timed(OptimizerKind kind, const Network& initial, const Dataset& data, const BenchConfig& cfg,
                        const BfgsObserver& observer) {
    const auto start = std::chrono::steady_clock::now();
    TrainResult trained = kind == OptimizerKind::gd ? gd_train(initial, data, cfg.gd)
                                                    : bfgs_train(initial, data, cfg.stop, cfg.wolfe, observer);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    return make_report(kind, trained, data, elapsed.count(), initial.params().hash());
}

}  // namespace

double beale(double x0, double x1) noexcept {
    const double a = 1.5 - x0 + x0 * x1;
    const double b = 2.25 - x0 + x0 * x1 * x1;
    const double c = 2.625 - x0 + x0 * x1 * x1 * x1;
    return a * a + b * b + c * c;
}

double booth(double x0, double x1) noexcept {
    const double a = x0 + 2.0 * x1 - 7.0;
    const double b = 2.0 * x0 + x1 - 5.0;
    return a * a + b * b;
}

const BenchFunction& beale_function() noexcept { return kBeale; }
const BenchFunction& booth_function() noexcept { return kBooth; }

std::optional<BenchFunction> find_function(std::string_view name) noexcept {
    if (name == kBeale.name) return kBeale;
    if (name == kBooth.name) return kBooth;
    return std::nullopt;
}

Objective surface_objective(const BenchFunction& fn) {
    return Objective(2, [fn](const RealVector& x) {
        RealVector g(2);
        fn.gradient(x[0], x[1], g[0], g[1]);
        return Evaluation{fn.eval(x[0], x[1]), std::move(g)};
    });
}

Dataset sample_dataset(const BenchFunction& fn, std::size_t n, double train_fraction, std::uint64_t seed) {
    if (!(fn.domain_lo < fn.domain_hi)) throw DimensionError("benchmark domain requires lo < hi");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw DimensionError("train_fraction must lie in (0, 1)");
    }
    const auto split = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
    if (n < 2 || split < 1 || split >= n) {
        throw DimensionError("split of " + std::to_string(n) + " samples at fraction " +
                             std::to_string(train_fraction) + " leaves an empty partition");
    }

    Rng rng(seed);
    std::vector<RealVector> inputs;
    std::vector<double> targets;
    inputs.reserve(n);
    targets.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        const double x0 = uniform(rng, fn.domain_lo, fn.domain_hi);
        const double x1 = uniform(rng, fn.domain_lo, fn.domain_hi);
        inputs.push_back(RealVector{x0, x1});
        targets.push_back(fn.eval(x0, x1));
    }
    // Fisher-Yates with the same stream.
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t j = uniform_index(rng, i + 1);
        std::swap(inputs[i], inputs[j]);
        std::swap(targets[i], targets[j]);
    }
    return Dataset::from_raw(std::move(inputs), std::move(targets), split);
}

std::uint64_t dataset_hash(const Dataset& data) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t r = 0; r < data.size(); ++r) {
        for (double v : data.inputs()[r]) mix(h, v);
        mix(h, data.targets_norm()[r]);
    }
    mix(h, static_cast<double>(data.split_index()));
    return h;
}

double error_percent(const Network& net, const Dataset& data, RowSet rows) {
    return 100.0 * loss_mse(net, data, rows);
}

std::string_view to_string(OptimizerKind kind) noexcept { return kind == OptimizerKind::gd ? "gd" : "bfgs"; }

void BenchConfig::validate() const {
    if (n_samples < 10) throw DimensionError("n_samples must be >= 10");
    if (hidden < 1) throw DimensionError("hidden width must be >= 1");
    gd.validate();
    stop.validate();
    wolfe.validate();
}

std::uint64_t init_seed(std::uint64_t seed) noexcept { return seed ^ 0x9e3779b97f4a7c15ULL; }

TrainReport run_benchmark(const BenchConfig& cfg, const BfgsObserver& observer) {
    cfg.validate();
    const Dataset data = sample_dataset(cfg.function, cfg.n_samples, cfg.train_fraction, cfg.seed);
    const Network initial(init_params(Topology{2, cfg.hidden, 1}, init_seed(cfg.seed)));
    return train_timed(cfg.optimizer, initial, data, cfg, observer);
}

Comparison run_comparison(const BenchConfig& cfg, const BfgsObserver& observer) {
    cfg.validate();
    const Dataset data = sample_dataset(cfg.function, cfg.n_samples, cfg.train_fraction, cfg.seed);
    const Network initial(init_params(Topology{2, cfg.hidden, 1}, init_seed(cfg.seed)));

    // The two runs only read the shared dataset and initial network.
    auto gd = std::async(std::launch::async,
                         [&] { return train_timed(OptimizerKind::gd, initial, data, cfg, {}); });
    TrainReport bfgs = train_timed(OptimizerKind::bfgs, initial, data, cfg, observer);
    return Comparison{gd.get(), std::move(bfgs)};
}

Comparison run_comparison(const BenchFunction& fn, std::uint64_t shared_seed, const GdConfig& gd,
                          const StopCriteria& stop, const WolfeConfig& wolfe) {
    BenchConfig cfg;
    cfg.function = fn;
    cfg.seed = shared_seed;
    cfg.gd = gd;
    cfg.stop = stop;
    cfg.wolfe = wolfe;
    return run_comparison(cfg);
}

}  // namespace hbp
