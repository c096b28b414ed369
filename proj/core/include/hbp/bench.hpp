#pragma once

// Function-approximation benchmarks: sample a 2-D test surface, fit it with a
// 2-h-1 perceptron and report percentage errors for GD and BFGS training.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "hbp/mlp.hpp"
#include "hbp/optim.hpp"

namespace hbp {

/// Canonical Beale surface; minimum 0 at (3, 0.5).
double beale(double x0, double x1) noexcept;
/// Booth surface; minimum 0 at (1, 3).
double booth(double x0, double x1) noexcept;

struct BenchFunction {
    std::string_view name;
    double domain_lo;
    double domain_hi;
    double (*eval)(double, double) noexcept;
    /// Analytic gradient, used for direct minimization of the surface itself.
    void (*gradient)(double, double, double& g0, double& g1) noexcept;
};

const BenchFunction& beale_function() noexcept;
const BenchFunction& booth_function() noexcept;
std::optional<BenchFunction> find_function(std::string_view name) noexcept;

/// The surface itself as a 2-D Objective.
Objective surface_objective(const BenchFunction& fn);

/// Uniform samples over the square domain, normalized targets, seeded shuffle,
/// split_index = round(train_fraction · n).
Dataset sample_dataset(const BenchFunction& fn, std::size_t n, double train_fraction, std::uint64_t seed);

std::uint64_t dataset_hash(const Dataset& data) noexcept;

/// 100 × MSE on normalized targets.
double error_percent(const Network& net, const Dataset& data, RowSet rows);

enum class OptimizerKind { gd, bfgs };
std::string_view to_string(OptimizerKind kind) noexcept;

struct BenchConfig {
    BenchFunction function = booth_function();
    std::size_t n_samples = 500;
    double train_fraction = 0.8;
    std::uint64_t seed = 42;
    std::size_t hidden = 10;
    OptimizerKind optimizer = OptimizerKind::bfgs;
    GdConfig gd{};
    StopCriteria stop{};
    WolfeConfig wolfe{};

    void validate() const;
};

struct ReportRow {
    std::size_t iter;
    double train_error_pct;
    double test_error_pct;
    double grad_norm;
};

struct TrainReport {
    OptimizerKind optimizer;
    double train_error_pct;
    double test_error_pct;
    std::size_t iterations;
    double wall_clock_s;
    std::vector<ReportRow> history;
    Status status;
    std::uint64_t initial_param_hash;
    std::uint64_t dataset_hash;
    std::size_t train_rows;
    std::size_t test_rows;
};

/// Seed used to draw initial weights; decorrelated from the sampling stream.
std::uint64_t init_seed(std::uint64_t seed) noexcept;

TrainReport run_benchmark(const BenchConfig& cfg, const BfgsObserver& observer = {});

struct Comparison {
    TrainReport gd;
    TrainReport bfgs;
};

/// Trains GD and BFGS from the same dataset and initial weights. The
/// `optimizer` field of `cfg` is ignored.
Comparison run_comparison(const BenchConfig& cfg, const BfgsObserver& observer = {});
Comparison run_comparison(const BenchFunction& fn, std::uint64_t shared_seed, const GdConfig& gd,
                          const StopCriteria& stop, const WolfeConfig& wolfe);

}  // namespace hbp
