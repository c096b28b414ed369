#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hbp/bench.hpp"
#include "hbp/errors.hpp"
#include "test_support.hpp"

using namespace hbp;

TEST_CASE("beale") {
    CHECK(beale(3.0, 0.5) == 0.0);
    CHECK(beale(0.0, 0.0) == 14.203125);
    CHECK(beale(1.0, 1.0) == 14.203125);
}

TEST_CASE("booth") {
    CHECK(booth(1.0, 3.0) == 0.0);
    CHECK(booth(0.0, 0.0) == 74.0);
    CHECK(booth(-10.0, 10.0) == 234.0);
}

TEST_CASE("surfaces are nonnegative with analytic gradients matching central differences") {
    Rng rng(12);
    for (const BenchFunction* fn : {&beale_function(), &booth_function()}) {
        const auto obj = surface_objective(*fn);
        for (int trial = 0; trial < 200; ++trial) {
            const double x = uniform(rng, fn->domain_lo, fn->domain_hi);
            const double y = uniform(rng, fn->domain_lo, fn->domain_hi);
            CHECK(fn->eval(x, y) >= 0.0);
            const auto ev = obj(RealVector{x, y});
            const double h = 1e-6;
            const double gx = (fn->eval(x + h, y) - fn->eval(x - h, y)) / (2 * h);
            const double gy = (fn->eval(x, y + h) - fn->eval(x, y - h)) / (2 * h);
            CHECK(std::abs(ev.g[0] - gx) <= 1e-6 * std::max(1.0, std::abs(gx)) + 1e-3);
            CHECK(std::abs(ev.g[1] - gy) <= 1e-6 * std::max(1.0, std::abs(gy)) + 1e-3);
        }
    }
    CHECK(beale(3.0, 0.5) <= 1e-24);
    CHECK(booth(1.0, 3.0) <= 1e-24);
}

TEST_CASE("find_function") {
    CHECK(find_function("beale")->domain_hi == 4.5);
    CHECK(find_function("booth")->domain_lo == -10.0);
    CHECK_FALSE(find_function("rosenbrock").has_value());
}

TEST_CASE("sample_dataset") {
    const auto a = sample_dataset(booth_function(), 100, 0.8, 7);
    const auto b = sample_dataset(booth_function(), 100, 0.8, 7);
    CHECK(dataset_hash(a) == dataset_hash(b));
    CHECK(a.targets_raw() == b.targets_raw());
    CHECK(dataset_hash(a) != dataset_hash(sample_dataset(booth_function(), 100, 0.8, 8)));

    for (const BenchFunction* fn : {&beale_function(), &booth_function()}) {
        const auto d = sample_dataset(*fn, 300, 0.8, 99);
        for (std::size_t r = 0; r < d.size(); ++r) {
            for (double v : d.inputs()[r]) {
                CHECK(v >= fn->domain_lo);
                CHECK(v <= fn->domain_hi);
            }
            CHECK(d.targets_norm()[r] >= 0.1 - 1e-12);
            CHECK(d.targets_norm()[r] <= 0.9 + 1e-12);
            CHECK(d.targets_raw()[r] == fn->eval(d.inputs()[r][0], d.inputs()[r][1]));
        }
    }
    CHECK(sample_dataset(beale_function(), 10, 0.8, 3).split_index() == 8);
    CHECK(sample_dataset(beale_function(), 10, 0.5, 3).split_index() == 5);
    CHECK(sample_dataset(beale_function(), 10, 0.44, 3).split_index() == 4);
    CHECK_THROWS_AS(sample_dataset(beale_function(), 10, 0.01, 3), DimensionError);
    CHECK_THROWS_AS(sample_dataset(beale_function(), 10, 0.99, 3), DimensionError);
    CHECK_THROWS_AS(sample_dataset(beale_function(), 10, 1.0, 3), DimensionError);
}

TEST_CASE("error_percent") {
    const Network half(Topology{1, 1, 1}, RealVector(4));  // outputs 0.5
    auto ds = [](std::vector<double> t) {
        std::vector<RealVector> in(t.size(), RealVector{0.0});
        std::vector<double> raw = t;
        return Dataset(in, raw, t, 0.1, 0.9, t.size() - 1);
    };
    CHECK(error_percent(half, ds({0.5, 0.5, 0.5}), RowSet::train) == 0.0);
    CHECK(error_percent(half, ds({0.6, 0.4, 0.6, 0.4}), RowSet::train) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(error_percent(half, ds({0.9, 0.9, 0.9}), RowSet::train) == doctest::Approx(16.0).epsilon(1e-14));
}

TEST_CASE("error_percent is invariant under row permutation within a split") {
    const auto data = sample_dataset(booth_function(), 60, 0.5, 5);
    const Network net(init_params(Topology{2, 4, 1}, 5));
    std::vector<RealVector> in = data.inputs();
    std::vector<double> raw = data.targets_raw();
    std::vector<double> norm = data.targets_norm();
    std::reverse(in.begin(), in.begin() + 30);
    std::reverse(raw.begin(), raw.begin() + 30);
    std::reverse(norm.begin(), norm.begin() + 30);
    const Dataset permuted(in, raw, norm, data.norm_lo(), data.norm_hi(), data.split_index());
    CHECK(error_percent(net, permuted, RowSet::train) ==
          doctest::Approx(error_percent(net, data, RowSet::train)).epsilon(1e-13));
    CHECK(error_percent(net, permuted, RowSet::test) == error_percent(net, data, RowSet::test));
}

TEST_CASE("direct surface minimization") {
    const WolfeConfig wolfe{};
    const auto beale_run = bfgs_minimize(surface_objective(beale_function()), {1.0, 1.0}, {1e-6, 100, 0.0}, wolfe);
    CHECK(beale_run.status == Status::converged_grad);
    CHECK(beale_run.f_final <= 1e-10);
    CHECK(beale_run.x_final[0] == doctest::Approx(3.0).epsilon(1e-4));
    CHECK(beale_run.x_final[1] == doctest::Approx(0.5).epsilon(1e-4));

    const auto booth_run = bfgs_minimize(surface_objective(booth_function()), {0.0, 0.0}, {1e-6, 50, 0.0}, wolfe);
    CHECK(booth_run.status == Status::converged_grad);
    CHECK(booth_run.f_final <= 1e-12);
}

TEST_CASE("run_benchmark") {
    BenchConfig cfg;
    cfg.function = booth_function();
    const auto r = run_benchmark(cfg);
    CHECK(std::isfinite(r.test_error_pct));
    CHECK(r.test_error_pct < 10.0);
    CHECK((r.status == Status::converged_grad || r.status == Status::max_iters));
    CHECK(r.history.size() == r.iterations + 1);

    const auto again = run_benchmark(cfg);
    CHECK(again.train_error_pct == r.train_error_pct);
    CHECK(again.test_error_pct == r.test_error_pct);
    CHECK(again.iterations == r.iterations);
    REQUIRE(again.history.size() == r.history.size());
    for (std::size_t i = 0; i < r.history.size(); ++i) {
        CHECK(again.history[i].train_error_pct == r.history[i].train_error_pct);
        CHECK(again.history[i].test_error_pct == r.history[i].test_error_pct);
        CHECK(again.history[i].grad_norm == r.history[i].grad_norm);
    }

    BenchConfig tiny;
    tiny.n_samples = 10;
    tiny.train_fraction = 0.5;
    tiny.stop.max_iters = 20;
    const auto t = run_benchmark(tiny);
    CHECK(t.train_rows == 5);
    CHECK(t.test_rows == 5);
    CHECK_FALSE(t.history.empty());

    BenchConfig bad;
    bad.n_samples = 9;
    CHECK_THROWS_AS(run_benchmark(bad), DimensionError);
}

TEST_CASE("run_comparison shares initial conditions") {
    for (const BenchFunction* fn : {&booth_function(), &beale_function()}) {
        const auto cmp = run_comparison(*fn, 42, GdConfig{}, StopCriteria{}, WolfeConfig{});
        CHECK(cmp.gd.initial_param_hash == cmp.bfgs.initial_param_hash);
        CHECK(cmp.gd.dataset_hash == cmp.bfgs.dataset_hash);
        CHECK(cmp.gd.history.front().train_error_pct == cmp.bfgs.history.front().train_error_pct);
        CHECK(cmp.bfgs.test_error_pct < cmp.gd.test_error_pct);
        CHECK(cmp.gd.optimizer == OptimizerKind::gd);
        CHECK(cmp.bfgs.optimizer == OptimizerKind::bfgs);
    }
}
