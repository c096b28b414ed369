#pragma once

// Single-hidden-layer sigmoid perceptron over a flat parameter vector.
//
// Parameter layout, fixed for every routine in this library:
//   [ W_hidden (n_hidden x n_in, row-major) | b_hidden (n_hidden)
//   | W_out (n_out x n_hidden, row-major)   | b_out (n_out) ]

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hbp/linalg.hpp"

namespace hbp {

struct Topology {
    std::size_t n_in = 1;
    std::size_t n_hidden = 10;
    std::size_t n_out = 1;

    /// Throws DimensionError if any count is zero.
    void validate() const;
    std::size_t param_count() const noexcept { return n_hidden * n_in + n_hidden + n_out * n_hidden + n_out; }

    std::size_t w_hidden_offset() const noexcept { return 0; }
    std::size_t b_hidden_offset() const noexcept { return n_hidden * n_in; }
    std::size_t w_out_offset() const noexcept { return b_hidden_offset() + n_hidden; }
    std::size_t b_out_offset() const noexcept { return w_out_offset() + n_out * n_hidden; }

    friend bool operator==(const Topology&, const Topology&) = default;
};

class ParamVector {
public:
    /// Throws DimensionError when the length does not match the topology.
    ParamVector(Topology topology, RealVector values);

    const Topology& topology() const noexcept { return topology_; }
    const RealVector& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double& operator[](std::size_t i) noexcept { return values_[i]; }

    double w_hidden(std::size_t h, std::size_t i) const noexcept {
        return values_[topology_.w_hidden_offset() + h * topology_.n_in + i];
    }
    double b_hidden(std::size_t h) const noexcept { return values_[topology_.b_hidden_offset() + h]; }
    double w_out(std::size_t k, std::size_t h) const noexcept {
        return values_[topology_.w_out_offset() + k * topology_.n_hidden + h];
    }
    double b_out(std::size_t k) const noexcept { return values_[topology_.b_out_offset() + k]; }

    /// FNV-1a over the IEEE bit patterns; used to prove two runs share initial conditions.
    std::uint64_t hash() const noexcept;

    friend bool operator==(const ParamVector&, const ParamVector&) = default;

private:
    Topology topology_;
    RealVector values_;
};

class Network {
public:
    explicit Network(ParamVector params) : params_(std::move(params)) {}
    Network(Topology topology, RealVector values) : params_(topology, std::move(values)) {}

    const Topology& topology() const noexcept { return params_.topology(); }
    const ParamVector& params() const noexcept { return params_; }
    ParamVector& params() noexcept { return params_; }

private:
    ParamVector params_;
};

enum class RowSet { train, test };

/// Sampled (input, target) pairs. Rows [0, split_index) train, the rest test.
class Dataset {
public:
    /// Validates every invariant: equal lengths ≥ 2, normalized targets in
    /// [0.1, 0.9], norm_lo < norm_hi, 1 ≤ split_index < size.
    Dataset(std::vector<RealVector> inputs, std::vector<double> targets_raw, std::vector<double> targets_norm,
            double norm_lo, double norm_hi, std::size_t split_index);

    /// Normalizes `targets_raw` with normalize_targets over all rows.
    static Dataset from_raw(std::vector<RealVector> inputs, std::vector<double> targets_raw, std::size_t split_index);

    std::size_t size() const noexcept { return inputs_.size(); }
    std::size_t input_dim() const noexcept { return inputs_.front().size(); }
    std::size_t split_index() const noexcept { return split_index_; }
    double norm_lo() const noexcept { return norm_lo_; }
    double norm_hi() const noexcept { return norm_hi_; }

    const std::vector<RealVector>& inputs() const noexcept { return inputs_; }
    const std::vector<double>& targets_raw() const noexcept { return targets_raw_; }
    const std::vector<double>& targets_norm() const noexcept { return targets_norm_; }

    /// Half-open row range [first, last) for a split.
    std::size_t first_row(RowSet rows) const noexcept { return rows == RowSet::train ? 0 : split_index_; }
    std::size_t last_row(RowSet rows) const noexcept { return rows == RowSet::train ? split_index_ : size(); }
    std::size_t row_count(RowSet rows) const noexcept { return last_row(rows) - first_row(rows); }

private:
    std::vector<RealVector> inputs_;
    std::vector<double> targets_raw_;
    std::vector<double> targets_norm_;
    double norm_lo_;
    double norm_hi_;
    std::size_t split_index_;
};

struct ForwardResult {
    RealVector hidden;
    RealVector output;
};

/// Uniform draws in [−0.5, 0.5] from a 64-bit Mersenne Twister seeded with `seed`.
ParamVector init_params(const Topology& topology, std::uint64_t seed);

double sigmoid(double x) noexcept;

ForwardResult forward(const Network& net, const RealVector& input);

/// (1/N) Σ (T_norm − O)² over the selected rows. Requires n_out == 1.
double loss_mse(const Network& net, const Dataset& data, RowSet rows);

/// ∇ of loss_mse with respect to every parameter, in layout order.
ParamVector grad_backprop(const Network& net, const Dataset& data, RowSet rows);

/// Central differences of loss_mse with step h; `net` is not modified.
ParamVector finite_diff_grad(const Network& net, const Dataset& data, RowSet rows, double h);

struct NormalizedTargets {
    std::vector<double> values;
    double lo;
    double hi;
};

constexpr double kNormFloor = 0.1;
constexpr double kNormCeil = 0.9;

/// Affine map min(raw) → 0.1, max(raw) → 0.9.
NormalizedTargets normalize_targets(const std::vector<double>& raw);
double normalize(double raw, double lo, double hi);
double denormalize(double y, double lo, double hi);

}  // namespace hbp
