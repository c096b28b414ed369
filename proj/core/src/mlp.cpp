#include "hbp/mlp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "hbp/errors.hpp"
#include "hbp/random.hpp"

namespace hbp {
namespace {

// Writes hidden and output activations for one row into caller-owned buffers.
void forward_into(const ParamVector& p, std::span<const double> x, std::span<double> hidden,
                  std::span<double> output) {
    const Topology& t = p.topology();
    const auto& w = p.values();
    for (std::size_t h = 0; h < t.n_hidden; ++h) {
        double z = w[t.b_hidden_offset() + h];
        const std::size_t row = t.w_hidden_offset() + h * t.n_in;
        for (std::size_t i = 0; i < t.n_in; ++i) z += w[row + i] * x[i];
        hidden[h] = sigmoid(z);
    }
    for (std::size_t k = 0; k < t.n_out; ++k) {
        double z = w[t.b_out_offset() + k];
        const std::size_t row = t.w_out_offset() + k * t.n_hidden;
        for (std::size_t h = 0; h < t.n_hidden; ++h) z += w[row + h] * hidden[h];
        output[k] = sigmoid(z);
    }
}

void check_compatible(const Network& net, const Dataset& data, RowSet rows) {
    const Topology& t = net.topology();
    if (data.input_dim() != t.n_in) {
        throw DimensionError("dataset inputs have dimension " + std::to_string(data.input_dim()) +
                             " but the network expects " + std::to_string(t.n_in));
    }
    if (t.n_out != 1) throw DimensionError("scalar-target losses require n_out == 1");
    if (data.row_count(rows) == 0) throw DimensionError("empty row selection");
}

}  // namespace

void Topology::validate() const {
    if (n_in == 0 || n_hidden == 0 || n_out == 0) {
        throw DimensionError("topology counts must all be >= 1");
    }
}

ParamVector::ParamVector(Topology topology, RealVector values) : topology_(topology), values_(std::move(values)) {
    topology_.validate();
    if (values_.size() != topology_.param_count()) {
        throw DimensionError("parameter vector has length " + std::to_string(values_.size()) + ", topology needs " +
                             std::to_string(topology_.param_count()));
    }
}

std::uint64_t ParamVector::hash() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double v : values_) {
        auto bits = std::bit_cast<std::uint64_t>(v);
        for (int byte = 0; byte < 8; ++byte) {
            h ^= (bits >> (8 * byte)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

Dataset::Dataset(std::vector<RealVector> inputs, std::vector<double> targets_raw, std::vector<double> targets_norm,
                 double norm_lo, double norm_hi, std::size_t split_index)
    : inputs_(std::move(inputs)),
      targets_raw_(std::move(targets_raw)),
      targets_norm_(std::move(targets_norm)),
      norm_lo_(norm_lo),
      norm_hi_(norm_hi),
      split_index_(split_index) {
    const std::size_t n = inputs_.size();
    if (n < 2) throw DimensionError("dataset needs at least 2 rows");
    if (targets_raw_.size() != n || targets_norm_.size() != n) {
        throw DimensionError("dataset inputs and targets differ in length");
    }
    const std::size_t dim = inputs_.front().size();
    for (const auto& x : inputs_) {
        if (x.size() != dim) throw DimensionError("dataset inputs have inconsistent dimension");
    }
    for (std::size_t r = 0; r < n; ++r) {
        const double t = targets_norm_[r];
        if (!(t >= kNormFloor - 1e-12 && t <= kNormCeil + 1e-12)) {
            throw DimensionError("normalized target at row " + std::to_string(r) + " outside [0.1, 0.9]");
        }
        if (!std::isfinite(targets_raw_[r])) throw NonFiniteError("raw target at row " + std::to_string(r));
    }
    if (!(norm_lo_ < norm_hi_)) throw DimensionError("normalization range requires lo < hi");
    if (split_index_ < 1 || split_index_ >= n) {
        throw DimensionError("split index " + std::to_string(split_index_) + " leaves an empty partition");
    }
}

Dataset Dataset::from_raw(std::vector<RealVector> inputs, std::vector<double> targets_raw, std::size_t split_index) {
    auto normed = normalize_targets(targets_raw);
    return Dataset(std::move(inputs), std::move(targets_raw), std::move(normed.values), normed.lo, normed.hi,
                   split_index);
}

ParamVector init_params(const Topology& topology, std::uint64_t seed) {
    topology.validate();
    Rng rng(seed);
    std::vector<double> values(topology.param_count());
    for (double& v : values) v = uniform(rng, -0.5, 0.5);
    return ParamVector(topology, RealVector(std::move(values)));
}

double sigmoid(double x) noexcept {
    // Outputs stay strictly inside (0, 1): past |x| ≈ 37 the exact value
    // rounds to 1 (or underflows), so clamp to the nearest interior doubles.
    constexpr double kLow = std::numeric_limits<double>::min();
    constexpr double kHigh = 1.0 - 0x1.0p-53;
    double y;
    if (x >= 0.0) {
        y = 1.0 / (1.0 + std::exp(-x));
    } else {
        const double e = std::exp(x);
        y = e / (1.0 + e);
    }
    return std::clamp(y, kLow, kHigh);
}

ForwardResult forward(const Network& net, const RealVector& input) {
    const Topology& t = net.topology();
    if (input.size() != t.n_in) {
        throw DimensionError("forward: input length " + std::to_string(input.size()) + ", network expects " +
                             std::to_string(t.n_in));
    }
    ForwardResult out{RealVector(t.n_hidden), RealVector(t.n_out)};
    forward_into(net.params(), input.span(), out.hidden.span(), out.output.span());
    return out;
}

double loss_mse(const Network& net, const Dataset& data, RowSet rows) {
    check_compatible(net, data, rows);
    std::vector<double> hidden(net.topology().n_hidden);
    double output = 0.0;
    double sum = 0.0;
    for (std::size_t r = data.first_row(rows); r < data.last_row(rows); ++r) {
        forward_into(net.params(), data.inputs()[r].span(), hidden, std::span<double>(&output, 1));
        const double residual = data.targets_norm()[r] - output;
        sum += residual * residual;
    }
    return sum / static_cast<double>(data.row_count(rows));
}

ParamVector grad_backprop(const Network& net, const Dataset& data, RowSet rows) {
    check_compatible(net, data, rows);
    const Topology& t = net.topology();
    const ParamVector& p = net.params();
    const double scale = 2.0 / static_cast<double>(data.row_count(rows));

    std::vector<double> grad(t.param_count(), 0.0);
    std::vector<double> hidden(t.n_hidden);
    double output = 0.0;
    for (std::size_t r = data.first_row(rows); r < data.last_row(rows); ++r) {
        const auto x = data.inputs()[r].span();
        forward_into(p, x, hidden, std::span<double>(&output, 1));
        // Output delta O(1−O)(T−O); the loss gradient carries the opposite sign.
        const double delta_out = output * (1.0 - output) * (data.targets_norm()[r] - output);
        const double g_out = -scale * delta_out;
        for (std::size_t h = 0; h < t.n_hidden; ++h) {
            grad[t.w_out_offset() + h] += g_out * hidden[h];
            const double g_hidden = g_out * p.w_out(0, h) * hidden[h] * (1.0 - hidden[h]);
            grad[t.b_hidden_offset() + h] += g_hidden;
            const std::size_t row = t.w_hidden_offset() + h * t.n_in;
            for (std::size_t i = 0; i < t.n_in; ++i) grad[row + i] += g_hidden * x[i];
        }
        grad[t.b_out_offset()] += g_out;
    }
    return ParamVector(t, RealVector(std::move(grad)));
}

ParamVector finite_diff_grad(const Network& net, const Dataset& data, RowSet rows, double h) {
    if (!(h > 0.0)) throw ContractViolation("finite_diff_grad: step must be positive");
    check_compatible(net, data, rows);
    Network probe = net;
    const std::size_t n = probe.params().size();
    RealVector grad(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double original = probe.params()[i];
        probe.params()[i] = original + h;
        const double up = loss_mse(probe, data, rows);
        probe.params()[i] = original - h;
        const double down = loss_mse(probe, data, rows);
        probe.params()[i] = original;
        grad[i] = (up - down) / (2.0 * h);
    }
    return ParamVector(net.topology(), std::move(grad));
}

NormalizedTargets normalize_targets(const std::vector<double>& raw) {
    if (raw.size() < 2) throw DimensionError("normalize_targets: need at least 2 values");
    const auto [min_it, max_it] = std::minmax_element(raw.begin(), raw.end());
    const double lo = *min_it;
    const double hi = *max_it;
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw NonFiniteError("normalize_targets: non-finite value");
    if (!(hi > lo)) throw DimensionError("normalize_targets: constant sequence cannot be normalized");
    NormalizedTargets out{std::vector<double>(raw.size()), lo, hi};
    for (std::size_t i = 0; i < raw.size(); ++i) out.values[i] = normalize(raw[i], lo, hi);
    return out;
}

double normalize(double raw, double lo, double hi) {
    if (!(hi > lo)) throw DimensionError("normalize: requires hi > lo");
    return kNormFloor + (kNormCeil - kNormFloor) * (raw - lo) / (hi - lo);
}

double denormalize(double y, double lo, double hi) {
    if (!(hi > lo)) throw DimensionError("denormalize: requires hi > lo");
    return lo + (y - kNormFloor) * (hi - lo) / (kNormCeil - kNormFloor);
}

}  // namespace hbp
