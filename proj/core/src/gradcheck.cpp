#include "hbp/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "hbp/errors.hpp"
#include "hbp/random.hpp"

namespace hbp {

GradCheckCase random_gradcheck_case(std::uint64_t seed, std::size_t hidden) {
    const Topology topology{2, hidden, 1};
    topology.validate();
    Rng rng(seed);
    std::vector<double> params(topology.param_count());
    for (double& v : params) v = uniform(rng, -2.0, 2.0);

    constexpr std::size_t kRows = 6;
    std::vector<RealVector> inputs;
    std::vector<double> targets;
    for (std::size_t r = 0; r < kRows; ++r) {
        inputs.push_back(RealVector{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)});
        targets.push_back(uniform(rng, kNormFloor, kNormCeil));
    }
    std::vector<double> raw = targets;
    return GradCheckCase{Network(topology, RealVector(std::move(params))),
                         Dataset(std::move(inputs), std::move(raw), std::move(targets), kNormFloor, kNormCeil, 5)};
}

double max_relative_error(const RealVector& a, const RealVector& b) {
    if (a.size() != b.size()) throw DimensionError("max_relative_error: length mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max({1.0, std::abs(a[i]), std::abs(b[i])});
        worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
    }
    return worst;
}

}  // namespace hbp
