#pragma once

#include <cstddef>
#include <cstdint>

#include "hbp/mlp.hpp"

namespace hbp {

struct GradCheckCase {
    Network net;
    Dataset data;  // 6 rows; the first 5 form the training split
};

/// Random 2-h-1 network (weights uniform in [−2, 2]) and a small random
/// dataset with inputs in [−1, 1]² and targets in [0.1, 0.9].
GradCheckCase random_gradcheck_case(std::uint64_t seed, std::size_t hidden);

/// max_i |a_i − b_i| / max(1, |a_i|, |b_i|)
double max_relative_error(const RealVector& a, const RealVector& b);

constexpr double kGradCheckStep = 1e-5;
constexpr double kGradCheckTolerance = 1e-6;

}  // namespace hbp
