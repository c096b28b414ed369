#pragma once

#include <stdexcept>
#include <string>

namespace hbp {

/// Shape or size mismatch between operands, or a value violating a type invariant.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A NaN or infinity reached a constructor that only accepts finite values.
class NonFiniteError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Caller broke an operation precondition (e.g. non-descent direction).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// yᵀs (or sᵀBs) not positive; the BFGS update is undefined.
class CurvatureError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class LineSearchError : public std::runtime_error {
public:
    LineSearchError(const std::string& what, double best_alpha)
        : std::runtime_error(what), best_alpha_(best_alpha) {}

    double best_alpha() const noexcept { return best_alpha_; }

private:
    double best_alpha_;
};

}  // namespace hbp
