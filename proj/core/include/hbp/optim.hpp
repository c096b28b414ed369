#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "hbp/linalg.hpp"
#include "hbp/mlp.hpp"

namespace hbp {

struct Evaluation {
    double f;
    RealVector g;
};

/// Smooth objective f: R^dim → R together with its gradient.
class Objective {
public:
    using Fn = std::function<Evaluation(const RealVector&)>;

    Objective(std::size_t dim, Fn fn);

    std::size_t dim() const noexcept { return dim_; }

    /// Throws DimensionError on a wrong-length x or gradient, NonFiniteError
    /// when f or any gradient entry is NaN/Inf.
    Evaluation operator()(const RealVector& x) const;

private:
    std::size_t dim_;
    Fn fn_;
};

enum class GdMode { online, batch };

struct GdConfig {
    double eta = 0.1;
    std::size_t epochs = 500;
    GdMode mode = GdMode::online;

    void validate() const;
};

/// Strong Wolfe parameters; defaults are the usual quasi-Newton choices.
struct WolfeConfig {
    double c1 = 1e-4;
    double c2 = 0.9;
    double alpha_init = 1.0;
    double alpha_max = 1e3;
    std::size_t max_bracket_steps = 20;
    std::size_t max_zoom_steps = 30;

    void validate() const;
};

struct StopCriteria {
    double grad_tol = 1e-5;   // stop when ‖g‖ ≤ grad_tol
    std::size_t max_iters = 500;
    double f_tol = 0.0;       // 0 disables; else |f_k − f_{k+1}| ≤ f_tol·max(1, |f_k|)

    void validate() const;
};

enum class Status { converged_grad, converged_ftol, max_iters, line_search_failed, diverged };

std::string_view to_string(Status status) noexcept;
/// Converged or ran out of iterations, as opposed to a numerical failure.
bool is_success(Status status) noexcept;

struct HistoryEntry {
    std::size_t iter;
    double f;
    double grad_norm;
    std::optional<double> test_f;  // filled by the MLP trainers
};

struct MinimizeResult {
    RealVector x_final;
    double f_final;
    double grad_norm_final;
    std::size_t iters;
    Status status;
    std::vector<HistoryEntry> history;  // iters + 1 entries, iteration 0 first
    std::size_t n_skipped_updates = 0;
};

struct BfgsState {
    RealVector x;
    double f;
    RealVector g;
    RealMatrix H;  // inverse-Hessian approximation
    std::size_t iter = 0;
    std::size_t n_skipped_updates = 0;
};

/// One accepted BFGS iteration, reported to an observer before the state advances.
struct BfgsStep {
    const Objective& objective;
    std::size_t iter;  // index of the new point x_{k+1}
    const RealVector& x;
    double f;
    const RealVector& g;
    const RealVector& direction;
    double alpha;
    const RealVector& x_new;
    double f_new;
    const RealVector& g_new;
    const RealMatrix& H_before;
    const RealMatrix& H_after;
    bool updated;    // false when the curvature test skipped the update
    bool restarted;  // direction fell back to steepest descent
};

using BfgsObserver = std::function<void(const BfgsStep&)>;

struct LineSearchResult {
    double alpha;
    double f_new;
    RealVector g_new;
    std::size_t evals;
};

/// Bracket-then-zoom search for α satisfying both strong Wolfe conditions.
/// Throws ContractViolation unless g0·p < 0 and LineSearchError when the
/// budgets run out.
LineSearchResult wolfe_line_search(const Objective& obj, const RealVector& x, const RealVector& p, double f0,
                                   const RealVector& g0, const WolfeConfig& cfg);

/// Inverse-Hessian update (I − ρsyᵀ) H (I − ρysᵀ) + ρssᵀ, ρ = 1/yᵀs.
RealMatrix bfgs_update_H(const RealMatrix& H, const RealVector& s, const RealVector& y);

/// Direct Hessian update B + yyᵀ/yᵀs − Bs(Bs)ᵀ/sᵀBs.
RealMatrix bfgs_update_B(const RealMatrix& B, const RealVector& s, const RealVector& y);

/// Updates are skipped when yᵀs ≤ kCurvatureFloor·‖y‖‖s‖.
constexpr double kCurvatureFloor = 1e-10;

MinimizeResult bfgs_minimize(const Objective& obj, const RealVector& x0, const StopCriteria& stop,
                             const WolfeConfig& wolfe, const BfgsObserver& observer = {});

struct TrainResult {
    Network net;
    MinimizeResult result;
};

/// Training MSE over the flattened parameters as an Objective.
Objective mlp_objective(const Network& net, const Dataset& data);

/// Backprop with a fixed learning rate; history holds one entry per epoch.
TrainResult gd_train(const Network& net, const Dataset& data, const GdConfig& cfg);

/// BFGS over the flattened parameters; history also carries test MSE.
TrainResult bfgs_train(const Network& net, const Dataset& data, const StopCriteria& stop, const WolfeConfig& wolfe,
                       const BfgsObserver& observer = {});

}  // namespace hbp
