#include "hbp/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hbp/errors.hpp"

namespace hbp {

Objective::Objective(std::size_t dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {
    if (dim_ == 0) throw DimensionError("Objective: dimension must be >= 1");
    if (!fn_) throw ContractViolation("Objective: empty evaluation function");
}

Evaluation Objective::operator()(const RealVector& x) const {
    if (x.size() != dim_) {
        throw DimensionError("Objective: point has length " + std::to_string(x.size()) + ", expected " +
                             std::to_string(dim_));
    }
    Evaluation ev = fn_(x);
    if (ev.g.size() != dim_) throw DimensionError("Objective: gradient length differs from dimension");
    if (!std::isfinite(ev.f)) throw NonFiniteError("Objective: non-finite value");
    if (!ev.g.all_finite()) throw NonFiniteError("Objective: non-finite gradient");
    return ev;
}

void GdConfig::validate() const {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ContractViolation("GdConfig: eta must be positive");
    if (epochs < 1) throw ContractViolation("GdConfig: epochs must be >= 1");
}

void WolfeConfig::validate() const {
    if (!(0.0 < c1 && c1 < c2 && c2 < 1.0)) throw ContractViolation("WolfeConfig: need 0 < c1 < c2 < 1");
    if (!(alpha_init > 0.0)) throw ContractViolation("WolfeConfig: alpha_init must be positive");
    if (!(alpha_max >= alpha_init)) throw ContractViolation("WolfeConfig: alpha_max must be >= alpha_init");
    if (max_bracket_steps < 1 || max_zoom_steps < 1) throw ContractViolation("WolfeConfig: step budgets must be >= 1");
}

void StopCriteria::validate() const {
    if (!(grad_tol > 0.0)) throw ContractViolation("StopCriteria: grad_tol must be positive");
    if (max_iters < 1) throw ContractViolation("StopCriteria: max_iters must be >= 1");
    if (!(f_tol >= 0.0)) throw ContractViolation("StopCriteria: f_tol must be >= 0");
}

std::string_view to_string(Status status) noexcept {
    switch (status) {
        case Status::converged_grad: return "converged_grad";
        case Status::converged_ftol: return "converged_ftol";
        case Status::max_iters: return "max_iters";
        case Status::line_search_failed: return "line_search_failed";
        case Status::diverged: return "diverged";
    }
    return "unknown";
}

bool is_success(Status status) noexcept {
    return status == Status::converged_grad || status == Status::converged_ftol || status == Status::max_iters;
}

// ---------------------------------------------------------------------------
// Line search

namespace {

struct Trial {
    double alpha;
    double f;  // +inf when the objective could not be evaluated
    double slope;
    std::optional<RealVector> g;
};

class LineFunction {
public:
    LineFunction(const Objective& obj, const RealVector& x, const RealVector& p) : obj_(obj), x_(x), p_(p) {}

    Trial at(double alpha) {
        ++evals_;
        try {
            Evaluation ev = obj_(axpy(alpha, p_, x_));
            const double slope = dot(ev.g, p_);
            return Trial{alpha, ev.f, slope, std::move(ev.g)};
        } catch (const NonFiniteError&) {
            return Trial{alpha, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::quiet_NaN(),
                         std::nullopt};
        }
    }

    std::size_t evals() const noexcept { return evals_; }

private:
    const Objective& obj_;
    const RealVector& x_;
    const RealVector& p_;
    std::size_t evals_ = 0;
};

// Minimizer of the cubic matching value and slope at both ends, or NaN.
double cubic_minimizer(const Trial& a, const Trial& b) {
    if (!std::isfinite(a.f) || !std::isfinite(b.f) || !std::isfinite(a.slope) || !std::isfinite(b.slope)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double d1 = a.slope + b.slope - 3.0 * (a.f - b.f) / (a.alpha - b.alpha);
    const double disc = d1 * d1 - a.slope * b.slope;
    if (!(disc >= 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double d2 = std::copysign(std::sqrt(disc), b.alpha - a.alpha);
    const double denom = b.slope - a.slope + 2.0 * d2;
    if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return b.alpha - (b.alpha - a.alpha) * (b.slope + d2 - d1) / denom;
}

class WolfeSearch {
public:
    WolfeSearch(LineFunction& line, double f0, double d0, const WolfeConfig& cfg)
        : line_(line), f0_(f0), d0_(d0), cfg_(cfg) {}

    std::optional<Trial> run() {
        Trial prev{0.0, f0_, d0_, std::nullopt};
        double alpha = cfg_.alpha_init;
        for (std::size_t i = 0; i < cfg_.max_bracket_steps; ++i) {
            Trial cur = line_.at(alpha);
            note(cur);
            if (!armijo(cur) || (i > 0 && cur.f >= prev.f)) return zoom(std::move(prev), std::move(cur));
            if (curvature(cur)) return cur;
            if (cur.slope >= 0.0) return zoom(std::move(cur), std::move(prev));
            if (alpha >= cfg_.alpha_max) return std::nullopt;
            prev = std::move(cur);
            alpha = std::min(2.0 * alpha, cfg_.alpha_max);
        }
        return std::nullopt;
    }

    double best_alpha() const noexcept { return best_alpha_; }

private:
    bool armijo(const Trial& t) const { return t.f <= f0_ + cfg_.c1 * t.alpha * d0_; }
    bool curvature(const Trial& t) const { return std::abs(t.slope) <= cfg_.c2 * std::abs(d0_); }

    void note(const Trial& t) {
        if (t.f < best_f_) {
            best_f_ = t.f;
            best_alpha_ = t.alpha;
        }
    }

    // Invariant: lo satisfies sufficient decrease and has the lowest value seen
    // in the bracket; lo.slope·(hi.alpha − lo.alpha) < 0.
    std::optional<Trial> zoom(Trial lo, Trial hi) {
        for (std::size_t j = 0; j < cfg_.max_zoom_steps; ++j) {
            const double left = std::min(lo.alpha, hi.alpha);
            const double right = std::max(lo.alpha, hi.alpha);
            const double width = right - left;
            if (!(width > std::numeric_limits<double>::epsilon() * right)) return std::nullopt;

            double alpha = cubic_minimizer(lo, hi);
            if (!std::isfinite(alpha) || alpha < left + 0.1 * width || alpha > right - 0.1 * width) {
                alpha = 0.5 * (lo.alpha + hi.alpha);
            }
            Trial cur = line_.at(alpha);
            note(cur);
            if (!armijo(cur) || cur.f >= lo.f) {
                hi = std::move(cur);
                continue;
            }
            if (curvature(cur)) return cur;
            if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) hi = std::move(lo);
            lo = std::move(cur);
        }
        return std::nullopt;
    }

    LineFunction& line_;
    double f0_;
    double d0_;
    const WolfeConfig& cfg_;
    double best_f_ = std::numeric_limits<double>::infinity();
    double best_alpha_ = 0.0;
};

}  // namespace

LineSearchResult wolfe_line_search(const Objective& obj, const RealVector& x, const RealVector& p, double f0,
                                   const RealVector& g0, const WolfeConfig& cfg) {
    cfg.validate();
    const double d0 = dot(g0, p);
    if (!(d0 < 0.0)) {
        throw ContractViolation("wolfe_line_search: direction is not a descent direction (g·p = " +
                                std::to_string(d0) + ")");
    }
    LineFunction line(obj, x, p);
    WolfeSearch search(line, f0, d0, cfg);
    auto accepted = search.run();
    if (!accepted) throw LineSearchError("wolfe_line_search: no step satisfies the strong Wolfe conditions",
                                         search.best_alpha());
    return LineSearchResult{accepted->alpha, accepted->f, std::move(*accepted->g), line.evals()};
}

// ---------------------------------------------------------------------------
// BFGS

namespace {

void symmetrize(RealMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            const double avg = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = avg;
            m(j, i) = avg;
        }
    }
}

void check_update_shapes(const RealMatrix& m, const RealVector& s, const RealVector& y, const char* op) {
    if (!m.square() || m.rows() != s.size() || s.size() != y.size()) {
        throw DimensionError(std::string(op) + ": inconsistent dimensions");
    }
}

}  // namespace

RealMatrix bfgs_update_H(const RealMatrix& H, const RealVector& s, const RealVector& y) {
    check_update_shapes(H, s, y, "bfgs_update_H");
    const double ys = dot(y, s);
    if (!(ys > 0.0)) throw CurvatureError("bfgs_update_H: curvature condition yᵀs > 0 violated");
    const double rho = 1.0 / ys;

    // Expanded product: H − ρ(Hy sᵀ + s (Hy)ᵀ) + (ρ² yᵀHy + ρ) s sᵀ.
    const RealVector hy = matvec(H, y);
    const double yhy = dot(y, hy);
    const double ss_coeff = rho * rho * yhy + rho;
    const std::size_t n = s.size();
    RealMatrix out = H;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out(i, j) += -rho * (hy[i] * s[j] + s[i] * hy[j]) + ss_coeff * s[i] * s[j];
        }
    }
    symmetrize(out);
    return out;
}

RealMatrix bfgs_update_B(const RealMatrix& B, const RealVector& s, const RealVector& y) {
    check_update_shapes(B, s, y, "bfgs_update_B");
    const double ys = dot(y, s);
    if (!(ys > 0.0)) throw CurvatureError("bfgs_update_B: curvature condition yᵀs > 0 violated");
    const RealVector bs = matvec(B, s);
    const double sbs = dot(s, bs);
    if (!(sbs > 0.0)) throw CurvatureError("bfgs_update_B: sᵀBs must be positive");
    const std::size_t n = s.size();
    RealMatrix out = B;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) out(i, j) += y[i] * y[j] / ys - bs[i] * bs[j] / sbs;
    }
    symmetrize(out);
    return out;
}

MinimizeResult bfgs_minimize(const Objective& obj, const RealVector& x0, const StopCriteria& stop,
                             const WolfeConfig& wolfe, const BfgsObserver& observer) {
    stop.validate();
    wolfe.validate();
    if (x0.size() != obj.dim()) throw DimensionError("bfgs_minimize: x0 length differs from objective dimension");

    const std::size_t n = obj.dim();
    Evaluation start = obj(x0);
    BfgsState state{x0, start.f, std::move(start.g), RealMatrix::identity(n), 0, 0};

    MinimizeResult result{state.x, state.f, norm2(state.g), 0, Status::max_iters, {}, 0};
    result.history.push_back({0, state.f, result.grad_norm_final, std::nullopt});

    auto finish = [&](Status status) {
        result.x_final = state.x;
        result.f_final = state.f;
        result.grad_norm_final = norm2(state.g);
        result.iters = state.iter;
        result.status = status;
        result.n_skipped_updates = state.n_skipped_updates;
        return result;
    };

    if (result.grad_norm_final <= stop.grad_tol) return finish(Status::converged_grad);

    while (state.iter < stop.max_iters) {
        RealVector direction = -1.0 * matvec(state.H, state.g);
        bool restarted = false;
        if (!(dot(state.g, direction) < 0.0)) {
            // Rounding can destroy descent for a badly conditioned H.
            state.H = RealMatrix::identity(n);
            direction = -1.0 * state.g;
            restarted = true;
        }

        std::optional<LineSearchResult> step;
        try {
            step = wolfe_line_search(obj, state.x, direction, state.f, state.g, wolfe);
        } catch (const LineSearchError&) {
            if (restarted) return finish(Status::line_search_failed);
        }
        if (!step) {
            state.H = RealMatrix::identity(n);
            direction = -1.0 * state.g;
            restarted = true;
            try {
                step = wolfe_line_search(obj, state.x, direction, state.f, state.g, wolfe);
            } catch (const LineSearchError&) {
                return finish(Status::line_search_failed);
            }
        }

        RealVector x_new = axpy(step->alpha, direction, state.x);
        const RealVector s = x_new - state.x;
        const RealVector y = step->g_new - state.g;

        RealMatrix H_new = state.H;
        bool updated = false;
        if (dot(y, s) > kCurvatureFloor * norm2(y) * norm2(s)) {
            H_new = bfgs_update_H(state.H, s, y);
            updated = true;
        } else {
            ++state.n_skipped_updates;
        }

        if (observer) {
            observer(BfgsStep{obj, state.iter + 1, state.x, state.f, state.g, direction, step->alpha, x_new,
                              step->f_new, step->g_new, state.H, H_new, updated, restarted});
        }

        const double f_prev = state.f;
        state.x = std::move(x_new);
        state.f = step->f_new;
        state.g = std::move(step->g_new);
        state.H = std::move(H_new);
        ++state.iter;

        const double gnorm = norm2(state.g);
        result.history.push_back({state.iter, state.f, gnorm, std::nullopt});

        if (gnorm <= stop.grad_tol) return finish(Status::converged_grad);
        if (stop.f_tol > 0.0 && std::abs(f_prev - state.f) <= stop.f_tol * std::max(1.0, std::abs(f_prev))) {
            return finish(Status::converged_ftol);
        }
    }
    return finish(Status::max_iters);
}

// ---------------------------------------------------------------------------
// MLP trainers

Objective mlp_objective(const Network& net, const Dataset& data) {
    const Topology topology = net.topology();
    return Objective(topology.param_count(), [topology, &data](const RealVector& x) {
        const Network probe(topology, x);
        return Evaluation{loss_mse(probe, data, RowSet::train),
                          grad_backprop(probe, data, RowSet::train).values()};
    });
}

namespace {

HistoryEntry epoch_entry(std::size_t epoch, const Network& net, const Dataset& data) {
    const double train = loss_mse(net, data, RowSet::train);
    const double test = loss_mse(net, data, RowSet::test);
    double gnorm = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(train)) gnorm = norm2(grad_backprop(net, data, RowSet::train).values());
    return HistoryEntry{epoch, train, gnorm, test};
}

// One pass of the per-example delta rule. Deltas for a row are computed from
// the pre-update weights, then every weight moves by η·δ·(upstream activation).
void online_epoch(ParamVector& p, const Dataset& data, double eta) {
    const Topology& t = p.topology();
    std::vector<double> hidden(t.n_hidden);
    std::vector<double> delta_hidden(t.n_hidden);
    for (std::size_t r = 0; r < data.split_index(); ++r) {
        const Network snapshot(p);
        const auto& x = data.inputs()[r];
        const ForwardResult fw = forward(snapshot, x);
        const double out = fw.output[0];
        const double delta_out = out * (1.0 - out) * (data.targets_norm()[r] - out);
        for (std::size_t h = 0; h < t.n_hidden; ++h) {
            const double oh = fw.hidden[h];
            delta_hidden[h] = oh * (1.0 - oh) * p.w_out(0, h) * delta_out;
        }
        for (std::size_t h = 0; h < t.n_hidden; ++h) {
            p[t.w_out_offset() + h] += eta * delta_out * fw.hidden[h];
            p[t.b_hidden_offset() + h] += eta * delta_hidden[h];
            for (std::size_t i = 0; i < t.n_in; ++i) {
                p[t.w_hidden_offset() + h * t.n_in + i] += eta * delta_hidden[h] * x[i];
            }
        }
        p[t.b_out_offset()] += eta * delta_out;
    }
}

}  // namespace

TrainResult gd_train(const Network& net, const Dataset& data, const GdConfig& cfg) {
    cfg.validate();
    // Surfaces dimension errors before any training.
    (void)loss_mse(net, data, RowSet::train);

    Network current = net;
    MinimizeResult result{current.params().values(), 0.0, 0.0, 0, Status::max_iters, {}, 0};
    result.history.push_back(epoch_entry(0, current, data));

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        if (cfg.mode == GdMode::online) {
            online_epoch(current.params(), data, cfg.eta);
        } else {
            const ParamVector grad = grad_backprop(current, data, RowSet::train);
            for (std::size_t i = 0; i < grad.size(); ++i) current.params()[i] -= cfg.eta * grad[i];
        }
        HistoryEntry entry = epoch_entry(epoch, current, data);
        const bool finite = std::isfinite(entry.f) && current.params().values().all_finite();
        result.history.push_back(entry);
        result.iters = epoch;
        if (!finite) {
            result.status = Status::diverged;
            break;
        }
    }

    const HistoryEntry& last = result.history.back();
    result.x_final = current.params().values();
    result.f_final = last.f;
    result.grad_norm_final = last.grad_norm;
    return TrainResult{std::move(current), std::move(result)};
}

TrainResult bfgs_train(const Network& net, const Dataset& data, const StopCriteria& stop, const WolfeConfig& wolfe,
                       const BfgsObserver& observer) {
    const Objective objective = mlp_objective(net, data);
    const Topology topology = net.topology();

    std::vector<double> test_losses{loss_mse(net, data, RowSet::test)};
    auto track = [&](const BfgsStep& step) {
        test_losses.push_back(loss_mse(Network(topology, step.x_new), data, RowSet::test));
        if (observer) observer(step);
    };

    MinimizeResult result = bfgs_minimize(objective, net.params().values(), stop, wolfe, track);
    for (std::size_t i = 0; i < result.history.size(); ++i) result.history[i].test_f = test_losses[i];
    Network trained(topology, result.x_final);
    return TrainResult{std::move(trained), std::move(result)};
}

}  // namespace hbp
