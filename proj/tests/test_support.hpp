#pragma once

// Independent oracles and generators shared by the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hbp/linalg.hpp"
#include "hbp/optim.hpp"
#include "hbp/random.hpp"

namespace hbp::test {

inline RealVector random_vector(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    RealVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = uniform(rng, lo, hi);
    return v;
}

/// M Mᵀ + shift·I with M uniform in [−1, 1].
inline RealMatrix random_spd(Rng& rng, std::size_t n, double shift = 0.5) {
    RealMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = uniform(rng, -1.0, 1.0);
    RealMatrix a = matmul(m, m.transposed());
    for (std::size_t i = 0; i < n; ++i) a(i, i) += shift;
    return a;
}

/// f(x) = ½ xᵀAx − bᵀx
inline Objective quadratic(const RealMatrix& a, const RealVector& b) {
    return Objective(b.size(), [a, b](const RealVector& x) {
        const RealVector ax = matvec(a, x);
        return Evaluation{0.5 * dot(x, ax) - dot(b, x), ax - b};
    });
}

/// Explicit-product form of the inverse update, computed with matrix products
/// rather than the expanded rank-two form used by the library.
inline RealMatrix inverse_update_by_products(const RealMatrix& h, const RealVector& s, const RealVector& y) {
    const std::size_t n = s.size();
    const double rho = 1.0 / dot(y, s);
    RealMatrix left = RealMatrix::identity(n);
    RealMatrix right = RealMatrix::identity(n);
    const RealMatrix sy = outer(s, y);
    const RealMatrix ys = outer(y, s);
    const RealMatrix ss = outer(s, s);
    RealMatrix tail(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            left(i, j) -= rho * sy(i, j);
            right(i, j) -= rho * ys(i, j);
            tail(i, j) = rho * ss(i, j);
        }
    }
    RealMatrix out = matmul(matmul(left, h), right);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) += tail(i, j);
    return out;
}

inline double max_abs_diff(const RealMatrix& a, const RealMatrix& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
    return worst;
}

/// max_i |a_i − b_i| / max(|b|_∞, tiny)
inline double rel_vec_error(const RealVector& a, const RealVector& b) {
    double scale = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        scale = std::max(scale, std::abs(b[i]));
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst / std::max(scale, 1e-300);
}

struct WolfeVerdict {
    bool sufficient_decrease;
    bool curvature;
    bool ok() const { return sufficient_decrease && curvature; }
};

/// Re-evaluates the objective at x + αp and checks both strong Wolfe inequalities.
inline WolfeVerdict check_strong_wolfe(const Objective& obj, const RealVector& x, const RealVector& p, double f0,
                                       const RealVector& g0, double alpha, double c1, double c2) {
    const double d0 = dot(g0, p);
    const Evaluation at = obj(axpy(alpha, p, x));
    return WolfeVerdict{alpha > 0.0 && at.f <= f0 + c1 * alpha * d0, std::abs(dot(at.g, p)) <= c2 * std::abs(d0)};
}

/// Tallies invariant violations over every accepted BFGS step.
struct BfgsAudit {
    double c1 = 1e-4;
    double c2 = 0.9;
    std::size_t steps = 0;
    std::size_t updates = 0;
    std::size_t wolfe_violations = 0;
    std::size_t descent_violations = 0;
    std::size_t monotone_violations = 0;
    std::size_t symmetry_violations = 0;
    std::size_t spd_violations = 0;
    std::size_t secant_violations = 0;
    double worst_secant = 0.0;

    void operator()(const BfgsStep& st) {
        ++steps;
        const double d0 = dot(st.g, st.direction);
        if (!(d0 < 0.0)) ++descent_violations;
        if (!check_strong_wolfe(st.objective, st.x, st.direction, st.f, st.g, st.alpha, c1, c2).ok()) {
            ++wolfe_violations;
        }
        if (!(st.f_new <= st.f + c1 * st.alpha * d0 && st.f_new < st.f)) ++monotone_violations;
        if (!st.updated) return;
        ++updates;
        if (!st.H_after.is_symmetric(1e-10)) ++symmetry_violations;
        if (!is_spd(st.H_after, 1e-14)) ++spd_violations;
        const RealVector s = st.x_new - st.x;
        const RealVector y = st.g_new - st.g;
        const double err = rel_vec_error(matvec(st.H_after, y), s);
        worst_secant = std::max(worst_secant, err);
        if (err > 1e-9) ++secant_violations;
    }

    std::size_t invariant_violations() const {
        return symmetry_violations + spd_violations + secant_violations + descent_violations;
    }
};

}  // namespace hbp::test
