// Profit-maximizing arbitrageur.
//
// Profit of withdrawing dx of X is p*·dx - dy - fee - gas. Its derivative is
// p* - P(dx) - marginal_fee on the buy side (P = post-trade implied price)
// and p* - P(dx) + marginal_fee on the sell side. Each piece of the fee
// schedule therefore has a closed-form stationary price; the global optimum is
// among those stationary points, the piece boundaries and dx = 0. For m <= -1
// the declining piece is not concave, which is why the search enumerates
// candidates instead of climbing.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "trifee/fee_schedule.hpp"
#include "trifee/pool.hpp"

namespace trifee {

struct ArbContext {
    double true_price = 1.0;
    double gas = 0.0;
};

struct ArbDecision {
    std::optional<double> trade;
    double expected_profit = 0.0;
};

struct OptimizerOptions {
    // Golden-section refinement inside the declining pieces when |1 + m| is
    // below this; 0 disables it.
    double golden_refine_below = 0.0;
    int golden_iterations = 200;
};

[[nodiscard]] inline double arb_profit(const PoolState& pool, const FeeParams& params, const ArbContext& ctx,
                                       double dx) {
    if (dx == 0.0) return 0.0;
    return ctx.true_price * dx - quote_dy(pool, dx) - total_fee(pool, params, dx) - ctx.gas;
}

namespace detail {

struct Interval {
    double lo;
    double hi;
};

inline double golden_max(const PoolState& pool, const FeeParams& params, const ArbContext& ctx, Interval iv,
                         int iterations) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = iv.lo;
    double b = iv.hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = arb_profit(pool, params, ctx, c);
    double fd = arb_profit(pool, params, ctx, d);
    for (int i = 0; i < iterations && b - a > 1e-12 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = arb_profit(pool, params, ctx, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = arb_profit(pool, params, ctx, d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

[[nodiscard]] inline ArbDecision optimal_trade(const PoolState& pool, const FeeParams& params,
                                               const ArbContext& ctx, const OptimizerOptions& opts = {}) {
    validate(params);
    const double p0 = implied_price(pool);
    const double pstar = ctx.true_price;
    constexpr double inf = std::numeric_limits<double>::infinity();

    std::vector<double> candidates;
    candidates.reserve(10);
    // Maps a stationary price to dx and clamps it into [lo, hi].
    const auto add_target = [&](double target, double lo, double hi) {
        if (!(target > 0.0) || !std::isfinite(target)) return;
        double dx = size_for_target_price(pool, target);
        dx = std::clamp(dx, lo, hi);
        if (std::isfinite(dx) && dx < pool.x) candidates.push_back(dx);
    };

    if (params.is_constant()) {
        add_target(pstar - params.f, 0.0, inf);
        add_target(pstar + params.f, -inf, 0.0);
    } else {
        const FeeThresholds t = thresholds(pool, params);
        const double f = params.f;
        const double b = params.b;
        const double m = params.m;
        const double slope = 1.0 + m;

        candidates.push_back(t.dx_upper);
        if (std::isfinite(t.dx_lower)) candidates.push_back(t.dx_lower);

        // Declining pieces: p* - P - (f + m(P - p0)) = 0 and p* - P + (f - m(P - p0)) = 0.
        if (slope != 0.0) {
            add_target((pstar - f + m * p0) / slope, 0.0, t.dx_upper);
            add_target((pstar + f + m * p0) / slope, t.dx_lower, 0.0);
        }
        // Floor pieces: P = p* - b and P = p* + b.
        add_target(pstar - b, t.dx_upper, inf);
        add_target(pstar + b, -inf, t.dx_lower);

        if (std::abs(slope) < opts.golden_refine_below) {
            candidates.push_back(
                detail::golden_max(pool, params, ctx, {0.0, t.dx_upper}, opts.golden_iterations));
            if (std::isfinite(t.dx_lower))
                candidates.push_back(
                    detail::golden_max(pool, params, ctx, {t.dx_lower, 0.0}, opts.golden_iterations));
        }
    }

    ArbDecision best;
    for (const double dx : candidates) {
        if (dx == 0.0) continue;
        const double profit = arb_profit(pool, params, ctx, dx);
        if (profit > best.expected_profit) {
            best.expected_profit = profit;
            best.trade = dx;
        }
    }
    return best;
}

// Brute-force scan used as a test oracle. Half of the points cover each
// direction; each half mixes a linear grid in target price with a log grid in
// |dx|, reaching a price move of 10x the current deviation (or 10x f when the
// pool is already at the true price).
[[nodiscard]] inline double grid_search_oracle(const PoolState& pool, const FeeParams& params,
                                               const ArbContext& ctx, std::int64_t n_points) {
    const double p0 = implied_price(pool);
    const double deviation = std::abs(ctx.true_price - p0);
    const double span = 10.0 * std::max(deviation, std::max(params.f, 1e-6) * p0);
    const std::int64_t per_grid = std::max<std::int64_t>(1, n_points / 4);

    double best_dx = 0.0;
    double best_profit = 0.0;
    const auto consider = [&](double dx) {
        if (!(dx < pool.x) || dx == 0.0) return;
        const double profit = arb_profit(pool, params, ctx, dx);
        if (profit > best_profit) {
            best_profit = profit;
            best_dx = dx;
        }
    };

    for (const double dir : {1.0, -1.0}) {
        const double far_price = std::max(p0 + dir * span, p0 * 1e-6);
        const double far_dx = size_for_target_price(pool, far_price);
        for (std::int64_t i = 1; i <= per_grid; ++i) {
            const double s = static_cast<double>(i) / static_cast<double>(per_grid);
            consider(size_for_target_price(pool, p0 + s * (far_price - p0)));
        }
        const double lo = std::log(std::abs(far_dx) * 1e-9);
        const double hi = std::log(std::abs(far_dx));
        for (std::int64_t i = 0; i <= per_grid; ++i) {
            const double s = static_cast<double>(i) / static_cast<double>(per_grid);
            consider(dir * std::exp(lo + s * (hi - lo)));
        }
    }
    return best_dx;
}

}  // namespace trifee
