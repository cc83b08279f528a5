// Triangle fee schedule.
//
// The marginal fee starts at the initial fee f on the first unit of a trade
// and declines by |m| for every unit of absolute movement in the implied
// price, never falling below the base fee b. The total fee for a trade is the
// integral of that marginal rate along the trade path; it has a closed form
// with four branches (buy/sell, before/after the base fee binds).
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

#include "trifee/pool.hpp"

namespace trifee {

struct FeeParams {
    double f = 0.0;  // initial fee, fraction (0.002 = 20 bps)
    double b = 0.0;  // base fee, fraction
    double m = 0.0;  // slope per unit of absolute price movement, <= 0

    static FeeParams constant(double fee) { return FeeParams{fee, fee, 0.0}; }
    static FeeParams from_bps(double f_bps, double b_bps, double m) {
        return FeeParams{f_bps * 1e-4, b_bps * 1e-4, m};
    }

    // b == f or m == 0: the schedule is the flat rate f.
    [[nodiscard]] bool is_constant() const noexcept { return m == 0.0 || b == f; }
};

inline void validate(const FeeParams& p) {
    if (!std::isfinite(p.f) || !std::isfinite(p.b) || !std::isfinite(p.m))
        throw DomainError("fee parameters must be finite");
    if (p.b < 0.0 || p.b > p.f)
        throw DomainError("fee parameters require 0 <= b <= f");
    if (p.m > 0.0)
        throw DomainError("fee slope m must be <= 0");
}

// Relative positions k = (x - dx)/x where the marginal fee reaches b.
// k_lower is +inf when the sell-side fee never decays to b before the price
// reaches zero; dx_lower is then -inf.
struct FeeThresholds {
    double k_upper = 1.0;
    double k_lower = 1.0;
    double dx_upper = 0.0;
    double dx_lower = 0.0;
};

[[nodiscard]] inline FeeThresholds thresholds(const PoolState& pool, const FeeParams& params) {
    validate(params);
    if (params.m == 0.0)
        throw DomainError("fee thresholds are undefined for m = 0; use the constant-fee path");
    const double p0 = implied_price(pool);
    // price gap at which f + m*gap == b
    const double gap = (params.b - params.f) / params.m;
    const double rel = gap / p0;

    FeeThresholds t;
    // k^2 = 1/(1 + rel); 1 - k = (1 - k^2)/(1 + k) avoids cancellation.
    t.k_upper = std::sqrt(1.0 / (1.0 + rel));
    t.dx_upper = pool.x * (rel / (1.0 + rel)) / (1.0 + t.k_upper);
    if (rel < 1.0) {
        t.k_lower = std::sqrt(1.0 / (1.0 - rel));
        t.dx_lower = pool.x * (-rel / (1.0 - rel)) / (1.0 + t.k_lower);
    } else {
        t.k_lower = std::numeric_limits<double>::infinity();
        t.dx_lower = -std::numeric_limits<double>::infinity();
    }
    return t;
}

// Marginal rate after w of X has already been traded along the path.
[[nodiscard]] inline double marginal_fee(const PoolState& pool, const FeeParams& params, double w) {
    validate(params);
    detail::require_tradeable(pool, w);
    if (params.is_constant()) return params.f;
    const double rest = pool.x - w;
    const double moved = pool.x * pool.y / (rest * rest) - implied_price(pool);
    const double rate = w >= 0.0 ? params.f + params.m * moved : params.f - params.m * moved;
    return std::max(params.b, rate);
}

enum class FeeBranch : std::uint8_t {
    Constant,    // b == f or m == 0
    BuyFloor,    // dx > dx_upper
    BuyDecline,  // 0 <= dx <= dx_upper
    SellDecline, // dx_lower <= dx < 0
    SellFloor,   // dx < dx_lower
};

[[nodiscard]] constexpr std::string_view branch_name(FeeBranch branch) noexcept {
    switch (branch) {
        case FeeBranch::Constant: return "constant (b=f)";
        case FeeBranch::BuyFloor: return "case 1";
        case FeeBranch::BuyDecline: return "case 2";
        case FeeBranch::SellDecline: return "case 3";
        case FeeBranch::SellFloor: return "case 4";
    }
    return "unknown";
}

[[nodiscard]] inline FeeBranch fee_branch(const PoolState& pool, const FeeParams& params, double dx) {
    validate(params);
    detail::require_tradeable(pool, dx);
    if (params.is_constant()) return FeeBranch::Constant;
    const FeeThresholds t = thresholds(pool, params);
    if (dx > t.dx_upper) return FeeBranch::BuyFloor;
    if (dx >= 0.0) return FeeBranch::BuyDecline;
    if (dx >= t.dx_lower) return FeeBranch::SellDecline;
    return FeeBranch::SellFloor;
}

// Evaluates one closed-form branch at dx regardless of which branch dx falls
// in. Used by total_fee and for checking continuity at the thresholds.
[[nodiscard]] inline double fee_branch_value(const PoolState& pool, const FeeParams& params,
                                             const FeeThresholds& t, FeeBranch branch, double dx) {
    const double x = pool.x;
    const double y = pool.y;
    const double f = params.f;
    const double b = params.b;
    const double m = params.m;
    // m*(xy/(x-dx) - (y/x)dx - y) == m*y*dx^2/(x(x-dx))
    const auto curve = [&](double d) { return m * y * d * d / (x * (x - d)); };
    // m*(y/k - y(2-k)) == m*y*(1-k)^2/k
    const auto curve_at = [&](double k) { return m * y * (1.0 - k) * (1.0 - k) / k; };

    switch (branch) {
        case FeeBranch::Constant:
            return f * std::abs(dx);
        case FeeBranch::BuyFloor:
            return f * t.dx_upper + curve_at(t.k_upper) + b * (dx - t.dx_upper);
        case FeeBranch::BuyDecline:
            return f * dx + curve(dx);
        case FeeBranch::SellDecline:
            return -f * dx + curve(dx);
        case FeeBranch::SellFloor:
            return -f * t.dx_lower + curve_at(t.k_lower) - b * (dx - t.dx_lower);
    }
    return 0.0;
}

[[nodiscard]] inline double total_fee(const PoolState& pool, const FeeParams& params, double dx) {
    const FeeBranch branch = fee_branch(pool, params, dx);
    if (branch == FeeBranch::Constant) return params.f * std::abs(dx);
    return fee_branch_value(pool, params, thresholds(pool, params), branch, dx);
}

namespace detail {

// Composite Simpson over [a, b] with an even number of panels, Kahan-summed.
template <class F>
[[nodiscard]] double simpson(const F& g, double a, double b, std::int64_t panels) {
    if (panels < 2) panels = 2;
    if (panels % 2 != 0) ++panels;
    const double h = (b - a) / static_cast<double>(panels);
    double sum = 0.0;
    double carry = 0.0;
    for (std::int64_t i = 0; i <= panels; ++i) {
        const double weight = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        const double w = i == panels ? b : a + static_cast<double>(i) * h;
        const double term = weight * g(w) - carry;
        const double next = sum + term;
        carry = (next - sum) - term;
        sum = next;
    }
    return sum * std::abs(h) / 3.0;
}

}  // namespace detail

// Numerical integral of marginal_fee over [0, dx]. The floor kink is located by
// bisection on marginal_fee itself and each smooth piece is integrated with
// Simpson's rule, so the result stays independent of the closed form.
[[nodiscard]] inline double quadrature_fee(const PoolState& pool, const FeeParams& params, double dx,
                                           std::int64_t n_steps) {
    validate(params);
    detail::require_tradeable(pool, dx);
    if (n_steps < 1) throw DomainError("quadrature needs at least one step");
    if (dx == 0.0) return 0.0;
    const auto g = [&](double w) { return marginal_fee(pool, params, w); };
    if (params.is_constant() || !(g(dx) <= params.b)) return detail::simpson(g, 0.0, dx, n_steps);

    // marginal_fee is monotone along the trade, so bisect for the last point above the floor.
    double inside = 0.0;
    double floor_side = dx;
    for (int i = 0; i < 200 && inside != floor_side; ++i) {
        const double mid = 0.5 * (inside + floor_side);
        if (mid == inside || mid == floor_side) break;
        (g(mid) > params.b ? inside : floor_side) = mid;
    }
    const double kink = floor_side;
    const double share = kink / dx;
    const auto first = std::max<std::int64_t>(2, static_cast<std::int64_t>(share * static_cast<double>(n_steps)));
    const auto second = std::max<std::int64_t>(2, n_steps - first);
    return detail::simpson(g, 0.0, kink, first) + detail::simpson(g, kink, dx, second);
}

}  // namespace trifee
