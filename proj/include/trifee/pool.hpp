// Constant-product pool: reserves, quoting and price mapping.
//
// Quantities are real-valued. X is the traded asset, Y is the numeraire, and
// the implied price is y/x (Y per X). A trade is described by dx, the signed
// quantity of X withdrawn from the pool; the matching dy is the signed
// quantity of Y deposited. Fees never touch the reserves.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace trifee {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct PoolState {
    double x = 0.0;
    double y = 0.0;

    [[nodiscard]] double product() const noexcept { return x * y; }
};

struct TradeReceipt {
    double dx = 0.0;
    double dy = 0.0;
    double fee = 0.0;
    double price_before = 0.0;
    double price_after = 0.0;
};

inline PoolState make_pool(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
        throw DomainError("pool reserves must be positive and finite");
    return PoolState{x, y};
}

namespace detail {
inline void require_tradeable(const PoolState& pool, double dx) {
    if (!std::isfinite(dx))
        throw DomainError("trade size must be finite");
    if (dx >= pool.x)
        throw DomainError("trade of " + std::to_string(dx) + " X would drain a pool holding " +
                          std::to_string(pool.x));
}
}  // namespace detail

[[nodiscard]] inline double implied_price(const PoolState& pool) noexcept { return pool.y / pool.x; }

// Y deposited for withdrawing dx of X. Written as y*dx/(x-dx), which is the
// constant-product xy/(x-dx) - y without the cancellation for small dx.
[[nodiscard]] inline double quote_dy(const PoolState& pool, double dx) {
    detail::require_tradeable(pool, dx);
    return pool.y * dx / (pool.x - dx);
}

[[nodiscard]] inline double price_after(const PoolState& pool, double dx) {
    detail::require_tradeable(pool, dx);
    const double rest = pool.x - dx;
    return pool.x * pool.y / (rest * rest);
}

// price_after / implied_price - 1, without the cancellation of forming the ratio first.
[[nodiscard]] inline double relative_price_move(const PoolState& pool, double dx) {
    detail::require_tradeable(pool, dx);
    const double rest = pool.x - dx;
    return dx * (pool.x + rest) / (rest * rest);
}

// The dx that moves the implied price by the factor (1 + rel); rel > -1.
[[nodiscard]] inline double size_for_relative_move(const PoolState& pool, double rel) {
    if (!(rel > -1.0) || !std::isfinite(rel))
        throw DomainError("relative price move must be finite and greater than -1");
    // 1 - 1/sqrt(1 + rel) == (rel / (1 + rel)) / (1 + 1/sqrt(1 + rel))
    const double ratio = 1.0 / (1.0 + rel);
    return pool.x * (rel / (1.0 + rel)) / (1.0 + std::sqrt(ratio));
}

// Inverse of price_after: the dx that moves the implied price to `target`.
[[nodiscard]] inline double size_for_target_price(const PoolState& pool, double target) {
    if (!(target > 0.0) || !std::isfinite(target))
        throw DomainError("target price must be positive and finite");
    const double p0 = implied_price(pool);
    // 1 - sqrt(r) == (1 - r) / (1 + sqrt(r)) keeps precision when target ~ p0.
    const double ratio = p0 / target;
    return pool.x * (1.0 - ratio) / (1.0 + std::sqrt(ratio));
}

}  // namespace trifee
