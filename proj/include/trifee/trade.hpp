// Trade execution against a pool with fees routed to a separate account.
#pragma once

#include <utility>

#include "trifee/fee_schedule.hpp"
#include "trifee/pool.hpp"

namespace trifee {

// Fees collected outside the reserves.
struct FeeAccount {
    double collected = 0.0;
    void credit(double fee) noexcept { collected += fee; }
};

// Returns the post-trade pool and the receipt. The reserves follow the pure
// constant-product rule; the fee is only recorded on the receipt.
[[nodiscard]] inline std::pair<PoolState, TradeReceipt> apply_trade(const PoolState& pool,
                                                                    const FeeParams& params, double dx) {
    TradeReceipt receipt;
    receipt.dx = dx;
    receipt.price_before = implied_price(pool);
    receipt.dy = quote_dy(pool, dx);
    receipt.fee = total_fee(pool, params, dx);
    const PoolState next{pool.x - dx, pool.y + receipt.dy};
    receipt.price_after = implied_price(next);
    return {next, receipt};
}

inline TradeReceipt apply_trade(PoolState& pool, const FeeParams& params, double dx, FeeAccount& account) {
    auto [next, receipt] = apply_trade(std::as_const(pool), params, dx);
    pool = next;
    account.credit(receipt.fee);
    return receipt;
}

}  // namespace trifee
