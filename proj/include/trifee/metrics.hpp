// Loss-versus-rebalancing, fee revenue and price-deviation accounting.
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "trifee/fee_schedule.hpp"
#include "trifee/pool.hpp"

namespace trifee {

// Running sum of squared slippage for one probe quantile.
struct SlippageAccumulator {
    double sum_sq = 0.0;
    std::int64_t count = 0;

    void add(double slippage) noexcept {
        sum_sq += slippage * slippage;
        ++count;
    }
    void merge(const SlippageAccumulator& other) noexcept {
        sum_sq += other.sum_sq;
        count += other.count;
    }
    [[nodiscard]] double rms() const noexcept {
        return count == 0 ? 0.0 : std::sqrt(sum_sq / static_cast<double>(count));
    }
};

struct WorldResult {
    double loss = 0.0;  // lvr_gross - fee_revenue
    double lvr_gross = 0.0;
    double fee_revenue = 0.0;
    double rms_deviation_bps = 0.0;
    std::int64_t n_trades = 0;
    std::vector<SlippageAccumulator> slippage;  // aligned with the configured probe quantiles
    std::uint64_t seed = 0;
    FeeParams params;
    double initial_value = 0.0;  // pool value at the initial true price

    [[nodiscard]] double rms_slippage(std::size_t quantile_index) const {
        return slippage.at(quantile_index).rms();
    }
    [[nodiscard]] double loss_per_initial_value() const noexcept {
        return initial_value > 0.0 ? loss / initial_value : 0.0;
    }
};

// Value extracted from the pool by a trade, priced at the true price, before fees.
[[nodiscard]] inline double lvr_increment(const TradeReceipt& receipt, double true_price) noexcept {
    return receipt.dx * true_price - receipt.dy;
}

[[nodiscard]] inline double portfolio_value(const PoolState& pool, double true_price) noexcept {
    return pool.x * true_price + pool.y;
}

[[nodiscard]] inline double world_loss(std::span<const TradeReceipt> receipts, std::span<const double> true_prices,
                                       double fee_revenue) {
    if (receipts.size() != true_prices.size())
        throw DomainError("receipts and true prices must be aligned");
    double lvr = 0.0;
    for (std::size_t i = 0; i < receipts.size(); ++i) lvr += lvr_increment(receipts[i], true_prices[i]);
    return lvr - fee_revenue;
}

// Accumulates relative AMM-vs-true deviations one step at a time.
class DeviationAccumulator {
public:
    void add(double amm_price, double true_price) noexcept {
        const double rel = (amm_price - true_price) / true_price;
        sum_sq_ += rel * rel;
        ++count_;
    }
    [[nodiscard]] std::int64_t count() const noexcept { return count_; }
    [[nodiscard]] double rms_bps() const noexcept {
        return count_ == 0 ? 0.0 : std::sqrt(sum_sq_ / static_cast<double>(count_)) * 1e4;
    }

private:
    double sum_sq_ = 0.0;
    std::int64_t count_ = 0;
};

[[nodiscard]] inline double rms_deviation(std::span<const double> amm_prices, std::span<const double> true_prices) {
    if (amm_prices.empty()) throw DomainError("rms_deviation needs at least one sample");
    if (amm_prices.size() != true_prices.size()) throw DomainError("price sequences must have equal length");
    DeviationAccumulator acc;
    for (std::size_t i = 0; i < amm_prices.size(); ++i) acc.add(amm_prices[i], true_prices[i]);
    return acc.rms_bps();
}

}  // namespace trifee
