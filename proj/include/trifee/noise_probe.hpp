// Counterfactual noise-trader probes: trades sized to hit a target price
// impact, scored by all-in slippage against the true price.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trifee/fee_schedule.hpp"
#include "trifee/pool.hpp"

namespace trifee {

enum class Direction : std::uint8_t { BuyX, SellX };

struct ImpactQuantile {
    double quantile;
    double impact_bps;
};

class ImpactQuantileTable {
public:
    ImpactQuantileTable() = default;
    explicit ImpactQuantileTable(std::vector<ImpactQuantile> entries) : entries_(std::move(entries)) {
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            const auto& e = entries_[i];
            if (!(e.quantile >= 0.0 && e.quantile <= 1.0))
                throw DomainError("impact quantiles must lie in [0, 1]");
            if (!(e.impact_bps >= 0.0) || !std::isfinite(e.impact_bps))
                throw DomainError("impacts must be nonnegative");
            if (i > 0 && !(e.quantile > entries_[i - 1].quantile))
                throw DomainError("impact quantiles must be strictly increasing");
            if (i > 0 && e.impact_bps < entries_[i - 1].impact_bps)
                throw DomainError("impacts must be nondecreasing");
        }
    }

    // Price-impact distribution of Uniswap swaps, in bps.
    static ImpactQuantileTable defaults() {
        return ImpactQuantileTable({{0.05, 0.0069},
                                    {0.25, 0.1021},
                                    {0.50, 3.7774},
                                    {0.75, 9.9981},
                                    {0.95, 10.7545},
                                    {0.99, 17.3149},
                                    {0.999, 69.2415},
                                    {0.9999, 212.1279}});
    }

    [[nodiscard]] const std::vector<ImpactQuantile>& entries() const& noexcept { return entries_; }
    [[nodiscard]] std::vector<ImpactQuantile> entries() && noexcept { return std::move(entries_); }

    [[nodiscard]] double impact_for(double quantile) const {
        for (const auto& e : entries_)
            if (e.quantile == quantile) return e.impact_bps;
        throw DomainError("quantile " + std::to_string(quantile) + " is not in the impact table");
    }

private:
    std::vector<ImpactQuantile> entries_;
};

struct SlippageSample {
    Direction direction;
    double impact_bps;
    double slippage;
};

[[nodiscard]] inline double probe_size(const PoolState& pool, double impact_bps, Direction direction) {
    if (!(impact_bps >= 0.0) || !std::isfinite(impact_bps))
        throw DomainError("probe impact must be nonnegative");
    if (impact_bps == 0.0) return 0.0;
    const double rel = impact_bps * 1e-4;
    if (direction == Direction::SellX && rel >= 1.0) throw DomainError("sell probe impact must be below 10000 bps");
    return size_for_relative_move(pool, direction == Direction::BuyX ? rel : -rel);
}

// Positive slippage is worse than trading the same size at the true price.
// Returns nullopt for a zero-size probe, which is excluded from aggregates.
[[nodiscard]] inline std::optional<double> probe_slippage(const PoolState& pool, const FeeParams& params,
                                                          double true_price, double impact_bps,
                                                          Direction direction) {
    const double dx = probe_size(pool, impact_bps, direction);
    if (dx == 0.0) return std::nullopt;
    const double dy = quote_dy(pool, dx);
    const double fee = total_fee(pool, params, dx);
    if (direction == Direction::BuyX) {
        const double paid_per_unit = (dy + fee) / dx;
        return paid_per_unit / true_price - 1.0;
    }
    const double received_per_unit = (-dy - fee) / (-dx);
    return 1.0 - received_per_unit / true_price;
}

[[nodiscard]] inline double rms_slippage(std::span<const SlippageSample> samples) {
    if (samples.empty()) throw DomainError("rms_slippage needs at least one sample");
    double sum_sq = 0.0;
    for (const auto& s : samples) sum_sq += s.slippage * s.slippage;
    return std::sqrt(sum_sq / static_cast<double>(samples.size()));
}

}  // namespace trifee
