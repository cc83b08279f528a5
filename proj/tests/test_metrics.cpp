#include <gtest/gtest.h>

#include "rebalancing_oracle.hpp"
#include "test_support.hpp"
#include "trifee/metrics.hpp"

using namespace trifee;
using trifee::testing::rel_diff;

TEST(Metrics, LvrIncrement) {
    EXPECT_DOUBLE_EQ(lvr_increment(TradeReceipt{50, 100, 0, 1, 4}, 4.0), 100.0);
    // marginal trade at mid
    const PoolState pool{1e6, 1e6};
    const double dx = 1e-6;
    const TradeReceipt r{dx, quote_dy(pool, dx), 0.0, 1.0, price_after(pool, dx)};
    EXPECT_NEAR(lvr_increment(r, 1.0), 0.0, 1e-15);
}

TEST(Metrics, PortfolioValue) {
    EXPECT_DOUBLE_EQ(portfolio_value({100, 100}, 1.0), 200.0);
    EXPECT_DOUBLE_EQ(portfolio_value({50, 200}, 4.0), 400.0);
    const PoolState pre{1e6, 1e6};
    const double pstar = 1.004;
    const auto [post, receipt] = apply_trade(pre, FeeParams{0, 0, 0}, size_for_target_price(pre, pstar));
    ASSERT_GT(lvr_increment(receipt, pstar), 0.0);
    EXPECT_LT(portfolio_value(post, pstar), portfolio_value(pre, pstar));
}

TEST(Metrics, WorldLoss) {
    EXPECT_EQ(world_loss({}, {}, 0.0), 0.0);
    const std::vector<TradeReceipt> one{TradeReceipt{50, 100, 3, 1, 4}};
    const std::vector<double> price{4.0};
    EXPECT_DOUBLE_EQ(world_loss(one, price, 3.0), 97.0);
    const std::vector<double> misaligned{4.0, 5.0};
    EXPECT_THROW(static_cast<void>(world_loss(one, misaligned, 3.0)), DomainError);
}

TEST(Metrics, RmsDeviation) {
    const std::vector<double> a{1.0, 1.1, 0.9};
    EXPECT_EQ(rms_deviation(a, a), 0.0);
    const std::vector<double> truth{1.0, 2.0, 0.5};
    const std::vector<double> amm{1.001, 2.002, 0.5005};
    EXPECT_NEAR(rms_deviation(amm, truth), 10.0, 1e-9);
    EXPECT_THROW(static_cast<void>(rms_deviation(std::span<const double>{}, std::span<const double>{})), DomainError);
    EXPECT_THROW(static_cast<void>(rms_deviation(a, std::span<const double>(truth).first(2))), DomainError);
}

TEST(Metrics, NoTradesNoLvr) {
    const PricePath path = generate_path(1.0, 100, 0.0, 3);
    const auto r = trifee::testing::replay_world({1e6, 1e6}, FeeParams::constant(0.003), path, 0.0);
    EXPECT_TRUE(r.receipts.empty());
    EXPECT_EQ(world_loss(r.receipts, r.trade_prices, r.fee_revenue), 0.0);
}

TEST(Metrics, DualAccounting) {
    for (std::uint64_t w = 0; w < 20; ++w) {
        const PricePath path = generate_path(1.0, 100, 10.0, derive_seed(77, w));
        const FeeParams params{0.0010, 0.0002, trifee::testing::kSlopes[w % 4]};
        const auto r = trifee::testing::replay_world({1e6, 1e6}, params, path, 0.01);
        ASSERT_FALSE(r.receipts.empty());
        double lvr = 0.0;
        for (std::size_t i = 0; i < r.receipts.size(); ++i) lvr += lvr_increment(r.receipts[i], r.trade_prices[i]);
        EXPECT_LT(rel_diff(lvr, r.rebalancing_gap(), 1e-300), 1e-9) << "world " << w;
        EXPECT_DOUBLE_EQ(world_loss(r.receipts, r.trade_prices, r.fee_revenue), lvr - r.fee_revenue);
    }
}
