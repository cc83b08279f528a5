#include <gtest/gtest.h>

#include "test_support.hpp"
#include "trifee/noise_probe.hpp"

using namespace trifee;
using trifee::testing::rel_diff;
using trifee::testing::Rng;

TEST(NoiseProbe, DefaultTable) {
    const auto table = ImpactQuantileTable::defaults();
    ASSERT_EQ(table.entries().size(), 8U);
    EXPECT_EQ(table.impact_for(0.5), 3.7774);
    EXPECT_EQ(table.impact_for(0.95), 10.7545);
    EXPECT_EQ(table.impact_for(0.9999), 212.1279);
    EXPECT_THROW(static_cast<void>(table.impact_for(0.6)), DomainError);
}

TEST(NoiseProbe, TableValidation) {
    EXPECT_THROW(ImpactQuantileTable({{0.5, 1.0}, {0.5, 2.0}}), DomainError);
    EXPECT_THROW(ImpactQuantileTable({{0.5, 2.0}, {0.6, 1.0}}), DomainError);
    EXPECT_THROW(ImpactQuantileTable({{1.5, 2.0}}), DomainError);
    EXPECT_THROW(ImpactQuantileTable({{0.5, -2.0}}), DomainError);
    EXPECT_NO_THROW(ImpactQuantileTable({{0.1, 0.0}, {0.2, 0.0}}));
}

TEST(NoiseProbe, ProbeSizeExamples) {
    EXPECT_EQ(probe_size({100, 100}, 0.0, Direction::BuyX), 0.0);
    EXPECT_LT(rel_diff(probe_size({100, 100}, 300.0, Direction::BuyX), 1.4670721835706848), 1e-14);
    EXPECT_LT(rel_diff(probe_size({1e6, 1e6}, 3.7774, Direction::BuyX), 188.81650902245325), 1e-12);
    EXPECT_LT(probe_size({1e6, 1e6}, 3.7774, Direction::SellX), 0.0);
    EXPECT_THROW(static_cast<void>(probe_size({1e6, 1e6}, -1.0, Direction::BuyX)), DomainError);
}

TEST(NoiseProbe, ProbeRoundTripAllQuantiles) {
    Rng rng(41);
    for (int i = 0; i < 50; ++i) {
        const PoolState pool = trifee::testing::random_pool(rng, 0.1, 10.0);
        const double p0 = implied_price(pool);
        for (const auto& e : ImpactQuantileTable::defaults().entries()) {
            for (const Direction dir : {Direction::BuyX, Direction::SellX}) {
                const double rel = e.impact_bps * 1e-4;
                const double dx = probe_size(pool, e.impact_bps, dir);
                const double target = p0 * (dir == Direction::BuyX ? 1.0 + rel : 1.0 - rel);
                ASSERT_LT(rel_diff(price_after(pool, dx), target), 1e-10);
                ASSERT_LT(rel_diff(std::abs(relative_price_move(pool, dx)), rel), 1e-10);
            }
        }
    }
}

TEST(NoiseProbe, SlippageLimits) {
    const PoolState pool{1e6, 1e6};
    EXPECT_FALSE(probe_slippage(pool, FeeParams::constant(0.002), 1.0, 0.0, Direction::BuyX));
    EXPECT_NEAR(*probe_slippage(pool, FeeParams{0, 0, 0}, 1.0, 1e-6, Direction::BuyX), 0.0, 1e-9);
    EXPECT_NEAR(*probe_slippage(pool, FeeParams::constant(0.002), 1.0, 1e-6, Direction::BuyX), 0.002, 1e-9);
    EXPECT_NEAR(*probe_slippage(pool, FeeParams::constant(0.002), 1.0, 1e-6, Direction::SellX), 0.002, 1e-9);
}

TEST(NoiseProbe, SlippageReferenceValue) {
    // With m = -1 at parity the fee decline offsets the price walk exactly
    // until the floor binds (15 bps here), so the all-in cost is f.
    // mpmath: 0.002 with dx = 537.29166607664387.
    const auto s = probe_slippage({1e6, 1e6}, FeeParams{0.0020, 0.0005, -1.0}, 1.0, 10.7545, Direction::BuyX);
    ASSERT_TRUE(s);
    EXPECT_NEAR(*s, 0.002, 1e-12);
    const double dx = probe_size({1e6, 1e6}, 10.7545, Direction::BuyX);
    const double quad = quadrature_fee({1e6, 1e6}, FeeParams{0.0020, 0.0005, -1.0}, dx, 100000);
    EXPECT_NEAR(*s, (quote_dy({1e6, 1e6}, dx) + quad) / dx - 1.0, 1e-10);
}

TEST(NoiseProbe, SymmetricAtParity) {
    Rng rng(42);
    for (int i = 0; i < 300; ++i) {
        const PoolState pool{1e6, 1e6};
        const FeeParams p = trifee::testing::random_params(rng, trifee::testing::kSlopes[i % 4]);
        const double impact = rng.uniform(0.01, 50.0);
        const double buy = *probe_slippage(pool, p, 1.0, impact, Direction::BuyX);
        const double sell = *probe_slippage(pool, p, 1.0, impact, Direction::SellX);
        // The two directions differ only through the curvature of the price map.
        ASSERT_NEAR(buy, sell, 1e-9 + 2.0 * impact * impact * 1e-8);
    }
}

TEST(NoiseProbe, StalePoolFavorsCorrectingDirection) {
    const PoolState pool{1e6, 1e6};
    const FeeParams p{0.0020, 0.0005, -1.0};
    const double impact = 3.7774;
    const double buy0 = *probe_slippage(pool, p, 1.0, impact, Direction::BuyX);
    const double sell0 = *probe_slippage(pool, p, 1.0, impact, Direction::SellX);
    // True price above the pool: buying X from the pool is cheap.
    const double buy = *probe_slippage(pool, p, 1.001, impact, Direction::BuyX);
    const double sell = *probe_slippage(pool, p, 1.001, impact, Direction::SellX);
    EXPECT_LT(buy, buy0);
    EXPECT_GT(sell, sell0);
}

TEST(NoiseProbe, ConstantFeeDecomposition) {
    Rng rng(43);
    for (int i = 0; i < 300; ++i) {
        const PoolState pool = trifee::testing::random_pool(rng);
        const double f = rng.uniform(0.0, 0.01);
        const double pstar = implied_price(pool) * rng.uniform(0.99, 1.01);
        const double impact = rng.uniform(0.01, 30.0);
        const FeeParams with{f, f, -1.0};
        const FeeParams without{0.0, 0.0, 0.0};
        for (const Direction dir : {Direction::BuyX, Direction::SellX}) {
            const double total = *probe_slippage(pool, with, pstar, impact, dir);
            const double staleness = *probe_slippage(pool, without, pstar, impact, dir);
            ASSERT_NEAR(total, staleness + f / pstar, 1e-9);
        }
    }
}

TEST(NoiseProbe, ProbesDoNotMutate) {
    const PoolState pool{1e6, 1.2e6};
    const PoolState copy = pool;
    static_cast<void>(probe_slippage(pool, FeeParams{0.002, 0.0, -1.0}, 1.1, 10.0, Direction::SellX));
    EXPECT_EQ(pool.x, copy.x);
    EXPECT_EQ(pool.y, copy.y);
}

TEST(NoiseProbe, RmsSlippage) {
    const std::vector<SlippageSample> same(5, SlippageSample{Direction::BuyX, 1.0, -0.003});
    EXPECT_DOUBLE_EQ(rms_slippage(same), 0.003);
    const std::vector<SlippageSample> pm{{Direction::BuyX, 1.0, 0.002}, {Direction::SellX, 1.0, -0.002}};
    EXPECT_DOUBLE_EQ(rms_slippage(pm), 0.002);
    EXPECT_THROW(static_cast<void>(rms_slippage(std::span<const SlippageSample>{})), DomainError);
}
