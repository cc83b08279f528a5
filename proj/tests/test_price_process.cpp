#include <gtest/gtest.h>

#include <set>

#include "trifee/price_process.hpp"

using namespace trifee;

TEST(PriceProcess, ZeroSigmaIsConstant) {
    const auto path = generate_path(1.25, 100, 0.0, 7);
    ASSERT_EQ(path.values.size(), 101U);
    for (const double v : path.values) EXPECT_EQ(v, 1.25);
}

TEST(PriceProcess, Deterministic) {
    const auto a = generate_path(1.0, 5000, 3.0, 99);
    const auto b = generate_path(1.0, 5000, 3.0, 99);
    EXPECT_EQ(a.values, b.values);
    const auto c = generate_path(1.0, 5000, 3.0, 100);
    EXPECT_NE(a.values, c.values);
}

TEST(PriceProcess, IncrementStatistics) {
    const auto path = generate_path(1.0, 20000, 3.0, derive_seed(1, 0));
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 1; i < path.values.size(); ++i) {
        const double r = path.values[i] / path.values[i - 1] - 1.0;
        sum += r;
        sum_sq += r * r;
    }
    const double n = static_cast<double>(path.values.size() - 1);
    const double mean = sum / n;
    const double sd = std::sqrt(sum_sq / n - mean * mean);
    EXPECT_NEAR(sd, 3e-4, 0.03 * 3e-4);
    EXPECT_NEAR(mean, 0.0, 4.0 * 3e-4 / std::sqrt(n));
}

TEST(PriceProcess, RejectsBadInput) {
    EXPECT_THROW(static_cast<void>(generate_path(0.0, 10, 3.0, 1)), DomainError);
    EXPECT_THROW(static_cast<void>(generate_path(1.0, 0, 3.0, 1)), DomainError);
    EXPECT_THROW(static_cast<void>(generate_path(1.0, 10, -3.0, 1)), DomainError);
}

TEST(PriceProcess, StaysPositiveUnderExtremeVolatility) {
    // sigma = 100% per step: draws with |eps| >= 1 are redrawn.
    const auto path = generate_path(1.0, 2000, 1e4, 5);
    for (const double v : path.values) ASSERT_GT(v, 0.0);
}

TEST(PriceProcess, DerivedSeedsAreDistinct) {
    std::set<std::uint64_t> seeds;
    for (std::uint64_t master : {0ULL, 1ULL, 2ULL})
        for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(derive_seed(master, i));
    EXPECT_EQ(seeds.size(), 3000U);
    static_assert(derive_seed(1, 0) == derive_seed(1, 0));
}

TEST(PriceProcess, GaussianMoments) {
    GaussianSource g(123);
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = g.next();
        s1 += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    EXPECT_NEAR(s1 / n, 0.0, 0.01);
    EXPECT_NEAR(s2 / n, 1.0, 0.01);
    EXPECT_NEAR(s4 / n, 3.0, 0.05);
}
