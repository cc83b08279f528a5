// True-price paths: multiplicative Gaussian random walk.
//
// Reproducibility contract: uniform bits come from std::mt19937_64 (output is
// fixed by the standard), converted to doubles with 53-bit mantissas and to
// normals with Box-Muller. Paths depend only on the seed and the platform's
// libm (log/sin/cos), never on thread count or scheduling.
// World i of a sweep uses derive_seed(master_seed, i).
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "trifee/pool.hpp"

namespace trifee {

// splitmix64 finalizer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream) noexcept {
    return mix64(mix64(master_seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1], u2 in [0, 1)
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct PricePath {
    double p0 = 1.0;
    std::int64_t steps = 0;
    double sigma_bps = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> values;  // steps + 1 entries, values[0] == p0
};

[[nodiscard]] inline PricePath generate_path(double p0, std::int64_t steps, double sigma_bps, std::uint64_t seed) {
    if (!(p0 > 0.0) || !std::isfinite(p0)) throw DomainError("initial price must be positive");
    if (!(sigma_bps >= 0.0) || !std::isfinite(sigma_bps)) throw DomainError("sigma must be nonnegative");
    if (steps < 1) throw DomainError("path needs at least one step");

    PricePath path{p0, steps, sigma_bps, seed, {}};
    path.values.reserve(static_cast<std::size_t>(steps) + 1);
    path.values.push_back(p0);
    const double sigma = sigma_bps * 1e-4;
    GaussianSource normal(seed);
    double price = p0;
    for (std::int64_t t = 0; t < steps; ++t) {
        double eps = sigma * normal.next();
        // |eps| >= 1 would make the price nonpositive; redraw.
        while (std::abs(eps) >= 1.0) eps = sigma * normal.next();
        price *= 1.0 + eps;
        path.values.push_back(price);
    }
    return path;
}

}  // namespace trifee
