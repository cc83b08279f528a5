// Simulation of single worlds and of (f, b, m) x world experiment grids.
#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "trifee/arb_agent.hpp"
#include "trifee/fee_schedule.hpp"
#include "trifee/metrics.hpp"
#include "trifee/noise_probe.hpp"
#include "trifee/pool.hpp"
#include "trifee/price_process.hpp"
#include "trifee/trade.hpp"

namespace trifee {

class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct WorldConfig {
    PoolState pool{1e6, 1e6};
    std::int64_t steps = 2000;
    double sigma_bps = 3.0;
    double gas = 0.01;
    std::vector<ImpactQuantile> probes;  // quantile and impact for each probe column
};

struct TraceRow {
    std::int64_t step = 0;
    double true_price = 0.0;
    double amm_price = 0.0;
    double trade_dx = 0.0;
    double fee = 0.0;
    double deviation_bps = 0.0;
};

// Optional per-step observer, e.g. for trace output.
using TraceSink = std::function<void(const TraceRow&)>;

// Simulates one world on a given true-price path. At every step the true
// price advances, the arbitrageur makes at most one trade, the deviation is
// sampled, and each probe is evaluated in both directions without touching
// the pool.
[[nodiscard]] inline WorldResult run_world(const FeeParams& params, const WorldConfig& cfg, const PricePath& path,
                                           const TraceSink& trace = {}) {
    validate(params);
    PoolState pool = make_pool(cfg.pool.x, cfg.pool.y);
    FeeAccount fees;
    DeviationAccumulator deviation;

    WorldResult result;
    result.seed = path.seed;
    result.params = params;
    result.slippage.resize(cfg.probes.size());
    result.initial_value = portfolio_value(pool, path.values.front());

    const std::int64_t steps = std::min<std::int64_t>(cfg.steps, static_cast<std::int64_t>(path.values.size()) - 1);
    for (std::int64_t t = 1; t <= steps; ++t) {
        const double true_price = path.values[static_cast<std::size_t>(t)];
        try {
            TraceRow row{t, true_price, 0.0, 0.0, 0.0, 0.0};
            const ArbDecision decision = optimal_trade(pool, params, ArbContext{true_price, cfg.gas});
            if (decision.trade) {
                const TradeReceipt receipt = apply_trade(pool, params, *decision.trade, fees);
                result.lvr_gross += lvr_increment(receipt, true_price);
                ++result.n_trades;
                row.trade_dx = receipt.dx;
                row.fee = receipt.fee;
            }
            const double amm_price = implied_price(pool);
            deviation.add(amm_price, true_price);
            for (std::size_t q = 0; q < cfg.probes.size(); ++q) {
                for (const Direction dir : {Direction::BuyX, Direction::SellX}) {
                    if (const auto s = probe_slippage(pool, params, true_price, cfg.probes[q].impact_bps, dir))
                        result.slippage[q].add(*s);
                }
            }
            if (trace) {
                row.amm_price = amm_price;
                row.deviation_bps = (amm_price - true_price) / true_price * 1e4;
                trace(row);
            }
        } catch (const DomainError& e) {
            throw SimulationError("step " + std::to_string(t) + ": " + e.what());
        }
    }
    result.fee_revenue = fees.collected;
    result.loss = result.lvr_gross - result.fee_revenue;
    result.rms_deviation_bps = deviation.rms_bps();
    return result;
}

[[nodiscard]] inline WorldResult run_world(const FeeParams& params, const WorldConfig& cfg, std::uint64_t seed,
                                           const TraceSink& trace = {}) {
    const PricePath path = generate_path(implied_price(cfg.pool), cfg.steps, cfg.sigma_bps, seed);
    return run_world(params, cfg, path, trace);
}

// Either an explicit list of base fees or the lattice start, start+step, ...
// strictly below f. In both cases b = f is always included and b > f dropped.
struct BaseFeeRule {
    std::vector<double> explicit_bps;
    double start_bps = 2.0;
    double step_bps = 4.0;
};

struct SweepConfig {
    PoolState pool{1e6, 1e6};
    std::vector<double> initial_fee_grid_bps;
    BaseFeeRule base_fee_rule;
    std::vector<double> slopes;  // 0 means constant fee: only b = f cells
    std::int64_t worlds = 10;
    std::int64_t steps = 2000;
    double sigma_bps = 3.0;
    double gas = 0.01;
    std::uint64_t master_seed = 0;
    std::vector<ImpactQuantile> probes;

    [[nodiscard]] WorldConfig world_config() const { return WorldConfig{pool, steps, sigma_bps, gas, probes}; }
};

struct SweepCell {
    double f_bps = 0.0;
    double b_bps = 0.0;
    double m = 0.0;

    [[nodiscard]] FeeParams params() const { return FeeParams::from_bps(f_bps, b_bps, m); }
};

[[nodiscard]] inline std::vector<double> base_fees_for(const BaseFeeRule& rule, double f_bps) {
    std::vector<double> out;
    if (!rule.explicit_bps.empty()) {
        for (const double b : rule.explicit_bps)
            if (b < f_bps) out.push_back(b);
    } else {
        if (!(rule.step_bps > 0.0)) throw DomainError("base fee step must be positive");
        for (std::int64_t i = 0;; ++i) {
            const double b = rule.start_bps + static_cast<double>(i) * rule.step_bps;
            if (!(b < f_bps)) break;
            out.push_back(b);
        }
    }
    out.push_back(f_bps);
    return out;
}

inline void validate(const SweepConfig& cfg) {
    if (cfg.initial_fee_grid_bps.empty()) throw DomainError("initial fee grid is empty");
    if (cfg.slopes.empty()) throw DomainError("slope list is empty");
    if (cfg.worlds < 1) throw DomainError("worlds must be >= 1");
    if (cfg.steps < 1) throw DomainError("steps must be >= 1");
    if (!(cfg.sigma_bps >= 0.0)) throw DomainError("sigma_bps must be >= 0");
    if (!(cfg.gas >= 0.0)) throw DomainError("gas must be >= 0");
    make_pool(cfg.pool.x, cfg.pool.y);
    for (const double m : cfg.slopes)
        if (m > 0.0 || !std::isfinite(m)) throw DomainError("slopes must be <= 0");
}

// Cells in output order: slope, then initial fee, then base fee.
[[nodiscard]] inline std::vector<SweepCell> enumerate_cells(const SweepConfig& cfg) {
    std::vector<SweepCell> cells;
    for (const double m : cfg.slopes) {
        for (const double f : cfg.initial_fee_grid_bps) {
            if (m == 0.0) {
                cells.push_back({f, f, m});
                continue;
            }
            for (const double b : base_fees_for(cfg.base_fee_rule, f)) cells.push_back({f, b, m});
        }
    }
    for (const auto& c : cells) validate(c.params());
    return cells;
}

struct AggregateRow {
    SweepCell cell;
    double mean_loss = 0.0;
    double mean_lvr_gross = 0.0;
    double mean_fee_revenue = 0.0;
    double mean_rms_deviation_bps = 0.0;
    double mean_n_trades = 0.0;
    std::vector<double> rms_slippage;  // pooled over all worlds, aligned with probes
    std::int64_t worlds = 0;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    std::vector<WorldResult> worlds;  // cell-major: worlds[cell * n_worlds + world]
    std::vector<AggregateRow> rows;
    std::int64_t worlds_per_cell = 0;

    [[nodiscard]] const WorldResult& world(std::size_t cell, std::size_t index) const {
        return worlds.at(cell * static_cast<std::size_t>(worlds_per_cell) + index);
    }
};

[[nodiscard]] inline AggregateRow aggregate(const SweepCell& cell, std::span<const WorldResult> worlds) {
    AggregateRow row;
    row.cell = cell;
    row.worlds = static_cast<std::int64_t>(worlds.size());
    if (worlds.empty()) return row;
    std::vector<SlippageAccumulator> pooled(worlds.front().slippage.size());
    for (const auto& w : worlds) {
        row.mean_loss += w.loss;
        row.mean_lvr_gross += w.lvr_gross;
        row.mean_fee_revenue += w.fee_revenue;
        row.mean_rms_deviation_bps += w.rms_deviation_bps;
        row.mean_n_trades += static_cast<double>(w.n_trades);
        for (std::size_t q = 0; q < pooled.size(); ++q) pooled[q].merge(w.slippage[q]);
    }
    const double n = static_cast<double>(worlds.size());
    row.mean_loss /= n;
    row.mean_lvr_gross /= n;
    row.mean_fee_revenue /= n;
    row.mean_rms_deviation_bps /= n;
    row.mean_n_trades /= n;
    for (const auto& acc : pooled) row.rms_slippage.push_back(acc.rms());
    return row;
}

namespace detail {

// Runs task(i) for i in [0, count) on `parallelism` threads. Rethrows the
// exception of the lowest failing index.
inline void parallel_for(std::size_t count, unsigned parallelism, const std::function<void(std::size_t)>& task) {
    parallelism = std::max(1U, std::min<unsigned>(parallelism, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_index = std::numeric_limits<std::size_t>::max();
    std::exception_ptr error;

    const auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                task(i);
            } catch (...) {
                const std::lock_guard lock(error_mutex);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    };
    if (parallelism == 1) {
        worker();
    } else {
        std::vector<std::jthread> threads;
        threads.reserve(parallelism);
        for (unsigned t = 0; t < parallelism; ++t) threads.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace detail

// Every cell sees the same price path for a given world index, so cells are
// compared on paired paths. Output is independent of `parallelism`.
[[nodiscard]] inline SweepResult run_sweep(const SweepConfig& cfg, unsigned parallelism = 1) {
    validate(cfg);
    SweepResult out;
    out.cells = enumerate_cells(cfg);
    out.worlds_per_cell = cfg.worlds;
    const auto n_worlds = static_cast<std::size_t>(cfg.worlds);
    const WorldConfig world_cfg = cfg.world_config();

    std::vector<PricePath> paths(n_worlds);
    detail::parallel_for(n_worlds, parallelism, [&](std::size_t w) {
        paths[w] = generate_path(implied_price(cfg.pool), cfg.steps, cfg.sigma_bps, derive_seed(cfg.master_seed, w));
    });

    out.worlds.resize(out.cells.size() * n_worlds);
    detail::parallel_for(out.worlds.size(), parallelism, [&](std::size_t i) {
        const SweepCell& cell = out.cells[i / n_worlds];
        try {
            out.worlds[i] = run_world(cell.params(), world_cfg, paths[i % n_worlds]);
        } catch (const std::exception& e) {
            throw SimulationError("cell (f=" + std::to_string(cell.f_bps) + " bps, b=" + std::to_string(cell.b_bps) +
                                  " bps, m=" + std::to_string(cell.m) + "), world " + std::to_string(i % n_worlds) +
                                  ": " + e.what());
        }
    });

    out.rows.reserve(out.cells.size());
    for (std::size_t c = 0; c < out.cells.size(); ++c)
        out.rows.push_back(aggregate(out.cells[c], std::span(out.worlds).subspan(c * n_worlds, n_worlds)));
    return out;
}

// Metric names follow the aggregate CSV columns. All metrics are losses
// (lower is better).
[[nodiscard]] inline double metric_value(const AggregateRow& row, std::string_view name,
                                         std::span<const ImpactQuantile> probes = {}) {
    if (name == "mean_loss") return row.mean_loss;
    if (name == "mean_lvr_gross") return row.mean_lvr_gross;
    if (name == "mean_rms_deviation_bps") return row.mean_rms_deviation_bps;
    if (name == "mean_n_trades") return row.mean_n_trades;
    constexpr std::string_view slip = "mean_rms_slippage_q";
    if (name.starts_with(slip)) {
        const std::string_view label = name.substr(slip.size());
        double quantile = 0.0;
        const auto [end, ec] = std::from_chars(label.data(), label.data() + label.size(), quantile);
        if (ec == std::errc{} && end == label.data() + label.size()) {
            for (std::size_t q = 0; q < probes.size() && q < row.rms_slippage.size(); ++q)
                if (probes[q].quantile == quantile) return row.rms_slippage[q];
        }
    }
    throw DomainError("unknown metric '" + std::string(name) + "'");
}

struct ParetoPoint {
    std::size_t row = 0;
    bool dominated = false;
};

// A row is dominated iff some other row is strictly lower on both metrics.
[[nodiscard]] inline std::vector<ParetoPoint> pareto_extract(std::span<const AggregateRow> rows,
                                                             std::string_view x_metric, std::string_view y_metric,
                                                             std::span<const ImpactQuantile> probes = {}) {
    std::vector<std::pair<double, double>> values;
    values.reserve(rows.size());
    for (const auto& r : rows) values.emplace_back(metric_value(r, x_metric, probes), metric_value(r, y_metric, probes));

    std::vector<ParetoPoint> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out[i].row = i;
        for (std::size_t j = 0; j < rows.size() && !out[i].dominated; ++j)
            out[i].dominated = j != i && values[j].first < values[i].first && values[j].second < values[i].second;
    }
    return out;
}

}  // namespace trifee
