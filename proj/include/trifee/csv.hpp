// CSV serialization of sweep results.
//
// worlds.csv:    f_bps,b_bps,m,world_index,seed,loss,lvr_gross,fee_revenue,
//                rms_deviation_bps,n_trades,rms_slippage_q<Q>...
// aggregate.csv: f_bps,b_bps,m,mean_loss,mean_lvr_gross,mean_fee_revenue,
//                mean_rms_deviation_bps,mean_n_trades,mean_rms_slippage_q<Q>...,worlds
//
// Floating-point fields use 17 significant digits so they round-trip exactly.
// <Q> is the shortest decimal form of the probe quantile (0.5, 0.95, ...).
#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>

#include "trifee/noise_probe.hpp"
#include "trifee/sweep_engine.hpp"

namespace trifee::csv {

[[nodiscard]] inline std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return {buf.data(), res.ptr};
}

// Shortest representation that parses back to the same double.
[[nodiscard]] inline std::string format_shortest(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

[[nodiscard]] inline std::string quantile_label(double q) { return format_shortest(q); }

inline void write_worlds_header(std::ostream& os, std::span<const ImpactQuantile> probes) {
    os << "f_bps,b_bps,m,world_index,seed,loss,lvr_gross,fee_revenue,rms_deviation_bps,n_trades";
    for (const auto& p : probes) os << ",rms_slippage_q" << quantile_label(p.quantile);
    os << '\n';
}

inline void write_world_row(std::ostream& os, const SweepCell& cell, std::int64_t world_index, const WorldResult& w) {
    os << format_double(cell.f_bps) << ',' << format_double(cell.b_bps) << ',' << format_double(cell.m) << ','
       << world_index << ',' << w.seed << ',' << format_double(w.loss) << ',' << format_double(w.lvr_gross) << ','
       << format_double(w.fee_revenue) << ',' << format_double(w.rms_deviation_bps) << ',' << w.n_trades;
    for (const auto& s : w.slippage) os << ',' << format_double(s.rms());
    os << '\n';
}

inline void write_worlds(std::ostream& os, const SweepResult& result, std::span<const ImpactQuantile> probes) {
    write_worlds_header(os, probes);
    const auto n = static_cast<std::size_t>(result.worlds_per_cell);
    for (std::size_t c = 0; c < result.cells.size(); ++c)
        for (std::size_t w = 0; w < n; ++w)
            write_world_row(os, result.cells[c], static_cast<std::int64_t>(w), result.world(c, w));
}

inline void write_aggregate(std::ostream& os, std::span<const AggregateRow> rows, std::span<const ImpactQuantile> probes) {
    os << "f_bps,b_bps,m,mean_loss,mean_lvr_gross,mean_fee_revenue,mean_rms_deviation_bps,mean_n_trades";
    for (const auto& p : probes) os << ",mean_rms_slippage_q" << quantile_label(p.quantile);
    os << ",worlds\n";
    for (const auto& r : rows) {
        os << format_double(r.cell.f_bps) << ',' << format_double(r.cell.b_bps) << ',' << format_double(r.cell.m) << ','
           << format_double(r.mean_loss) << ',' << format_double(r.mean_lvr_gross) << ','
           << format_double(r.mean_fee_revenue) << ',' << format_double(r.mean_rms_deviation_bps) << ','
           << format_double(r.mean_n_trades);
        for (const double s : r.rms_slippage) os << ',' << format_double(s);
        os << ',' << r.worlds << '\n';
    }
}

inline void write_trace_header(std::ostream& os) { os << "step,true_price,amm_price,trade_dx,fee,deviation_bps\n"; }

inline void write_trace_row(std::ostream& os, const TraceRow& row) {
    os << row.step << ',' << format_double(row.true_price) << ',' << format_double(row.amm_price) << ','
       << format_double(row.trade_dx) << ',' << format_double(row.fee) << ',' << format_double(row.deviation_bps)
       << '\n';
}

}  // namespace trifee::csv
