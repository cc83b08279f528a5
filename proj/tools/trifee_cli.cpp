// trifee: command-line front end.
//
//   trifee fee --x 1e6 --y 1e6 --f-bps 20 --b-bps 0 --m -1 --dx 500 [--verify]
//   trifee world (--config PATH | --preset NAME) --f-bps 20 --b-bps 2 --m -1 [--seed S] [--trace PATH] [--out PATH]
//   trifee sweep (--config PATH | --preset NAME) [--out DIR] [--threads N]
//   trifee quantiles
//
// Exit codes: 0 success, 1 usage or configuration error, 2 simulation failure.
#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "trifee/config.hpp"
#include "trifee/csv.hpp"
#include "trifee/trifee.hpp"

namespace fs = std::filesystem;
using namespace trifee;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct FeeArgs {
    double x = 1e6;
    double y = 1e6;
    double f_bps = 20.0;
    double b_bps = 20.0;
    double m = -1.0;
    double dx = 0.0;
    bool verify = false;
    std::int64_t quad_steps = 100000;
};

int cmd_fee(const FeeArgs& a) {
    const PoolState pool = make_pool(a.x, a.y);
    const FeeParams params = FeeParams::from_bps(a.f_bps, a.b_bps, a.m);
    validate(params);
    const double fee = total_fee(pool, params, a.dx);
    const FeeBranch branch = fee_branch(pool, params, a.dx);

    std::cout << "fee " << csv::format_double(fee) << '\n';
    std::cout << "branch " << branch_name(branch) << '\n';
    if (params.m != 0.0) {
        const FeeThresholds t = thresholds(pool, params);
        std::cout << "k_u " << csv::format_double(t.k_upper) << "  dx_u " << csv::format_double(t.dx_upper) << '\n';
        std::cout << "k_l " << csv::format_double(t.k_lower) << "  dx_l " << csv::format_double(t.dx_lower) << '\n';
    }
    std::cout << "marginal_fee_start " << csv::format_double(marginal_fee(pool, params, 0.0)) << '\n';
    std::cout << "marginal_fee_end " << csv::format_double(marginal_fee(pool, params, a.dx)) << '\n';
    if (a.verify) {
        const double quad = quadrature_fee(pool, params, a.dx, a.quad_steps);
        const double rel = std::abs(quad - fee) / std::max(std::abs(fee), 1e-12);
        std::cout << "quadrature " << csv::format_double(quad) << "  rel_diff " << csv::format_double(rel) << '\n';
    }
    return 0;
}

RunConfig load_config(const std::string& config_path, const std::string& preset) {
    if (!config_path.empty() && !preset.empty()) throw ConfigError("pass either --config or --preset, not both");
    if (!config_path.empty()) return load_run_config(config_path);
    if (!preset.empty()) return presets::by_name(preset);
    throw ConfigError("one of --config or --preset is required");
}

struct WorldArgs {
    std::string config;
    std::string preset;
    double f_bps = 20.0;
    double b_bps = 2.0;
    double m = -1.0;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> steps;
    std::optional<double> sigma_bps;
    std::optional<double> gas;
    std::string trace;
    std::string out;
};

int cmd_world(const WorldArgs& a) {
    RunConfig cfg = load_config(a.config, a.preset);
    if (a.steps) cfg.sweep.steps = *a.steps;
    if (a.sigma_bps) cfg.sweep.sigma_bps = *a.sigma_bps;
    if (a.gas) cfg.sweep.gas = *a.gas;
    try {
        validate(cfg.sweep);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    const FeeParams params = FeeParams::from_bps(a.f_bps, a.b_bps, a.m);
    try {
        validate(params);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    const std::uint64_t seed = a.seed.value_or(derive_seed(cfg.sweep.master_seed, 0));

    std::ofstream trace_file;
    TraceSink sink;
    if (!a.trace.empty()) {
        trace_file.open(a.trace);
        if (!trace_file) throw ConfigError("cannot open trace file '" + a.trace + "'");
        csv::write_trace_header(trace_file);
        sink = [&trace_file](const TraceRow& row) { csv::write_trace_row(trace_file, row); };
    }
    const WorldResult w = run_world(params, cfg.sweep.world_config(), seed, sink);

    if (!a.out.empty()) {
        std::ofstream out(a.out);
        if (!out) throw ConfigError("cannot open output file '" + a.out + "'");
        csv::write_worlds_header(out, cfg.sweep.probes);
        csv::write_world_row(out, SweepCell{a.f_bps, a.b_bps, a.m}, 0, w);
    }
    std::cout << "seed=" << w.seed << " trades=" << w.n_trades << " loss=" << csv::format_double(w.loss)
              << " lvr_gross=" << csv::format_double(w.lvr_gross) << " fee_revenue=" << csv::format_double(w.fee_revenue)
              << " rms_deviation_bps=" << csv::format_double(w.rms_deviation_bps) << '\n';
    return 0;
}

struct SweepArgs {
    std::string config;
    std::string preset;
    std::string out;
    std::optional<unsigned> threads;
};

void write_file_atomically(const fs::path& target, const std::function<void(std::ostream&)>& body) {
    const fs::path tmp = target.string() + ".partial";
    {
        std::ofstream os(tmp);
        if (!os) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        body(os);
        if (!os) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

int cmd_sweep(const SweepArgs& a) {
    RunConfig cfg = load_config(a.config, a.preset);
    if (!a.out.empty()) cfg.output_dir = a.out;
    if (a.threads) cfg.threads = *a.threads;
    if (cfg.threads < 1) throw ConfigError("--threads must be >= 1");

    const SweepResult result = run_sweep(cfg.sweep, cfg.threads);

    const fs::path dir(cfg.output_dir);
    const fs::path worlds_csv = dir / "worlds.csv";
    const fs::path aggregate_csv = dir / "aggregate.csv";
    try {
        fs::create_directories(dir);
        write_file_atomically(worlds_csv, [&](std::ostream& os) { csv::write_worlds(os, result, cfg.sweep.probes); });
        write_file_atomically(aggregate_csv,
                              [&](std::ostream& os) { csv::write_aggregate(os, result.rows, cfg.sweep.probes); });
    } catch (...) {
        std::error_code ec;
        for (const auto& p : {worlds_csv, aggregate_csv}) {
            fs::remove(p, ec);
            fs::remove(p.string() + ".partial", ec);
        }
        throw;
    }

    const auto frontier = pareto_extract(result.rows, "mean_rms_deviation_bps", "mean_loss");
    std::size_t dominated = 0;
    std::size_t constant_dominated = 0;
    for (const auto& p : frontier) {
        dominated += p.dominated;
        const auto& cell = result.rows[p.row].cell;
        constant_dominated += p.dominated && cell.b_bps == cell.f_bps;
    }
    std::cout << "cells=" << result.rows.size() << " worlds_per_cell=" << result.worlds_per_cell
              << " dominated=" << dominated << " constant_fee_dominated=" << constant_dominated << '\n';
    std::cout << "frontier (mean_rms_deviation_bps, mean_loss):\n";
    for (const auto& p : frontier) {
        if (p.dominated) continue;
        const auto& r = result.rows[p.row];
        std::cout << "  f=" << r.cell.f_bps << " b=" << r.cell.b_bps << " m=" << r.cell.m
                  << "  deviation=" << csv::format_double(r.mean_rms_deviation_bps)
                  << "  loss=" << csv::format_double(r.mean_loss) << '\n';
    }
    std::cout << "wrote " << worlds_csv.string() << " and " << aggregate_csv.string() << '\n';
    return 0;
}

int cmd_quantiles() {
    std::cout << "quantile,impact_bps\n";
    for (const auto& e : ImpactQuantileTable::defaults().entries())
        std::cout << csv::quantile_label(e.quantile) << ',' << csv::format_shortest(e.impact_bps) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constant-product AMM simulator with triangle fees"};
    app.require_subcommand(1);

    FeeArgs fee_args;
    auto* fee = app.add_subcommand("fee", "Compute the total fee for one trade");
    fee->add_option("--x", fee_args.x, "Pool reserve of X")->capture_default_str();
    fee->add_option("--y", fee_args.y, "Pool reserve of Y")->capture_default_str();
    fee->add_option("--f-bps", fee_args.f_bps, "Initial fee in bps")->required();
    fee->add_option("--b-bps", fee_args.b_bps, "Base fee in bps")->required();
    fee->add_option("--m", fee_args.m, "Fee slope (<= 0)")->required();
    fee->add_option("--dx", fee_args.dx, "Signed X withdrawn from the pool")->required();
    fee->add_flag("--verify", fee_args.verify, "Cross-check against numerical quadrature");
    fee->add_option("--quad-steps", fee_args.quad_steps, "Quadrature steps for --verify")->capture_default_str();

    WorldArgs world_args;
    auto* world = app.add_subcommand("world", "Simulate one world");
    world->add_option("--config", world_args.config, "JSON run config");
    world->add_option("--preset", world_args.preset, "Preset name (desk, paper)");
    world->add_option("--f-bps", world_args.f_bps, "Initial fee in bps")->capture_default_str();
    world->add_option("--b-bps", world_args.b_bps, "Base fee in bps")->capture_default_str();
    world->add_option("--m", world_args.m, "Fee slope (<= 0)")->capture_default_str();
    world->add_option("--seed", world_args.seed, "Price-path seed (default: derived from master seed, world 0)");
    world->add_option("--steps", world_args.steps, "Override step count");
    world->add_option("--sigma-bps", world_args.sigma_bps, "Override per-step volatility");
    world->add_option("--gas", world_args.gas, "Override gas per trade");
    world->add_option("--trace", world_args.trace, "Write the per-step trace CSV here");
    world->add_option("--out", world_args.out, "Write the world CSV row here");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write worlds.csv and aggregate.csv");
    sweep->add_option("--config", sweep_args.config, "JSON run config");
    sweep->add_option("--preset", sweep_args.preset, "Preset name (desk, paper)");
    sweep->add_option("--out", sweep_args.out, "Output directory");
    sweep->add_option("--threads", sweep_args.threads, "Worker threads");

    auto* quantiles = app.add_subcommand("quantiles", "Print the embedded price-impact quantile table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (fee->parsed()) return cmd_fee(fee_args);
        if (world->parsed()) return cmd_world(world_args);
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        if (quantiles->parsed()) return cmd_quantiles();
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "simulation failed: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
