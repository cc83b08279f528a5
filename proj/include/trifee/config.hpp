// Run configuration: JSON schema, presets and validation.
//
// {
//   "schema_version": 1,
//   "preset": "desk",                       // optional base; other keys override it
//   "pool": {"x": 1e6, "y": 1e6},
//   "initial_fee_grid_bps": [10, 20],
//   "base_fee_rule": {"start_bps": 2, "step_bps": 4} | [2, 6, 10],
//   "slopes": [-1, -0.8, "constant"],
//   "worlds": 10, "steps": 2000, "sigma_bps": 3, "gas": 0.01,
//   "master_seed": 1,
//   "probe_quantiles": [0.5, 0.95],
//   "impact_quantile_table": [[0.05, 0.0069], ...],
//   "output_dir": "out", "threads": 4
// }
#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "trifee/noise_probe.hpp"
#include "trifee/sweep_engine.hpp"

namespace trifee {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kConfigSchemaVersion = 1;

struct RunConfig {
    SweepConfig sweep;
    ImpactQuantileTable impact_table = ImpactQuantileTable::defaults();
    std::vector<double> probe_quantiles;
    std::string output_dir = "out";
    unsigned threads = 1;
    std::string preset;
};

// Resolves probe quantiles against the impact table into sweep.probes.
inline void resolve_probes(RunConfig& cfg) {
    cfg.sweep.probes.clear();
    for (const double q : cfg.probe_quantiles) {
        try {
            cfg.sweep.probes.push_back({q, cfg.impact_table.impact_for(q)});
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
    }
}

namespace presets {

[[nodiscard]] inline RunConfig desk() {
    RunConfig cfg;
    cfg.preset = "desk";
    cfg.sweep.pool = {1e6, 1e6};
    cfg.sweep.initial_fee_grid_bps = {10, 20, 30, 40, 50};
    cfg.sweep.base_fee_rule = BaseFeeRule{{}, 2.0, 4.0};
    cfg.sweep.slopes = {-1.0};
    cfg.sweep.worlds = 10;
    cfg.sweep.steps = 2000;
    cfg.sweep.sigma_bps = 3.0;
    cfg.sweep.gas = 0.01;
    cfg.sweep.master_seed = 20230401;
    cfg.probe_quantiles = {0.5, 0.95};
    resolve_probes(cfg);
    return cfg;
}

[[nodiscard]] inline RunConfig paper() {
    RunConfig cfg = desk();
    cfg.preset = "paper";
    cfg.sweep.initial_fee_grid_bps.clear();
    for (int f = 2; f <= 50; f += 4) cfg.sweep.initial_fee_grid_bps.push_back(f);
    cfg.sweep.slopes = {-1.0, -0.8, -1.2, 0.0};
    cfg.sweep.worlds = 50;
    cfg.sweep.steps = 20000;
    return cfg;
}

[[nodiscard]] inline RunConfig by_name(const std::string& name) {
    if (name == "desk") return desk();
    if (name == "paper") return paper();
    throw ConfigError("unknown preset '" + name + "' (expected desk or paper)");
}

}  // namespace presets

namespace detail {

using nlohmann::json;

inline void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <typename T>
T get_as(const json& j, const std::string& key) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
}

inline std::vector<double> number_list(const json& j, const std::string& key) {
    if (!j.is_array()) throw ConfigError("config key '" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError("config key '" + key + "' must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace detail

[[nodiscard]] inline RunConfig parse_run_config(const nlohmann::json& j) {
    using detail::get_as;
    using detail::number_list;
    detail::reject_unknown_keys(j,
                                {"schema_version", "preset", "pool", "initial_fee_grid_bps", "base_fee_rule", "slopes",
                                 "worlds", "steps", "sigma_bps", "gas", "master_seed", "probe_quantiles",
                                 "impact_quantile_table", "output_dir", "threads"},
                                "config");
    if (!j.contains("schema_version")) throw ConfigError("config is missing schema_version");
    if (get_as<int>(j["schema_version"], "schema_version") != kConfigSchemaVersion)
        throw ConfigError("unsupported schema_version (expected " + std::to_string(kConfigSchemaVersion) + ")");

    RunConfig cfg = j.contains("preset") ? presets::by_name(get_as<std::string>(j["preset"], "preset")) : presets::desk();
    if (!j.contains("preset")) cfg.preset.clear();

    if (j.contains("pool")) {
        const auto& pool = j["pool"];
        detail::reject_unknown_keys(pool, {"x", "y"}, "pool");
        if (pool.contains("x")) cfg.sweep.pool.x = get_as<double>(pool["x"], "pool.x");
        if (pool.contains("y")) cfg.sweep.pool.y = get_as<double>(pool["y"], "pool.y");
    }
    if (j.contains("initial_fee_grid_bps"))
        cfg.sweep.initial_fee_grid_bps = number_list(j["initial_fee_grid_bps"], "initial_fee_grid_bps");
    if (j.contains("base_fee_rule")) {
        const auto& rule = j["base_fee_rule"];
        if (rule.is_array()) {
            cfg.sweep.base_fee_rule = BaseFeeRule{number_list(rule, "base_fee_rule"), 0.0, 0.0};
            if (cfg.sweep.base_fee_rule.explicit_bps.empty()) throw ConfigError("base_fee_rule list is empty");
        } else {
            detail::reject_unknown_keys(rule, {"start_bps", "step_bps"}, "base_fee_rule");
            BaseFeeRule r;
            if (rule.contains("start_bps")) r.start_bps = get_as<double>(rule["start_bps"], "base_fee_rule.start_bps");
            if (rule.contains("step_bps")) r.step_bps = get_as<double>(rule["step_bps"], "base_fee_rule.step_bps");
            cfg.sweep.base_fee_rule = r;
        }
    }
    if (j.contains("slopes")) {
        const auto& slopes = j["slopes"];
        if (!slopes.is_array()) throw ConfigError("slopes must be an array");
        cfg.sweep.slopes.clear();
        for (const auto& s : slopes) {
            if (s.is_string() && s.get<std::string>() == "constant")
                cfg.sweep.slopes.push_back(0.0);
            else if (s.is_number())
                cfg.sweep.slopes.push_back(s.get<double>());
            else
                throw ConfigError("slopes entries must be numbers or \"constant\"");
        }
    }
    if (j.contains("worlds")) cfg.sweep.worlds = get_as<std::int64_t>(j["worlds"], "worlds");
    if (j.contains("steps")) cfg.sweep.steps = get_as<std::int64_t>(j["steps"], "steps");
    if (j.contains("sigma_bps")) cfg.sweep.sigma_bps = get_as<double>(j["sigma_bps"], "sigma_bps");
    if (j.contains("gas")) cfg.sweep.gas = get_as<double>(j["gas"], "gas");
    if (j.contains("master_seed")) cfg.sweep.master_seed = get_as<std::uint64_t>(j["master_seed"], "master_seed");
    if (j.contains("impact_quantile_table")) {
        const auto& table = j["impact_quantile_table"];
        if (!table.is_array()) throw ConfigError("impact_quantile_table must be an array of [quantile, bps] pairs");
        std::vector<ImpactQuantile> entries;
        for (const auto& e : table) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw ConfigError("impact_quantile_table entries must be [quantile, bps] pairs");
            entries.push_back({e[0].get<double>(), e[1].get<double>()});
        }
        try {
            cfg.impact_table = ImpactQuantileTable(std::move(entries));
        } catch (const DomainError& e) {
            throw ConfigError(std::string("impact_quantile_table: ") + e.what());
        }
    }
    if (j.contains("probe_quantiles")) cfg.probe_quantiles = number_list(j["probe_quantiles"], "probe_quantiles");
    if (j.contains("output_dir")) cfg.output_dir = get_as<std::string>(j["output_dir"], "output_dir");
    if (j.contains("threads")) {
        const auto threads = get_as<std::int64_t>(j["threads"], "threads");
        if (threads < 1) throw ConfigError("threads must be >= 1");
        cfg.threads = static_cast<unsigned>(threads);
    }

    resolve_probes(cfg);
    try {
        validate(cfg.sweep);
        static_cast<void>(enumerate_cells(cfg.sweep));
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

[[nodiscard]] inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_run_config(j);
}

}  // namespace trifee
