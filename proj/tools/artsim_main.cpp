#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "artsim/harness.hpp"

namespace {

using nlohmann::json;

// Applies a JSON config document onto the sweep spec. Every field is
// optional; CLI flags override whatever the file set.
void apply_config(artsim::SweepSpec& spec, const json& cfg) {
    using namespace artsim;
    if (cfg.contains("environments")) {
        spec.environments.clear();
        for (const auto& name : cfg.at("environments")) {
            spec.environments.push_back(env_from_name(name.get<std::string>()));
        }
    }
    if (cfg.contains("policies")) {
        spec.policies.clear();
        for (const auto& name : cfg.at("policies")) {
            spec.policies.push_back(policy_from_name(name.get<std::string>()));
        }
    }
    if (cfg.contains("tx_levels")) {
        spec.tx_levels = cfg.at("tx_levels").get<std::vector<int>>();
    }
    if (cfg.contains("seeds")) {
        const auto& seeds = cfg.at("seeds");
        if (seeds.is_number_unsigned() || seeds.is_number_integer()) {
            spec.seeds.clear();
            for (std::uint64_t i = 0; i < seeds.get<std::uint64_t>(); ++i) {
                spec.seeds.push_back(i);
            }
        } else {
            spec.seeds = seeds.get<std::vector<std::uint64_t>>();
        }
    }
    if (cfg.contains("master_seed")) spec.master_seed = cfg.at("master_seed").get<std::uint64_t>();
    if (cfg.contains("resolution_m")) spec.resolution_m = cfg.at("resolution_m").get<double>();
    if (cfg.contains("out_dir")) spec.out_dir = cfg.at("out_dir").get<std::string>();
    if (cfg.contains("jobs")) spec.jobs = cfg.at("jobs").get<int>();

    if (cfg.contains("episode")) {
        const json& ep = cfg.at("episode");
        EpisodeConfig& base = spec.base;
        if (ep.contains("max_mission_time_s")) base.max_mission_time_s = ep.at("max_mission_time_s");
        if (ep.contains("tick_dt_s")) base.tick_dt_s = ep.at("tick_dt_s");
        if (ep.contains("scout_speed_mps")) base.scout_speed_mps = ep.at("scout_speed_mps");
        if (ep.contains("specialist_speed_mps")) {
            base.specialist_speed_mps = ep.at("specialist_speed_mps");
        }
        if (ep.contains("sensor_range_m")) base.sensor_range_m = ep.at("sensor_range_m");
        if (ep.contains("frontier_search_radius_m")) {
            base.frontier_search_radius_m = ep.at("frontier_search_radius_m");
        }
        if (ep.contains("specialist_follows_goals")) {
            base.specialist_follows_goals = ep.at("specialist_follows_goals");
        }
    }
    if (cfg.contains("rf")) {
        const json& rf = cfg.at("rf");
        artsim::RfParams& p = spec.base.rf;
        if (rf.contains("transmit_power_dbm")) p.transmit_power_dbm = rf.at("transmit_power_dbm");
        if (rf.contains("tx_gain_db")) p.tx_gain_db = rf.at("tx_gain_db");
        if (rf.contains("rx_gain_db")) p.rx_gain_db = rf.at("rx_gain_db");
        if (rf.contains("wavelength_m")) p.wavelength_m = rf.at("wavelength_m");
        if (rf.contains("reference_distance_m")) p.reference_distance_m = rf.at("reference_distance_m");
        if (rf.contains("path_loss_exponent")) p.path_loss_exponent = rf.at("path_loss_exponent");
        if (rf.contains("shadow_sigma_db")) p.shadow_sigma_db = rf.at("shadow_sigma_db");
        if (rf.contains("noise_floor_dbm")) p.noise_floor_dbm = rf.at("noise_floor_dbm");
        if (rf.contains("bandwidth_hz")) p.bandwidth_hz = rf.at("bandwidth_hz");
        // Reference loss re-derives from Friis unless pinned explicitly.
        if (rf.contains("reference_loss_db")) {
            p.reference_loss_db = rf.at("reference_loss_db");
        } else {
            p.reference_loss_db =
                artsim::free_space_path_loss_db(p.reference_distance_m, p.wavelength_m);
        }
    }
    if (cfg.contains("thresholds")) {
        const json& th = cfg.at("thresholds");
        if (th.contains("single_min_dbm")) {
            spec.base.single_minimum =
                artsim::ThresholdTable::single_minimum(th.at("single_min_dbm").get<double>());
        }
        if (th.contains("per_level_dbm")) {
            std::array<double, 4> taus{};
            const auto values = th.at("per_level_dbm").get<std::vector<double>>();
            if (values.size() != 4) {
                throw std::invalid_argument("thresholds.per_level_dbm needs 4 values");
            }
            std::copy(values.begin(), values.end(), taus.begin());
            spec.base.per_level = artsim::ThresholdTable::per_level(taus);
        }
    }
}

void print_summary(const artsim::SweepResult& result) {
    std::printf("%-10s %-8s %-5s %14s %14s %7s\n", "env", "policy", "level", "path_m (mean)",
                "time_s (mean)", "trials");
    for (const artsim::SummaryRow& r : result.summary) {
        std::printf("%-10s %-8s %-5d %10.3f%s %11.3f%s %9d\n", artsim::env_name(r.environment),
                    artsim::policy_name(r.policy), r.tx_level, r.path_mean_m,
                    r.best_path ? "*" : " ", r.time_mean_s, r.best_time ? "*" : " ", r.trials);
    }
    std::printf("(* = minimum mean within its env/level block)\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Communication-aware multi-robot exploration benchmark: sweeps the "
        "ART / ART-SST / MSSC / FRC transmission policies over grid-world "
        "environments and writes per-episode and summary CSVs."};

    std::string config_path;
    std::vector<std::string> env_names;
    std::vector<std::string> algo_names;
    std::vector<int> tx_levels;
    std::uint64_t master_seed = 0;
    bool master_seed_set = false;
    int runs = 0;
    std::string out_dir;
    bool trace = false, heatmap = false, maps = false;
    int jobs = 0;

    app.add_option("--config", config_path, "JSON sweep configuration file");
    app.add_option("--env", env_names, "environments: tunnel, window, yjunction")
        ->delimiter(',');
    app.add_option("--algo", algo_names, "policies: ART, ART-SST, MSSC, FRC")->delimiter(',');
    app.add_option("--tx-level", tx_levels, "payload levels 0..3")->delimiter(',');
    app.add_option("--seed", master_seed, "master seed for per-episode seed derivation")
        ->each([&](const std::string&) { master_seed_set = true; });
    app.add_option("--runs", runs, "number of trials per configuration");
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--trace", trace, "write per-episode tick traces");
    app.add_flag("--heatmap", heatmap, "write per-episode RSSI heatmaps");
    app.add_flag("--maps", maps, "export environment maps as PGM");
    app.add_option("--jobs", jobs, "worker threads (0 = all cores)");

    CLI11_PARSE(app, argc, argv);

    artsim::SweepSpec spec;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "cannot open config file: " << config_path << "\n";
                return 2;
            }
            json cfg = json::parse(in);
            apply_config(spec, cfg);
        }
        if (!env_names.empty()) {
            spec.environments.clear();
            for (const std::string& name : env_names) {
                spec.environments.push_back(artsim::env_from_name(name));
            }
        }
        if (!algo_names.empty()) {
            spec.policies.clear();
            for (const std::string& name : algo_names) {
                spec.policies.push_back(artsim::policy_from_name(name));
            }
        }
        if (!tx_levels.empty()) {
            spec.tx_levels = tx_levels;
        }
        if (master_seed_set) {
            spec.master_seed = master_seed;
        }
        if (runs > 0) {
            spec.seeds.clear();
            for (int i = 0; i < runs; ++i) {
                spec.seeds.push_back(static_cast<std::uint64_t>(i));
            }
        }
        if (!out_dir.empty()) {
            spec.out_dir = out_dir;
        }
        spec.write_trace |= trace;
        spec.write_heatmap |= heatmap;
        spec.write_maps |= maps;
        if (jobs > 0) {
            spec.jobs = jobs;
        }

        const artsim::SweepResult result = artsim::run_sweep(spec);
        artsim::write_sweep_outputs(spec, result);
        print_summary(result);
        std::printf("wrote %zu episode rows to %s\n", result.episodes.size(), spec.out_dir.c_str());
        if (result.error_count > 0) {
            std::cerr << result.error_count << " episode(s) errored\n";
            return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
