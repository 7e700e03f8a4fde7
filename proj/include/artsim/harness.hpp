#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "artsim/sim.hpp"

namespace artsim {

struct SweepSpec {
    std::vector<EnvKind> environments{EnvKind::Tunnel, EnvKind::Window, EnvKind::YJunction};
    std::vector<Policy> policies{Policy::ART, Policy::ART_SST, Policy::MSSC, Policy::FRC};
    std::vector<int> tx_levels{0, 1, 2, 3};
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::uint64_t master_seed = 1;
    double resolution_m = 0.25;
    EpisodeConfig base;  // policy/tx_level/seed fields are overwritten per episode
    std::string out_dir = "results";
    bool write_trace = false;
    bool write_heatmap = false;
    bool write_maps = false;
    int jobs = 0;  // 0 = hardware concurrency

    void validate() const;  // throws std::invalid_argument
};

struct EpisodeRow {
    EnvKind environment;
    Policy policy;
    int tx_level;
    std::uint64_t seed;          // trial seed from the sweep spec
    std::uint64_t episode_seed;  // derived seed actually fed to the episode
    double path_m = 0.0;
    double time_s = 0.0;
    double coverage_final = 0.0;
    int n_transmissions = 0;
    std::string termination;
    bool errored = false;
};

struct SummaryRow {
    EnvKind environment;
    Policy policy;
    int tx_level;
    double path_mean_m = 0.0;
    double path_std_m = 0.0;
    double time_mean_s = 0.0;
    double time_std_s = 0.0;
    int trials = 0;      // episodes included in the means
    bool best_path = false;  // minimum mean among policies for this env/level
    bool best_time = false;
};

struct SweepResult {
    std::vector<EpisodeRow> episodes;
    std::vector<SummaryRow> summary;
    std::vector<EpisodeMetrics> metrics;  // parallel to episodes
    int error_count = 0;
};

// Stable per-episode seed derived from the sweep coordinates; recorded in
// the output so any single run can be replayed in isolation.
std::uint64_t derive_episode_seed(std::uint64_t master_seed, EnvKind env, Policy policy,
                                  int tx_level, std::uint64_t trial_seed);

// Runs every (environment, policy, level, seed) combination. Episodes run
// in parallel but results keep spec order, so serial and parallel sweeps
// produce identical files.
SweepResult run_sweep(const SweepSpec& spec);

std::string episodes_csv(const std::vector<EpisodeRow>& rows);
std::string summary_csv(const std::vector<SummaryRow>& rows);

// Writes episodes.csv / summary.csv (and optional traces, heatmaps, maps)
// under spec.out_dir.
void write_sweep_outputs(const SweepSpec& spec, const SweepResult& result);

// Shortest round-trip decimal form; CSV cells parse back bit-exact.
std::string format_double(double v);

// ---------------------------------------------------------------------------
// RSSI heatmap export

struct RssiHeatmap {
    int width = 0;
    int height = 0;
    double resolution = 0.0;
    std::vector<double> max_rssi_dbm;  // NaN where never sampled
};

// Peak logged RSSI per visited cell across an episode trace. Throws
// std::invalid_argument on an empty trace.
RssiHeatmap build_rssi_heatmap(const std::vector<TraceRow>& trace, const OccupancyGrid& grid);

// CSV raster (row y=max first), no-data cells written as "nan".
std::string heatmap_to_csv(const RssiHeatmap& map);
// P2 raster: 0 = no data, 1..255 linear over the sampled dBm range.
std::string heatmap_to_pgm(const RssiHeatmap& map);

std::string trace_csv(const std::vector<TraceRow>& trace);

}  // namespace artsim
