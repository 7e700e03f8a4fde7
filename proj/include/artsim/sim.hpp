#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "artsim/frontier.hpp"
#include "artsim/gridworld.hpp"
#include "artsim/pathing.hpp"
#include "artsim/rf.hpp"
#include "artsim/strategy.hpp"

namespace artsim {

enum class ScoutMode : std::uint8_t {
    Exploring,
    NavigatingToTx,
    Transmitting,
    ReturningToFrontier,
    Done,
};

const char* scout_mode_name(ScoutMode mode);

enum class Termination : std::uint8_t { FrontiersExhausted, TimeExpired };

const char* termination_name(Termination t);

struct EpisodeConfig {
    double max_mission_time_s = 1800.0;
    double tick_dt_s = 0.1;
    double scout_speed_mps = 1.0;
    double specialist_speed_mps = 0.5;
    double sensor_range_m = 5.0;
    double frontier_search_radius_m = 10.0;
    RfParams rf = RfParams::defaults();
    ThresholdTable single_minimum = ThresholdTable::single_minimum();
    ThresholdTable per_level = ThresholdTable::per_level();
    Policy policy = Policy::ART;
    int tx_level = 0;  // payload level applied to every event this run
    std::uint64_t seed = 0;
    bool specialist_follows_goals = false;
    bool record_trace = false;

    // Throws std::invalid_argument; dt * speed must not exceed one cell.
    void validate(double resolution_m) const;
};

struct TransmissionRecord {
    std::int64_t trigger_tick = 0;
    int level = 0;
    Policy policy = Policy::ART;
    Pose trigger_pose;
    Pose tx_pose;
    Pose specialist_pose;
    double planned_rssi_dbm = 0.0;
    double realized_rssi_dbm = 0.0;
    double transmit_time_s = 0.0;
    double backtrack_distance_m = 0.0;  // walked from trigger to transmission start
    bool in_place = false;
};

struct CoveragePoint {
    double t_s;
    double coverage;
};

struct TraceRow {
    std::int64_t tick;
    double t_s;
    Pose scout;
    Pose specialist;
    double rssi_dbm;
    ScoutMode mode;
    double coverage;
};

struct EpisodeMetrics {
    double scout_path_distance_m = 0.0;
    double exploration_time_s = 0.0;
    double coverage_final = 0.0;
    Termination termination = Termination::FrontiersExhausted;
    std::int64_t ticks = 0;
    std::uint64_t seed = 0;
    std::vector<CoveragePoint> coverage_series;
    std::vector<TransmissionRecord> transmissions;
    std::vector<TraceRow> trace;  // populated when record_trace
};

struct SpecialistState {
    Pose pose;
    std::int64_t last_acknowledged_tick = -1;
    std::optional<Pose> goal;
    bool failed = false;
    bool at_goal = false;
    std::optional<BeliefGrid> belief;       // map snapshot from the last payload
    std::vector<Pose> pending_waypoints;    // remaining path toward the goal
};

// One sampled measurement between the true agent poses; finite samples are
// appended to the Scout's log (one retained per cell, latest wins).
SignalSample sample_signal(const OccupancyGrid& truth, const Pose& scout,
                           const Pose& specialist, const RfParams& rf, double noise_draw,
                           std::int64_t tick, SignalLog& log);

// Transfer duration for a payload at the realized link quality; infinite
// when the link is dead at transmission start.
double transmit(const RfParams& rf, const TxLevel& level, double realized_rssi_dbm);

// Advances the Specialist one tick toward its goal over its own belief
// snapshot; holds position when it has no goal, has arrived, or failed.
void specialist_step(SpecialistState& state, double dt_s, double speed_mps);

EpisodeMetrics run_episode(const EpisodeConfig& config, const Environment& env);

}  // namespace artsim
