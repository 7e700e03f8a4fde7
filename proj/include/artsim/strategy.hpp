#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "artsim/pathing.hpp"
#include "artsim/rf.hpp"

namespace artsim {

// Payload taxonomy: telemetry, compressed image, high-res perception data,
// multi-frame scan/video.
struct TxLevel {
    int level = 0;
    std::int64_t payload_bytes = 1000;

    std::int64_t payload_bits() const { return payload_bytes * 8; }
    static TxLevel from_level(int level);  // throws on level outside 0..3
};

enum class ThresholdMode { SingleMinimum, PerLevel };

// Minimum acceptable RSSI per payload level. SingleMinimum applies one
// usable-WiFi floor to every level; PerLevel tightens with payload size.
struct ThresholdTable {
    ThresholdMode mode = ThresholdMode::SingleMinimum;
    double single_min_dbm = -80.0;
    std::array<double, 4> per_level_dbm{-80.0, -70.0, -67.0, -60.0};

    double threshold_for(const TxLevel& level) const;
    void validate(double noise_floor_dbm) const;  // throws std::invalid_argument

    static ThresholdTable single_minimum(double tau_dbm = -80.0);
    static ThresholdTable per_level(std::array<double, 4> taus = {-80.0, -70.0, -67.0, -60.0});
};

enum class Policy { ART, ART_SST, MSSC, FRC };

const char* policy_name(Policy policy);
Policy policy_from_name(const std::string& name);

// Time cost of interrupting exploration: travel to the transmission point,
// transmit, travel back to the frontier.
struct DisruptionScore {
    double t_to_location_s = 0.0;
    double t_transmitting_s = 0.0;
    double t_return_to_frontier_s = 0.0;

    double total_s() const { return t_to_location_s + t_transmitting_s + t_return_to_frontier_s; }
    static DisruptionScore unreachable();
};

struct TxPlan {
    Pose target;
    double expected_rssi_dbm = 0.0;
    DisruptionScore expected_score;
    Policy policy = Policy::ART;
    bool in_place = false;          // current pose already satisfies the policy
    std::int64_t source_tick = -1;  // tick of the backing log sample, if any
};

DisruptionScore compute_disruption_score(const GridMask& belief_motion, const RfParams& rf,
                                         const Pose& scout, const Pose& candidate,
                                         const Pose& frontier, const TxLevel& level,
                                         double rssi_at_candidate_dbm, double scout_speed_mps);

// Filters the log by the level's threshold and returns the candidate with
// the lowest disruption score. Ties break toward the earliest sample tick.
// NoCandidate (nullopt) when no logged sample qualifies or every qualifying
// sample is unreachable.
std::optional<TxPlan> get_best_tx_location(const SignalLog& log, const TxLevel& level,
                                           const ThresholdTable& thresholds,
                                           const GridMask& belief_motion, const RfParams& rf,
                                           const Pose& scout, const Pose& frontier,
                                           double scout_speed_mps);

struct PlanContext {
    const SignalLog* log = nullptr;
    TxLevel level;
    ThresholdTable single_minimum;
    ThresholdTable per_level;
    double current_rssi_dbm = 0.0;
    Pose scout;
    Pose frontier;
    Pose specialist_last_known;
    const GridMask* belief_motion = nullptr;
    const RfParams* rf = nullptr;
    double scout_speed_mps = 1.0;
};

// The rendezvous target: first cell along the approach path whose center
// lies within 1 m of the Specialist's last known pose.
std::optional<TxPlan> frc_rendezvous_plan(const PlanContext& ctx);

// Dispatches to the policy's selection rule. Returns nullopt when the
// policy has no qualifying candidate (callers fall back to rendezvous,
// re-planning as new samples arrive).
std::optional<TxPlan> plan_transmission(Policy policy, const PlanContext& ctx);

inline constexpr double kRendezvousRadiusM = 1.0;

}  // namespace artsim
