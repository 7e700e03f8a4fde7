#include "artsim/strategy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace artsim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TxLevel TxLevel::from_level(int level) {
    switch (level) {
        case 0: return {0, 1'000};
        case 1: return {1, 100'000};
        case 2: return {2, 10'000'000};
        case 3: return {3, 100'000'000};
    }
    throw std::invalid_argument("tx level must be in 0..3");
}

double ThresholdTable::threshold_for(const TxLevel& level) const {
    if (mode == ThresholdMode::SingleMinimum) {
        return single_min_dbm;
    }
    return per_level_dbm[static_cast<std::size_t>(level.level)];
}

void ThresholdTable::validate(double noise_floor_dbm) const {
    if (mode == ThresholdMode::SingleMinimum) {
        if (single_min_dbm <= noise_floor_dbm) {
            throw std::invalid_argument("signal threshold must exceed the noise floor");
        }
        return;
    }
    double prev = -kInf;
    for (double tau : per_level_dbm) {
        if (tau <= noise_floor_dbm) {
            throw std::invalid_argument("signal threshold must exceed the noise floor");
        }
        if (tau < prev) {
            throw std::invalid_argument("per-level thresholds must be non-decreasing");
        }
        prev = tau;
    }
}

ThresholdTable ThresholdTable::single_minimum(double tau_dbm) {
    ThresholdTable t;
    t.mode = ThresholdMode::SingleMinimum;
    t.single_min_dbm = tau_dbm;
    return t;
}

ThresholdTable ThresholdTable::per_level(std::array<double, 4> taus) {
    ThresholdTable t;
    t.mode = ThresholdMode::PerLevel;
    t.per_level_dbm = taus;
    return t;
}

const char* policy_name(Policy policy) {
    switch (policy) {
        case Policy::ART: return "ART";
        case Policy::ART_SST: return "ART-SST";
        case Policy::MSSC: return "MSSC";
        case Policy::FRC: return "FRC";
    }
    return "unknown";
}

Policy policy_from_name(const std::string& name) {
    if (name == "ART") return Policy::ART;
    if (name == "ART-SST" || name == "ART_SST") return Policy::ART_SST;
    if (name == "MSSC") return Policy::MSSC;
    if (name == "FRC") return Policy::FRC;
    throw std::invalid_argument("unknown policy name: " + name);
}

DisruptionScore DisruptionScore::unreachable() {
    return DisruptionScore{kInf, kInf, kInf};
}

DisruptionScore compute_disruption_score(const GridMask& belief_motion, const RfParams& rf,
                                         const Pose& scout, const Pose& candidate,
                                         const Pose& frontier, const TxLevel& level,
                                         double rssi_at_candidate_dbm, double scout_speed_mps) {
    if (!(scout_speed_mps > 0.0)) {
        throw std::invalid_argument("scout speed must be positive");
    }
    const auto to_candidate = astar(belief_motion, scout, candidate);
    if (!to_candidate) {
        return DisruptionScore::unreachable();
    }
    const auto back_to_frontier = astar(belief_motion, candidate, frontier);
    if (!back_to_frontier) {
        return DisruptionScore::unreachable();
    }
    return DisruptionScore{
        to_candidate->length_m / scout_speed_mps,
        transmission_time(rf, level.payload_bits(), rssi_at_candidate_dbm),
        back_to_frontier->length_m / scout_speed_mps,
    };
}

std::optional<TxPlan> get_best_tx_location(const SignalLog& log, const TxLevel& level,
                                           const ThresholdTable& thresholds,
                                           const GridMask& belief_motion, const RfParams& rf,
                                           const Pose& scout, const Pose& frontier,
                                           double scout_speed_mps) {
    if (!(scout_speed_mps > 0.0)) {
        throw std::invalid_argument("scout speed must be positive");
    }
    const CellIndex scout_cell = belief_motion.cell_of(scout);
    if (!belief_motion.in_bounds(scout_cell) || !belief_motion.passable(scout_cell)) {
        throw std::domain_error("get_best_tx_location: scout cell is impassable");
    }
    // Two single-source waves replace per-candidate searches; on a static
    // grid the wave distances equal the per-pair astar lengths exactly.
    const DistanceField from_scout(belief_motion, scout_cell);
    const DistanceField from_frontier(belief_motion, belief_motion.cell_of(frontier));

    const double tau = thresholds.threshold_for(level);
    std::optional<TxPlan> best;
    for (const SignalSample& sample : log.samples()) {
        if (sample.rssi_dbm < tau) {
            continue;
        }
        const CellIndex cell = belief_motion.cell_of(sample.pose);
        if (!belief_motion.in_bounds(cell) || !from_scout.reached(cell) ||
            !from_frontier.reached(cell)) {
            continue;  // unreachable candidates are never selected
        }
        const DisruptionScore score{
            from_scout.meters(cell) / scout_speed_mps,
            transmission_time(rf, level.payload_bits(), sample.rssi_dbm),
            from_frontier.meters(cell) / scout_speed_mps,
        };
        const bool better =
            !best || score.total_s() < best->expected_score.total_s() ||
            (score.total_s() == best->expected_score.total_s() && sample.tick < best->source_tick);
        if (better) {
            best = TxPlan{sample.pose, sample.rssi_dbm, score, Policy::ART, false, sample.tick};
        }
    }
    return best;
}

std::optional<TxPlan> frc_rendezvous_plan(const PlanContext& ctx) {
    const GridMask& mask = *ctx.belief_motion;
    const auto approach = astar(mask, ctx.scout, ctx.specialist_last_known);
    if (!approach) {
        return std::nullopt;
    }
    const Pose& specialist = ctx.specialist_last_known;
    Pose target = mask.center_of(approach->cells.back());
    for (const CellIndex& c : approach->cells) {
        const Pose center = mask.center_of(c);
        if (std::hypot(center.x - specialist.x, center.y - specialist.y) <= kRendezvousRadiusM) {
            target = center;
            break;
        }
    }
    const double expected_rssi = rssi_dbm(*ctx.rf, ctx.rf->reference_distance_m);
    DisruptionScore score = compute_disruption_score(mask, *ctx.rf, ctx.scout, target,
                                                     ctx.frontier, ctx.level, expected_rssi,
                                                     ctx.scout_speed_mps);
    return TxPlan{target, expected_rssi, score, Policy::FRC, false, -1};
}

namespace {

TxPlan in_place_plan(Policy policy, const PlanContext& ctx) {
    DisruptionScore score{0.0,
                          transmission_time(*ctx.rf, ctx.level.payload_bits(),
                                            ctx.current_rssi_dbm),
                          0.0};
    return TxPlan{ctx.scout, ctx.current_rssi_dbm, score, policy, true, -1};
}

std::optional<TxPlan> mssc_plan(const PlanContext& ctx) {
    const GridMask& mask = *ctx.belief_motion;
    const CellIndex scout_cell = mask.cell_of(ctx.scout);
    if (!mask.in_bounds(scout_cell) || !mask.passable(scout_cell)) {
        throw std::domain_error("mssc_plan: scout cell is impassable");
    }
    const DistanceField from_scout(mask, scout_cell);
    const DistanceField from_frontier(mask, mask.cell_of(ctx.frontier));

    const double tau = ctx.single_minimum.threshold_for(ctx.level);
    std::optional<TxPlan> best;
    double best_distance = kInf;
    for (const SignalSample& sample : ctx.log->samples()) {
        if (sample.rssi_dbm < tau) {
            continue;
        }
        const CellIndex cell = mask.cell_of(sample.pose);
        if (!mask.in_bounds(cell) || !from_scout.reached(cell)) {
            continue;
        }
        const double distance = from_scout.meters(cell);
        const bool better = distance < best_distance ||
                            (distance == best_distance && best &&
                             sample.tick < best->source_tick);
        if (better) {
            // Transmission time plays no part in the selection; the score is
            // still reported for the record.
            const DisruptionScore score{
                distance / ctx.scout_speed_mps,
                transmission_time(*ctx.rf, ctx.level.payload_bits(), sample.rssi_dbm),
                from_frontier.reached(cell) ? from_frontier.meters(cell) / ctx.scout_speed_mps
                                            : kInf,
            };
            best_distance = distance;
            best = TxPlan{sample.pose, sample.rssi_dbm, score, Policy::MSSC, false, sample.tick};
        }
    }
    return best;
}

}  // namespace

std::optional<TxPlan> plan_transmission(Policy policy, const PlanContext& ctx) {
    switch (policy) {
        case Policy::ART: {
            if (ctx.current_rssi_dbm >= ctx.single_minimum.threshold_for(ctx.level)) {
                return in_place_plan(policy, ctx);
            }
            auto plan = get_best_tx_location(*ctx.log, ctx.level, ctx.single_minimum,
                                             *ctx.belief_motion, *ctx.rf, ctx.scout, ctx.frontier,
                                             ctx.scout_speed_mps);
            if (plan) plan->policy = Policy::ART;
            return plan;
        }
        case Policy::ART_SST: {
            if (ctx.current_rssi_dbm >= ctx.per_level.threshold_for(ctx.level)) {
                return in_place_plan(policy, ctx);
            }
            auto plan = get_best_tx_location(*ctx.log, ctx.level, ctx.per_level,
                                             *ctx.belief_motion, *ctx.rf, ctx.scout, ctx.frontier,
                                             ctx.scout_speed_mps);
            if (plan) plan->policy = Policy::ART_SST;
            return plan;
        }
        case Policy::MSSC: {
            if (ctx.current_rssi_dbm >= ctx.single_minimum.threshold_for(ctx.level)) {
                return in_place_plan(policy, ctx);
            }
            return mssc_plan(ctx);
        }
        case Policy::FRC: {
            const double d = std::hypot(ctx.scout.x - ctx.specialist_last_known.x,
                                        ctx.scout.y - ctx.specialist_last_known.y);
            if (d <= kRendezvousRadiusM) {
                return in_place_plan(policy, ctx);
            }
            return frc_rendezvous_plan(ctx);
        }
    }
    throw std::invalid_argument("unknown policy");
}

}  // namespace artsim
