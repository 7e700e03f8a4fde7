#include "artsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace artsim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kArrivalEps = 1e-9;
}  // namespace

const char* scout_mode_name(ScoutMode mode) {
    switch (mode) {
        case ScoutMode::Exploring: return "exploring";
        case ScoutMode::NavigatingToTx: return "navigating_to_tx";
        case ScoutMode::Transmitting: return "transmitting";
        case ScoutMode::ReturningToFrontier: return "returning_to_frontier";
        case ScoutMode::Done: return "done";
    }
    return "unknown";
}

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::FrontiersExhausted: return "frontiers_exhausted";
        case Termination::TimeExpired: return "time_expired";
    }
    return "unknown";
}

void EpisodeConfig::validate(double resolution_m) const {
    if (!(max_mission_time_s > 0.0) || !(tick_dt_s > 0.0) || !(scout_speed_mps > 0.0) ||
        !(specialist_speed_mps > 0.0) || !(sensor_range_m >= 0.0) ||
        !(frontier_search_radius_m > 0.0)) {
        throw std::invalid_argument("episode config fields must be positive");
    }
    if (tick_dt_s * scout_speed_mps > resolution_m + 1e-12 ||
        tick_dt_s * specialist_speed_mps > resolution_m + 1e-12) {
        throw std::invalid_argument("one tick of motion must not exceed one cell");
    }
    if (tx_level < 0 || tx_level > 3) {
        throw std::invalid_argument("tx level must be in 0..3");
    }
    rf.validate();
    single_minimum.validate(rf.noise_floor_dbm);
    per_level.validate(rf.noise_floor_dbm);
}

SignalSample sample_signal(const OccupancyGrid& truth, const Pose& scout,
                           const Pose& specialist, const RfParams& rf, double noise_draw,
                           std::int64_t tick, SignalLog& log) {
    const auto distance = signal_path_distance(truth, scout, specialist);
    const double rssi = distance ? rssi_dbm(rf, *distance, noise_draw) : -kInf;
    const SignalSample sample{rssi, scout, tick};
    log.record(sample);
    return sample;
}

double transmit(const RfParams& rf, const TxLevel& level, double realized_rssi_dbm) {
    return transmission_time(rf, level.payload_bits(), realized_rssi_dbm);
}

void specialist_step(SpecialistState& state, double dt_s, double speed_mps) {
    if (!(dt_s > 0.0)) {
        throw std::invalid_argument("specialist_step: dt must be positive");
    }
    if (!state.goal || state.failed || state.at_goal) {
        return;
    }
    if (state.pending_waypoints.empty()) {
        state.at_goal = true;
        return;
    }
    double budget = speed_mps * dt_s;
    while (budget > kArrivalEps && !state.pending_waypoints.empty()) {
        const Pose& wp = state.pending_waypoints.front();
        const double dx = wp.x - state.pose.x;
        const double dy = wp.y - state.pose.y;
        const double d = std::hypot(dx, dy);
        if (d <= kArrivalEps) {
            state.pending_waypoints.erase(state.pending_waypoints.begin());
            continue;
        }
        const double step = std::min(budget, d);
        state.pose.x += dx / d * step;
        state.pose.y += dy / d * step;
        budget -= step;
        if (step == d) {
            state.pending_waypoints.erase(state.pending_waypoints.begin());
        }
    }
    if (state.pending_waypoints.empty()) {
        state.at_goal = true;
    }
}

namespace {

// Constant-speed polyline follower over cell-center waypoints.
class PathWalker {
public:
    void clear() {
        waypoints_.clear();
        next_ = 0;
    }
    void set(const GridMask& mask, const PathResult& path) {
        waypoints_.clear();
        waypoints_.reserve(path.cells.size());
        for (const CellIndex& c : path.cells) {
            waypoints_.push_back(mask.center_of(c));
        }
        next_ = 0;
    }
    // Extra terminal waypoint, e.g. the exact saved pose inside the last cell.
    void append(const Pose& pose) { waypoints_.push_back(pose); }
    bool active() const { return next_ < waypoints_.size(); }
    const std::vector<Pose>& waypoints() const { return waypoints_; }
    std::size_t next_index() const { return next_; }

    // Moves the pose up to `budget` meters along the path; returns the
    // distance actually covered.
    double advance(Pose& pose, double budget) {
        double moved = 0.0;
        while (budget > kArrivalEps && next_ < waypoints_.size()) {
            const Pose& wp = waypoints_[next_];
            const double dx = wp.x - pose.x;
            const double dy = wp.y - pose.y;
            const double d = std::hypot(dx, dy);
            if (d <= kArrivalEps) {
                pose = wp;
                ++next_;
                continue;
            }
            const double step = std::min(budget, d);
            if (step == d) {
                pose = wp;
                ++next_;
            } else {
                pose.x += dx / d * step;
                pose.y += dy / d * step;
            }
            moved += step;
            budget -= step;
        }
        return moved;
    }

private:
    std::vector<Pose> waypoints_;
    std::size_t next_ = 0;
};

class EpisodeEngine {
public:
    EpisodeEngine(const EpisodeConfig& config, const Environment& env)
        : config_(config),
          truth_(env.grid),
          belief_(truth_),
          signal_mask_(GridMask::signal(truth_)),
          log_(truth_.width(), truth_.resolution()),
          gauss_(config.seed) {
        config_.validate(truth_.resolution());
        const CellIndex start_cell = truth_.cell_of(env.start);
        if (!truth_.in_bounds(start_cell) || !truth_.at(start_cell).traversable) {
            throw std::invalid_argument("episode start is not traversable");
        }
        scout_pose_ = truth_.center_of(start_cell);
        specialist_.pose = scout_pose_;
        specialist_last_known_ = scout_pose_;
        specialist_cell_ = start_cell;
        signal_field_.emplace(signal_mask_, start_cell);

        const DistanceField reach(GridMask::traversal(truth_), start_cell);
        reachable_free_.assign(truth_.size(), 0);
        for (int y = 0; y < truth_.height(); ++y) {
            for (int x = 0; x < truth_.width(); ++x) {
                if (reach.reached({x, y})) {
                    reachable_free_[truth_.index({x, y})] = 1;
                    ++reachable_total_;
                }
            }
        }

        level_ = TxLevel::from_level(config_.tx_level);
        events_ = env.events;
        triggered_.assign(events_.size(), 0);

        metrics_.seed = config_.seed;
    }

    EpisodeMetrics run() {
        reveal_and_tally(scout_pose_);
        current_sample_ = take_sample();
        push_coverage();
        push_trace(false);

        bool done = false;
        while (clock_ < config_.max_mission_time_s) {
            if (mode_ == ScoutMode::Exploring && !walker_.active()) {
                if (!pending_.empty()) {
                    handle_pending_trigger();
                } else if (!select_goal()) {
                    done = true;
                    break;
                }
            }

            const bool transmitted = step_tick();
            ++tick_;
            clock_ += config_.tick_dt_s;
            push_coverage();
            push_trace(transmitted);
        }

        mode_ = ScoutMode::Done;
        metrics_.termination =
            done ? Termination::FrontiersExhausted : Termination::TimeExpired;
        metrics_.exploration_time_s = std::min(clock_, config_.max_mission_time_s);
        metrics_.coverage_final = coverage();
        metrics_.ticks = tick_;
        return std::move(metrics_);
    }

private:
    // --- per-tick pipeline -------------------------------------------------

    bool step_tick() {
        walk();
        reveal_and_tally(scout_pose_);
        current_sample_ = take_sample();
        detect_events();

        bool transmitted = false;
        if (walker_.active() && mode_ == ScoutMode::Exploring) {
            check_goal_validity();
        }
        if (!walker_.active()) {
            transmitted = handle_arrival();
        }
        if (mode_ == ScoutMode::Exploring && !pending_.empty()) {
            transmitted = handle_pending_trigger() || transmitted;
        }
        if (mode_ == ScoutMode::NavigatingToTx && fallback_active_ &&
            current_sample_.rssi_dbm >= fallback_tau_) {
            // A qualifying sample appeared en route; transmit from here.
            transmitted = true;
            complete_transmission(scout_pose_, current_sample_.rssi_dbm, current_sample_.rssi_dbm);
        }
        if (config_.specialist_follows_goals) {
            specialist_step(specialist_, config_.tick_dt_s, config_.specialist_speed_mps);
            refresh_signal_field();
        }
        return transmitted;
    }

    void walk() {
        const double moved = walker_.advance(scout_pose_, config_.scout_speed_mps * config_.tick_dt_s);
        metrics_.scout_path_distance_m += moved;
    }

    SignalSample take_sample() {
        const double draw = config_.rf.shadow_sigma_db > 0.0 ? gauss_.next() : 0.0;
        const CellIndex c = truth_.cell_of(scout_pose_);
        const double distance = signal_field_->meters(c);
        const double rssi = rssi_dbm(config_.rf, distance, draw);
        const SignalSample sample{rssi, scout_pose_, tick_};
        log_.record(sample);
        return sample;
    }

    void detect_events() {
        for (std::size_t i = 0; i < events_.size(); ++i) {
            if (triggered_[i]) {
                continue;
            }
            const Pose& loc = events_[i].location;
            const double d = std::hypot(loc.x - scout_pose_.x, loc.y - scout_pose_.y);
            if (d > config_.sensor_range_m) {
                continue;
            }
            if (ray_reaches(truth_, scout_pose_, truth_.cell_of(loc))) {
                triggered_[i] = 1;
                pending_.push_back(i);
            }
        }
    }

    // --- exploration goals -------------------------------------------------

    bool select_goal() {
        const auto candidates =
            detect_frontiers(belief_, scout_pose_, config_.frontier_search_radius_m);
        if (candidates.empty()) {
            return false;  // exploration complete
        }
        const GridMask motion = GridMask::belief_traversal(belief_);
        for (const FrontierCandidate& c : candidates) {
            const auto path = astar(motion, scout_pose_, c.pose);
            if (path) {
                goal_ = c;
                walker_.set(motion, *path);
                return true;
            }
        }
        // Candidates exist but none is plannable right now; keep the episode
        // alive and retry after the next reveal.
        goal_.reset();
        return true;
    }

    void check_goal_validity() {
        if (!goal_) {
            return;
        }
        const CellIndex gc = goal_->cell;
        const Knowledge k = belief_.at(gc);
        bool valid = k != Knowledge::Obstacle;
        if (valid && k == Knowledge::Free) {
            // Goal consumed once its surroundings are fully revealed.
            bool adjacent_unknown = false;
            for (int dy = -1; dy <= 1 && !adjacent_unknown; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const CellIndex n{gc.x + dx, gc.y + dy};
                    if ((dx != 0 || dy != 0) && belief_.in_bounds(n) &&
                        belief_.at(n) == Knowledge::Unknown) {
                        adjacent_unknown = true;
                        break;
                    }
                }
            }
            valid = adjacent_unknown;
        }
        if (!valid) {
            goal_.reset();
            walker_.clear();
            return;
        }
        // Re-plan when a revealed obstacle cuts the remaining path.
        for (std::size_t i = walker_.next_index(); i < walker_.waypoints().size(); ++i) {
            const CellIndex c = belief_.cell_of(walker_.waypoints()[i]);
            if (belief_.at(c) == Knowledge::Obstacle) {
                const GridMask motion = GridMask::belief_traversal(belief_);
                const auto path = astar(motion, scout_pose_, goal_->pose);
                if (path) {
                    walker_.set(motion, *path);
                } else {
                    goal_.reset();
                    walker_.clear();
                }
                return;
            }
        }
    }

    // --- transmissions -----------------------------------------------------

    bool handle_arrival() {
        switch (mode_) {
            case ScoutMode::Exploring:
                goal_.reset();  // frontier reached; next tick re-detects
                return false;
            case ScoutMode::NavigatingToTx: {
                const double realized = current_sample_.rssi_dbm;
                if (!(channel_capacity(config_.rf, realized) > 0.0)) {
                    // Link dead at transmission start: planner re-invoked.
                    plan_and_navigate();
                    return false;
                }
                complete_transmission(scout_pose_, planned_rssi_, realized);
                return true;
            }
            case ScoutMode::ReturningToFrontier: {
                mode_ = ScoutMode::Exploring;
                saved_pose_.reset();
                if (goal_) {
                    const GridMask motion = GridMask::belief_traversal(belief_);
                    const auto path = astar(motion, scout_pose_, goal_->pose);
                    if (path) {
                        walker_.set(motion, *path);
                    } else {
                        goal_.reset();
                    }
                }
                return false;
            }
            default:
                return false;
        }
    }

    bool handle_pending_trigger() {
        active_event_ = pending_.front();
        pending_.pop_front();
        trigger_tick_ = tick_;
        trigger_pose_ = scout_pose_;
        backtrack_base_ = metrics_.scout_path_distance_m;
        return plan_and_navigate();
    }

    // Plans the pending transmission from the current pose. Returns true if
    // it transmitted in place.
    bool plan_and_navigate() {
        const GridMask motion = GridMask::belief_traversal(belief_);
        PlanContext ctx;
        ctx.log = &log_;
        ctx.level = level_;
        ctx.single_minimum = config_.single_minimum;
        ctx.per_level = config_.per_level;
        ctx.current_rssi_dbm = current_sample_.rssi_dbm;
        ctx.scout = scout_pose_;
        ctx.frontier = goal_ ? goal_->pose : scout_pose_;
        ctx.specialist_last_known = specialist_last_known_;
        ctx.belief_motion = &motion;
        ctx.rf = &config_.rf;
        ctx.scout_speed_mps = config_.scout_speed_mps;

        auto plan = plan_transmission(config_.policy, ctx);
        fallback_active_ = false;
        if (!plan) {
            // No qualifying sample yet: rendezvous toward the Specialist and
            // re-plan as soon as one appears.
            plan = frc_rendezvous_plan(ctx);
            if (!plan) {
                // Specialist unreachable in belief; retry once more of the
                // map is known.
                pending_.push_back(active_event_);
                active_event_ = static_cast<std::size_t>(-1);
                return false;
            }
            fallback_active_ = true;
            fallback_tau_ = (config_.policy == Policy::ART_SST ? config_.per_level
                                                               : config_.single_minimum)
                                .threshold_for(level_);
        }

        if (plan->in_place) {
            complete_transmission(scout_pose_, plan->expected_rssi_dbm,
                                  current_sample_.rssi_dbm);
            return true;
        }

        const auto path = astar(motion, scout_pose_, plan->target);
        if (!path) {
            pending_.push_back(active_event_);
            active_event_ = static_cast<std::size_t>(-1);
            fallback_active_ = false;
            return false;
        }
        if (mode_ == ScoutMode::Exploring) {
            saved_pose_ = scout_pose_;
        }
        planned_rssi_ = plan->expected_rssi_dbm;
        mode_ = ScoutMode::NavigatingToTx;
        walker_.set(motion, *path);
        return false;
    }

    void complete_transmission(const Pose& tx_pose, double planned, double realized) {
        const double t_tx = transmit(config_.rf, level_, realized);
        clock_ += t_tx;

        TransmissionRecord rec;
        rec.trigger_tick = trigger_tick_;
        rec.level = level_.level;
        rec.policy = config_.policy;
        rec.trigger_pose = trigger_pose_;
        rec.tx_pose = tx_pose;
        rec.specialist_pose = specialist_.pose;
        rec.planned_rssi_dbm = planned;
        rec.realized_rssi_dbm = realized;
        rec.transmit_time_s = t_tx;
        rec.backtrack_distance_m = metrics_.scout_path_distance_m - backtrack_base_;
        rec.in_place = mode_ == ScoutMode::Exploring;
        metrics_.transmissions.push_back(rec);

        // Acknowledgment: the Specialist's position becomes known again.
        specialist_.last_acknowledged_tick = tick_;
        specialist_last_known_ = specialist_.pose;
        if (config_.specialist_follows_goals && active_event_ < events_.size()) {
            specialist_.goal = events_[active_event_].location;
            specialist_.at_goal = false;
            specialist_.failed = false;
            specialist_.belief.emplace(belief_);
            plan_specialist_path();
        }
        active_event_ = static_cast<std::size_t>(-1);
        fallback_active_ = false;

        if (mode_ != ScoutMode::Exploring) {
            // Detour taken: head back to the saved pose before resuming.
            mode_ = ScoutMode::ReturningToFrontier;
            const GridMask motion = GridMask::belief_traversal(belief_);
            const auto path = astar(motion, scout_pose_, *saved_pose_);
            if (path) {
                walker_.set(motion, *path);
                walker_.append(*saved_pose_);
            } else {
                mode_ = ScoutMode::Exploring;
                saved_pose_.reset();
                goal_.reset();
                walker_.clear();
            }
        }
    }

    void plan_specialist_path() {
        specialist_.pending_waypoints.clear();
        const GridMask motion = GridMask::belief_traversal(*specialist_.belief);
        try {
            const auto path = astar(motion, specialist_.pose, *specialist_.goal);
            if (!path) {
                specialist_.failed = true;
                return;
            }
            for (const CellIndex& c : path->cells) {
                specialist_.pending_waypoints.push_back(motion.center_of(c));
            }
        } catch (const std::domain_error&) {
            specialist_.failed = true;
        }
    }

    void refresh_signal_field() {
        const CellIndex c = truth_.cell_of(specialist_.pose);
        if (c == specialist_cell_) {
            return;
        }
        specialist_cell_ = c;
        signal_field_.emplace(signal_mask_, c);
    }

    // --- bookkeeping ---------------------------------------------------------

    void reveal_and_tally(const Pose& pose) {
        reveal(belief_, truth_, pose, config_.sensor_range_m);
        const double res = truth_.resolution();
        const CellIndex pc = truth_.cell_of(pose);
        const int reach = static_cast<int>(std::ceil(config_.sensor_range_m / res)) + 1;
        const int x0 = std::max(0, pc.x - reach);
        const int x1 = std::min(truth_.width() - 1, pc.x + reach);
        const int y0 = std::max(0, pc.y - reach);
        const int y1 = std::min(truth_.height() - 1, pc.y + reach);
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const std::size_t i = truth_.index({x, y});
                if (reachable_free_[i] == 1 && belief_.at({x, y}) != Knowledge::Unknown) {
                    reachable_free_[i] = 2;  // known
                    ++known_reachable_;
                }
            }
        }
    }

    double coverage() const {
        return reachable_total_ == 0
                   ? 1.0
                   : static_cast<double>(known_reachable_) / static_cast<double>(reachable_total_);
    }

    void push_coverage() { metrics_.coverage_series.push_back({clock_, coverage()}); }

    void push_trace(bool transmitted) {
        if (!config_.record_trace) {
            return;
        }
        const ScoutMode mode = transmitted ? ScoutMode::Transmitting : mode_;
        metrics_.trace.push_back({tick_, clock_, scout_pose_, specialist_.pose,
                                  current_sample_.rssi_dbm, mode, coverage()});
    }

    // --- state ---------------------------------------------------------------

    EpisodeConfig config_;
    const OccupancyGrid& truth_;
    BeliefGrid belief_;
    GridMask signal_mask_;
    SignalLog log_;
    GaussianDraws gauss_;

    Pose scout_pose_;
    SpecialistState specialist_;
    Pose specialist_last_known_;
    CellIndex specialist_cell_;
    std::optional<DistanceField> signal_field_;

    ScoutMode mode_ = ScoutMode::Exploring;
    PathWalker walker_;
    std::optional<FrontierCandidate> goal_;
    std::optional<Pose> saved_pose_;
    SignalSample current_sample_;

    TxLevel level_;
    std::vector<TxEvent> events_;
    std::vector<std::uint8_t> triggered_;
    std::deque<std::size_t> pending_;
    std::size_t active_event_ = static_cast<std::size_t>(-1);
    std::int64_t trigger_tick_ = 0;
    Pose trigger_pose_;
    double backtrack_base_ = 0.0;
    double planned_rssi_ = 0.0;
    bool fallback_active_ = false;
    double fallback_tau_ = 0.0;

    std::vector<std::uint8_t> reachable_free_;  // 0 = not reachable, 1 = reachable, 2 = known
    std::size_t reachable_total_ = 0;
    std::size_t known_reachable_ = 0;

    std::int64_t tick_ = 0;
    double clock_ = 0.0;
    EpisodeMetrics metrics_;
};

}  // namespace

EpisodeMetrics run_episode(const EpisodeConfig& config, const Environment& env) {
    EpisodeEngine engine(config, env);
    return engine.run();
}

}  // namespace artsim
