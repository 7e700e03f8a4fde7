#pragma once

#include <vector>

#include "artsim/gridworld.hpp"
#include "artsim/pathing.hpp"

namespace artsim {

// Goals closer than this by path are discarded.
inline constexpr double kMinFrontierDistanceM = 0.5;
// At most this many nearest candidates are returned per detection.
inline constexpr int kMaxFrontierGoals = 5;

struct FrontierCandidate {
    Pose pose;           // representative cell center
    CellIndex cell;
    double distance_m;   // path distance from the robot over known-free cells
};

// All cells satisfying the frontier predicate: known Free and 8-adjacent to
// at least one Unknown cell. Row-major order.
std::vector<CellIndex> frontier_cells(const BeliefGrid& belief);

// Clusters frontier cells (8-connectivity), takes each cluster's cell
// nearest its centroid as representative, scores representatives by wave
// path distance from the robot, then filters to [0.5 m, search radius].
// When nothing survives, the radius doubles until it spans the whole map
// (final pass admits every finite distance). Survivors sort ascending by
// distance (ties by row then column) and at most five are returned; an
// empty result means exploration is complete.
// Throws std::domain_error when the robot cell is not known Free.
std::vector<FrontierCandidate> detect_frontiers(const BeliefGrid& belief, const Pose& robot,
                                                double search_radius_m);

}  // namespace artsim
