#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "artsim/frontier.hpp"
#include "artsim/gridworld.hpp"
#include "oracles.hpp"

using namespace artsim;

namespace {

bool is_frontier_cell(const BeliefGrid& belief, CellIndex c) {
    if (belief.at(c) != Knowledge::Free) {
        return false;
    }
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const CellIndex n{c.x + dx, c.y + dy};
            if (belief.in_bounds(n) && belief.at(n) == Knowledge::Unknown) {
                return true;
            }
        }
    }
    return false;
}

}  // namespace

TEST_CASE("fully known belief yields no candidates") {
    OccupancyGrid grid(12, 12, 0.25);
    for (int y = 1; y < 11; ++y) {
        for (int x = 1; x < 11; ++x) {
            grid.at({x, y}) = {true, true};
        }
    }
    BeliefGrid belief(grid);
    reveal(belief, grid, grid.center_of({5, 5}), 100.0);
    REQUIRE(belief.unknown_count() == 0);
    CHECK(frontier_cells(belief).empty());
    CHECK(detect_frontiers(belief, grid.center_of({5, 5}), 10.0).empty());
}

TEST_CASE("robot cell must be known free") {
    OccupancyGrid grid(12, 12, 0.25);
    grid.at({5, 5}) = {true, true};
    BeliefGrid belief(grid);
    CHECK_THROWS_AS(detect_frontiers(belief, grid.center_of({5, 5}), 10.0), std::domain_error);
}

TEST_CASE("revealed disk inside a large unknown room") {
    // 20 m x 20 m open interior; a 5 m sensing disk revealed at the middle.
    OccupancyGrid grid(80, 80, 0.25);
    for (int y = 1; y < 79; ++y) {
        for (int x = 1; x < 79; ++x) {
            grid.at({x, y}) = {true, true};
        }
    }
    BeliefGrid belief(grid);
    const Pose robot = grid.center_of({40, 40});
    reveal(belief, grid, robot, 5.0);

    const auto candidates = detect_frontiers(belief, robot, 10.0);
    REQUIRE_FALSE(candidates.empty());
    for (const FrontierCandidate& c : candidates) {
        REQUIRE(is_frontier_cell(belief, c.cell));
        // Representatives sit on the rim of the revealed disk.
        const double r = std::hypot(c.pose.x - robot.x, c.pose.y - robot.y);
        REQUIRE(r > 4.0);
        REQUIRE(r < 5.3);
    }
}

TEST_CASE("near pocket is filtered until the radius rule admits it") {
    // Everything known except a pocket of unknown cells right next to the
    // robot: path distance to the frontier cell is under 0.5 m, so detection
    // must not return it at any radius.
    OccupancyGrid grid(16, 16, 0.25);
    for (int y = 1; y < 15; ++y) {
        for (int x = 1; x < 15; ++x) {
            grid.at({x, y}) = {true, true};
        }
    }
    BeliefGrid fresh(grid);
    for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 16; ++x) {
            if (x == 9 && y == 9) {
                continue;  // the pocket stays unknown
            }
            fresh.set_known({x, y}, grid.at({x, y}).traversable ? Knowledge::Free
                                                                : Knowledge::Obstacle);
        }
    }
    const Pose robot = grid.center_of({8, 8});
    // The pocket's cluster representative ends up one cardinal step from the
    // robot (0.25 m by path), so every radius pass filters it out.
    const auto raw = frontier_cells(fresh);
    CHECK_FALSE(raw.empty());
    const auto candidates = detect_frontiers(fresh, robot, 10.0);
    CHECK(candidates.empty());
}

TEST_CASE("far pocket survives radius expansion") {
    // Unknown pocket 6 m from the robot while the initial radius is 2 m:
    // detection must expand and still find it.
    OccupancyGrid grid(60, 20, 0.25);
    for (int y = 1; y < 19; ++y) {
        for (int x = 1; x < 59; ++x) {
            grid.at({x, y}) = {true, true};
        }
    }
    BeliefGrid fresh(grid);
    for (int y = 0; y < 20; ++y) {
        for (int x = 0; x < 60; ++x) {
            if (x >= 40 && x <= 42 && y >= 8 && y <= 10) {
                continue;  // unknown pocket ~6-8 m right of the robot
            }
            fresh.set_known({x, y}, grid.at({x, y}).traversable ? Knowledge::Free
                                                                : Knowledge::Obstacle);
        }
    }
    const Pose robot = grid.center_of({16, 9});
    const auto candidates = detect_frontiers(fresh, robot, 2.0);
    REQUIRE_FALSE(candidates.empty());
    CHECK(candidates[0].distance_m > 2.0);
    for (const FrontierCandidate& c : candidates) {
        REQUIRE(is_frontier_cell(fresh, c.cell));
    }
}

TEST_CASE("frontier cells equal the brute-force scan on random beliefs") {
    std::mt19937_64 rng(907);
    for (int round = 0; round < 200; ++round) {
        const OccupancyGrid grid = oracles::random_grid(rng, 30, 30, 0.25, 0.22, 0.04);
        CellIndex robot_cell;
        const BeliefGrid belief =
            oracles::random_walk_belief(rng, grid, 100, 2.5, &robot_cell);

        const auto got = frontier_cells(belief);
        const auto expected = oracles::frontier_scan(belief);
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            REQUIRE(got[i] == expected[i]);
        }
    }
}

TEST_CASE("candidate list is sorted, capped, ranged and deterministic") {
    std::mt19937_64 rng(911);
    int non_empty = 0;
    for (int round = 0; round < 60; ++round) {
        const OccupancyGrid grid = oracles::random_grid(rng, 30, 30, 0.25, 0.2, 0.03);
        CellIndex robot_cell;
        const BeliefGrid belief =
            oracles::random_walk_belief(rng, grid, 150, 2.5, &robot_cell);
        const Pose robot = grid.center_of(robot_cell);
        if (belief.at(robot_cell) != Knowledge::Free) {
            continue;
        }

        const double radius = 4.0;
        const auto a = detect_frontiers(belief, robot, radius);
        const auto b = detect_frontiers(belief, robot, radius);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            REQUIRE(a[i].cell == b[i].cell);
            REQUIRE(a[i].distance_m == b[i].distance_m);
        }

        REQUIRE(a.size() <= 5);
        for (std::size_t i = 0; i < a.size(); ++i) {
            REQUIRE(a[i].distance_m >= 0.5);
            if (i > 0) {
                REQUIRE(a[i].distance_m >= a[i - 1].distance_m);
            }
            REQUIRE(is_frontier_cell(belief, a[i].cell));
        }
        if (!a.empty()) {
            ++non_empty;
        }
    }
    CHECK(non_empty > 20);
}
