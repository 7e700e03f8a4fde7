#include "doctest.h"

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "artsim/gridworld.hpp"
#include "artsim/pathing.hpp"
#include "oracles.hpp"

using namespace artsim;

TEST_CASE("grid construction and invariants") {
    CHECK_THROWS_AS(OccupancyGrid(0, 5, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(OccupancyGrid(5, 5, 0.0), std::invalid_argument);

    OccupancyGrid grid(8, 6, 0.5);
    CHECK(grid.width_m() == doctest::Approx(4.0));
    CHECK(grid.height_m() == doctest::Approx(3.0));
    CHECK_NOTHROW(grid.validate());  // all obstacles is a valid closed world

    grid.at({3, 3}) = {true, true};
    CHECK_NOTHROW(grid.validate());
    grid.at({3, 3}) = {true, false};  // traversable must imply rf_transparent
    CHECK_THROWS_AS(grid.validate(), std::invalid_argument);
    grid.at({3, 3}) = {false, false};
    grid.at({0, 2}) = {true, true};  // border must stay closed
    CHECK_THROWS_AS(grid.validate(), std::invalid_argument);

    CHECK(grid.cell_of({1.1, 2.4}) == CellIndex{2, 4});
    const Pose c = grid.center_of({2, 4});
    CHECK(c.x == doctest::Approx(1.25));
    CHECK(c.y == doctest::Approx(2.25));
}

TEST_CASE("default environments generate and validate") {
    for (EnvKind kind : {EnvKind::Tunnel, EnvKind::Window, EnvKind::YJunction}) {
        const Environment env = generate_environment(default_spec(kind), 0.25);
        CHECK_NOTHROW(env.grid.validate());
        const CellIndex start = env.grid.cell_of(env.start);
        CHECK(env.grid.at(start).traversable);
        REQUIRE(env.events.size() == 1);
        CHECK(env.grid.at(env.grid.cell_of(env.events[0].location)).traversable);
        CHECK(env.name == env_name(kind));
    }
}

TEST_CASE("degenerate geometry is rejected") {
    EnvironmentSpec spec = default_tunnel_spec();
    spec.corridor_width_m = 0.1;  // narrower than one 0.25 m cell
    CHECK_THROWS_AS(generate_environment(spec, 0.25), std::invalid_argument);

    spec = default_tunnel_spec();
    CHECK_THROWS_AS(generate_environment(spec, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(generate_environment(spec, -0.25), std::invalid_argument);
}

TEST_CASE("tunnel raster matches the capsule footprint oracle") {
    const double res = 0.25;
    const EnvironmentSpec spec = default_tunnel_spec();
    const Environment env = generate_environment(spec, res);
    const OccupancyGrid& grid = env.grid;

    // Independent footprint check: a cell is corridor iff its center lies
    // within half-width of one of the three hairpin centerlines.
    const double half = spec.corridor_width_m / 2.0;
    const double w = spec.width_m, h = spec.height_m;
    struct Seg {
        double ax, ay, bx, by;
    };
    const Seg segs[3] = {{2.5, 2.5, w - 2.5, 2.5},
                         {w - 2.5, 2.5, w - 2.5, h - 2.5},
                         {w - 2.5, h - 2.5, 2.5, h - 2.5}};
    auto seg_dist = [](double px, double py, const Seg& s) {
        const double vx = s.bx - s.ax, vy = s.by - s.ay;
        const double len_sq = vx * vx + vy * vy;
        double t = ((px - s.ax) * vx + (py - s.ay) * vy) / len_sq;
        t = std::clamp(t, 0.0, 1.0);
        return std::hypot(px - (s.ax + t * vx), py - (s.ay + t * vy));
    };

    std::size_t corridor_cells = 0;
    for (int y = 0; y < grid.height(); ++y) {
        for (int x = 0; x < grid.width(); ++x) {
            const Pose c = grid.center_of({x, y});
            bool inside = false;
            for (const Seg& s : segs) {
                if (seg_dist(c.x, c.y, s) <= half) {
                    inside = true;
                    break;
                }
            }
            const bool border = x == 0 || y == 0 || x == grid.width() - 1 || y == grid.height() - 1;
            const Cell& cell = grid.at({x, y});
            REQUIRE(cell.traversable == (inside && !border));
            REQUIRE(cell.rf_transparent == cell.traversable);  // no windows in the tunnel
            if (cell.traversable) {
                ++corridor_cells;
            }
        }
    }
    CHECK(corridor_cells > 0);
}

TEST_CASE("window opening cells are rf-transparent only") {
    EnvironmentSpec spec = default_window_spec();
    spec.opening_width_m = 0.25;  // exactly one cell across
    const Environment env = generate_environment(spec, 0.25);

    std::size_t opening_cells = 0;
    std::set<int> opening_columns;
    for (int y = 0; y < env.grid.height(); ++y) {
        for (int x = 0; x < env.grid.width(); ++x) {
            const Cell& c = env.grid.at({x, y});
            if (c.rf_transparent && !c.traversable) {
                ++opening_cells;
                opening_columns.insert(x);
            }
        }
    }
    CHECK(opening_cells > 0);
    CHECK(opening_columns.size() == 1);  // one cell wide
}

TEST_CASE("window duality: signal crosses the wall, traversal goes around") {
    const Environment env = generate_environment(default_window_spec(), 0.25);
    const GridMask signal = GridMask::signal(env.grid);
    const GridMask traversal = GridMask::traversal(env.grid);

    // Poses facing each other across the opening at x = 12.
    const Pose a{12.0, 5.0};
    const Pose b{12.0, 9.0};
    const auto sig = oracles::dijkstra_cost(signal, signal.cell_of(a), signal.cell_of(b));
    const auto trav = oracles::dijkstra_cost(traversal, traversal.cell_of(a), traversal.cell_of(b));
    REQUIRE(sig.has_value());
    REQUIRE(trav.has_value());
    const double sig_m = sig->value() * 0.25;
    const double trav_m = trav->value() * 0.25;
    // Signal distance tracks the Euclidean hop through the opening.
    CHECK(sig_m == doctest::Approx(4.0).epsilon(0.15));
    CHECK(sig_m < 0.5 * trav_m);
}

TEST_CASE("reveal fully opens a small room") {
    OccupancyGrid grid(12, 12, 0.25);
    for (int y = 1; y < 11; ++y) {
        for (int x = 1; x < 11; ++x) {
            grid.at({x, y}) = {true, true};
        }
    }
    BeliefGrid belief(grid);
    reveal(belief, grid, grid.center_of({5, 5}), 10.0);
    CHECK(belief.unknown_count() == 0);
}

TEST_CASE("reveal stops at walls") {
    // A corridor along y = 1 with a wall column two cells ahead of the pose.
    OccupancyGrid grid(16, 5, 0.25);
    for (int x = 1; x < 15; ++x) {
        for (int y = 1; y < 4; ++y) {
            grid.at({x, y}) = {true, true};
        }
    }
    for (int y = 1; y < 4; ++y) {
        grid.at({8, y}) = {false, false};  // wall
    }
    BeliefGrid belief(grid);
    const Pose pose = grid.center_of({6, 2});
    reveal(belief, grid, pose, 10.0);

    // Wall cell straight ahead becomes Obstacle; cells behind it stay Unknown.
    CHECK(belief.at({8, 2}) == Knowledge::Obstacle);
    CHECK(belief.at({10, 2}) == Knowledge::Unknown);
    CHECK(belief.at({12, 2}) == Knowledge::Unknown);
    CHECK(belief.at({7, 2}) == Knowledge::Free);

    // Independent ray oracle for the same scene: cells on the pose row are
    // visible iff they sit before the wall.
    for (int x = 1; x < 8; ++x) {
        REQUIRE(belief.at({x, 2}) == (grid.at({x, 2}).traversable ? Knowledge::Free
                                                                  : Knowledge::Obstacle));
    }
    for (int x = 9; x < 15; ++x) {
        REQUIRE(belief.at({x, 2}) == Knowledge::Unknown);
    }
}

TEST_CASE("reveal through a window shows the far side") {
    const Environment env = generate_environment(default_window_spec(), 0.25);
    BeliefGrid belief(env.grid);
    // Standing in the near corridor, straight under the opening at x = 12.
    reveal(belief, env.grid, {12.0, 5.0}, 5.0);
    // A far-corridor cell straight across the opening is revealed Free.
    const CellIndex far = env.grid.cell_of({12.0, 9.0});
    CHECK(belief.at(far) == Knowledge::Free);
    // A far-corridor cell at similar range but off the opening stays Unknown.
    const CellIndex blocked = env.grid.cell_of({9.5, 9.0});
    CHECK(belief.at(blocked) == Knowledge::Unknown);
}

TEST_CASE("reveal with zero range marks only the pose cell") {
    OccupancyGrid grid(10, 10, 0.25);
    for (int y = 1; y < 9; ++y) {
        for (int x = 1; x < 9; ++x) {
            grid.at({x, y}) = {true, true};
        }
    }
    BeliefGrid belief(grid);
    reveal(belief, grid, grid.center_of({4, 4}), 0.0);
    CHECK(belief.unknown_count() == grid.size() - 1);
    CHECK(belief.at({4, 4}) == Knowledge::Free);
}

TEST_CASE("belief soundness and monotone knowledge on random walks") {
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 20; ++round) {
        const OccupancyGrid grid = oracles::random_grid(rng, 30, 30, 0.25, 0.25, 0.05);
        BeliefGrid belief(grid);
        const GridMask mask = GridMask::traversal(grid);
        CellIndex cur = oracles::random_passable_cell(rng, mask);
        std::size_t prev_unknown = belief.unknown_count();
        std::uniform_int_distribution<int> dir(0, 7);
        const int dxs[8] = {1, -1, 0, 0, 1, 1, -1, -1};
        const int dys[8] = {0, 0, 1, -1, 1, -1, 1, -1};
        for (int step = 0; step < 120; ++step) {
            const int k = dir(rng);
            const CellIndex nxt{cur.x + dxs[k], cur.y + dys[k]};
            if (mask.in_bounds(nxt) && mask.passable(nxt)) {
                cur = nxt;
            }
            reveal(belief, grid, grid.center_of(cur), 3.0);
            REQUIRE(belief.unknown_count() <= prev_unknown);
            prev_unknown = belief.unknown_count();
        }
        for (int y = 0; y < grid.height(); ++y) {
            for (int x = 0; x < grid.width(); ++x) {
                const Knowledge k = belief.at({x, y});
                if (k == Knowledge::Unknown) {
                    continue;
                }
                REQUIRE((k == Knowledge::Free) == grid.at({x, y}).traversable);
            }
        }
    }
}

TEST_CASE("pgm export") {
    OccupancyGrid grid(3, 3, 0.25);
    grid.at({1, 1}) = {true, true};
    // P2, top row first; the single interior cell is traversable.
    CHECK(to_pgm(grid) == "P2\n3 3\n255\n0 0 0\n0 255 0\n0 0 0\n");

    EnvironmentSpec wspec = default_window_spec();
    const Environment env = generate_environment(wspec, 0.25);
    const std::string pgm = to_pgm(env.grid);
    CHECK(pgm.find("128") != std::string::npos);  // opening cells present

    BeliefGrid belief(grid);
    CHECK(to_pgm(belief) == "P2\n3 3\n255\n64 64 64\n64 64 64\n64 64 64\n");
    reveal(belief, grid, grid.center_of({1, 1}), 5.0);
    const std::string bpgm = to_pgm(belief);
    CHECK(bpgm.find("255") != std::string::npos);
    CHECK(bpgm.find('0') != std::string::npos);
}
