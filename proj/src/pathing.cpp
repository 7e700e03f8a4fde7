#include "artsim/pathing.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace artsim {

namespace {

const double kSqrt2 = std::sqrt(2.0);

// Fixed neighbor order keeps expansions, and therefore tie outcomes,
// deterministic. Cardinals first.
struct Move {
    int dx;
    int dy;
    bool diagonal;
};
constexpr Move kMoves[8] = {
    {1, 0, false}, {-1, 0, false}, {0, 1, false},  {0, -1, false},
    {1, 1, true},  {1, -1, true},  {-1, 1, true},  {-1, -1, true},
};

}  // namespace

double StepCost::value() const { return cardinal + diagonal * kSqrt2; }

GridMask GridMask::traversal(const OccupancyGrid& grid) {
    GridMask m(grid.width(), grid.height(), grid.resolution());
    for (int y = 0; y < grid.height(); ++y) {
        for (int x = 0; x < grid.width(); ++x) {
            m.passable_[m.index({x, y})] = grid.at({x, y}).traversable ? 1 : 0;
        }
    }
    return m;
}

GridMask GridMask::signal(const OccupancyGrid& grid) {
    GridMask m(grid.width(), grid.height(), grid.resolution());
    for (int y = 0; y < grid.height(); ++y) {
        for (int x = 0; x < grid.width(); ++x) {
            m.passable_[m.index({x, y})] = grid.at({x, y}).rf_transparent ? 1 : 0;
        }
    }
    return m;
}

GridMask GridMask::from(const OccupancyGrid& grid, MaskMode mode) {
    return mode == MaskMode::Traversal ? traversal(grid) : signal(grid);
}

GridMask GridMask::belief_traversal(const BeliefGrid& belief) {
    GridMask m(belief.width(), belief.height(), belief.resolution());
    for (int y = 0; y < belief.height(); ++y) {
        for (int x = 0; x < belief.width(); ++x) {
            m.passable_[m.index({x, y})] = belief.at({x, y}) != Knowledge::Obstacle ? 1 : 0;
        }
    }
    return m;
}

GridMask GridMask::belief_known_free(const BeliefGrid& belief) {
    GridMask m(belief.width(), belief.height(), belief.resolution());
    for (int y = 0; y < belief.height(); ++y) {
        for (int x = 0; x < belief.width(); ++x) {
            m.passable_[m.index({x, y})] = belief.at({x, y}) == Knowledge::Free ? 1 : 0;
        }
    }
    return m;
}

CellIndex GridMask::cell_of(const Pose& p) const {
    return {static_cast<int>(std::floor(p.x / resolution_)),
            static_cast<int>(std::floor(p.y / resolution_))};
}

Pose GridMask::center_of(CellIndex c) const {
    return {(c.x + 0.5) * resolution_, (c.y + 0.5) * resolution_};
}

namespace {

bool step_allowed(const GridMask& mask, CellIndex from, const Move& mv) {
    const CellIndex to{from.x + mv.dx, from.y + mv.dy};
    if (!mask.in_bounds(to) || !mask.passable(to)) {
        return false;
    }
    if (mv.diagonal) {
        // No corner cutting: both side cells must be passable.
        const CellIndex side_a{from.x + mv.dx, from.y};
        const CellIndex side_b{from.x, from.y + mv.dy};
        if (!mask.passable(side_a) || !mask.passable(side_b)) {
            return false;
        }
    }
    return true;
}

struct HeapEntry {
    double f;
    double g;
    std::int32_t cell;

    // Smaller f first; among equals prefer larger g (deeper), then the
    // smaller cell index so ordering is total.
    bool operator>(const HeapEntry& o) const {
        if (f != o.f) return f > o.f;
        if (g != o.g) return g < o.g;
        return cell > o.cell;
    }
};

StepCost octile_heuristic(CellIndex a, CellIndex b) {
    const int dx = std::abs(a.x - b.x);
    const int dy = std::abs(a.y - b.y);
    return StepCost{dx + dy - 2 * std::min(dx, dy), std::min(dx, dy)};
}

}  // namespace

std::optional<PathResult> astar(const GridMask& mask, const Pose& from, const Pose& to) {
    const CellIndex start = mask.cell_of(from);
    const CellIndex goal = mask.cell_of(to);
    if (!mask.in_bounds(start) || !mask.passable(start)) {
        throw std::domain_error("astar: start cell is impassable");
    }
    if (!mask.in_bounds(goal)) {
        throw std::domain_error("astar: goal out of bounds");
    }
    if (!mask.passable(goal)) {
        return std::nullopt;
    }

    const std::size_t n = static_cast<std::size_t>(mask.width()) * mask.height();
    std::vector<StepCost> g(n, StepCost{-1, -1});
    std::vector<std::int32_t> parent(n, -1);
    std::vector<std::uint8_t> closed(n, 0);

    auto idx = [&](CellIndex c) { return mask.index(c); };
    auto cell_at = [&](std::int32_t i) {
        return CellIndex{static_cast<int>(i % mask.width()), static_cast<int>(i / mask.width())};
    };

    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>> open;
    g[idx(start)] = StepCost{0, 0};
    open.push({octile_heuristic(start, goal).value(), 0.0,
               static_cast<std::int32_t>(idx(start))});

    while (!open.empty()) {
        const HeapEntry top = open.top();
        open.pop();
        if (closed[top.cell]) {
            continue;
        }
        closed[top.cell] = 1;
        const CellIndex cur = cell_at(top.cell);
        if (cur == goal) {
            break;
        }
        const StepCost g_cur = g[top.cell];
        for (const Move& mv : kMoves) {
            if (!step_allowed(mask, cur, mv)) {
                continue;
            }
            const CellIndex nxt{cur.x + mv.dx, cur.y + mv.dy};
            const std::size_t ni = idx(nxt);
            if (closed[ni]) {
                continue;
            }
            const StepCost g_new{g_cur.cardinal + (mv.diagonal ? 0 : 1),
                                 g_cur.diagonal + (mv.diagonal ? 1 : 0)};
            if (g[ni].cardinal >= 0 && !(g_new < g[ni])) {
                continue;
            }
            g[ni] = g_new;
            parent[ni] = top.cell;
            const double f = g_new.value() + octile_heuristic(nxt, goal).value();
            open.push({f, g_new.value(), static_cast<std::int32_t>(ni)});
        }
    }

    if (!closed[idx(goal)]) {
        return std::nullopt;
    }

    PathResult result;
    result.steps = g[idx(goal)];
    result.length_m = result.steps.meters(mask.resolution());
    for (std::int32_t i = static_cast<std::int32_t>(idx(goal)); i >= 0; i = parent[i]) {
        result.cells.push_back(cell_at(i));
        if (cell_at(i) == start) {
            break;
        }
    }
    std::reverse(result.cells.begin(), result.cells.end());
    return result;
}

std::optional<double> signal_path_distance(const OccupancyGrid& grid, const Pose& a,
                                           const Pose& b) {
    if (!grid.pose_in_bounds(a) || !grid.pose_in_bounds(b)) {
        throw std::domain_error("signal_path_distance: pose out of bounds");
    }
    const GridMask mask = GridMask::signal(grid);
    const CellIndex ca = mask.cell_of(a);
    const CellIndex cb = mask.cell_of(b);
    if (!mask.passable(ca) || !mask.passable(cb)) {
        return std::nullopt;
    }
    if (ca == cb) {
        return 0.0;
    }
    const auto path = astar(mask, a, b);
    if (!path) {
        return std::nullopt;
    }
    return path->length_m;
}

DistanceField::DistanceField(const GridMask& mask, CellIndex source)
    : width_(mask.width()),
      resolution_(mask.resolution()),
      steps_(static_cast<std::size_t>(mask.width()) * mask.height(), StepCost{-1, -1}),
      reached_(steps_.size(), 0) {
    if (!mask.in_bounds(source) || !mask.passable(source)) {
        return;  // empty field: nothing reachable
    }
    auto cell_at = [&](std::int32_t i) {
        return CellIndex{static_cast<int>(i % width_), static_cast<int>(i / width_)};
    };

    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>> open;
    steps_[index(source)] = StepCost{0, 0};
    open.push({0.0, 0.0, static_cast<std::int32_t>(index(source))});
    while (!open.empty()) {
        const HeapEntry top = open.top();
        open.pop();
        if (reached_[top.cell]) {
            continue;
        }
        reached_[top.cell] = 1;
        ++reached_count_;
        const CellIndex cur = cell_at(top.cell);
        const StepCost g_cur = steps_[top.cell];
        for (const Move& mv : kMoves) {
            if (!step_allowed(mask, cur, mv)) {
                continue;
            }
            const CellIndex nxt{cur.x + mv.dx, cur.y + mv.dy};
            const std::size_t ni = index(nxt);
            if (reached_[ni]) {
                continue;
            }
            const StepCost g_new{g_cur.cardinal + (mv.diagonal ? 0 : 1),
                                 g_cur.diagonal + (mv.diagonal ? 1 : 0)};
            if (steps_[ni].cardinal >= 0 && !(g_new < steps_[ni])) {
                continue;
            }
            steps_[ni] = g_new;
            open.push({g_new.value(), g_new.value(), static_cast<std::int32_t>(ni)});
        }
    }
}

}  // namespace artsim
