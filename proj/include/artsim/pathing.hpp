#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "artsim/gridworld.hpp"

namespace artsim {

enum class MaskMode { Traversal, Signal };

// Boolean passability raster derived from a ground-truth or belief grid.
// The signal mask is always a superset of the traversal mask.
class GridMask {
public:
    static GridMask traversal(const OccupancyGrid& grid);
    static GridMask signal(const OccupancyGrid& grid);
    static GridMask from(const OccupancyGrid& grid, MaskMode mode);
    // Unknown cells count as passable: motion planning is optimistic and
    // re-plans on discovery.
    static GridMask belief_traversal(const BeliefGrid& belief);
    // Known-Free cells only; used by the frontier wave.
    static GridMask belief_known_free(const BeliefGrid& belief);

    int width() const { return width_; }
    int height() const { return height_; }
    double resolution() const { return resolution_; }
    bool in_bounds(CellIndex c) const {
        return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
    }
    std::size_t index(CellIndex c) const {
        return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) + c.x;
    }
    bool passable(CellIndex c) const { return passable_[index(c)] != 0; }

    CellIndex cell_of(const Pose& p) const;
    Pose center_of(CellIndex c) const;

private:
    GridMask(int width, int height, double resolution)
        : width_(width), height_(height), resolution_(resolution),
          passable_(static_cast<std::size_t>(width) * height, 0) {}

    int width_;
    int height_;
    double resolution_;
    std::vector<std::uint8_t> passable_;
};

// Octile path cost kept as exact step counts so equal-length paths compare
// identically no matter the order the steps were accumulated in.
struct StepCost {
    int cardinal = 0;
    int diagonal = 0;

    double value() const;
    double meters(double resolution) const { return value() * resolution; }

    friend bool operator==(const StepCost& a, const StepCost& b) {
        return a.cardinal == b.cardinal && a.diagonal == b.diagonal;
    }
    friend bool operator<(const StepCost& a, const StepCost& b) {
        return a.value() < b.value();
    }
};

struct PathResult {
    std::vector<CellIndex> cells;  // from-cell first, to-cell last
    StepCost steps;
    double length_m = 0.0;
};

// Optimal 8-connected path under unit/sqrt(2) step costs with no corner
// cutting (a diagonal step needs both adjacent cardinal cells passable).
// Returns std::nullopt when the goal is unreachable. Throws
// std::domain_error when the from-cell is impassable or the goal is out of
// bounds.
std::optional<PathResult> astar(const GridMask& mask, const Pose& from, const Pose& to);

// A* length over the signal mask; the d that feeds the path-loss law.
// Unreachable pairs (or endpoints inside sealed rock) yield std::nullopt.
std::optional<double> signal_path_distance(const OccupancyGrid& grid, const Pose& a,
                                           const Pose& b);

// Single-source shortest paths (uniform-cost wave) over a mask, same motion
// rules as astar.
class DistanceField {
public:
    DistanceField(const GridMask& mask, CellIndex source);

    bool reached(CellIndex c) const { return reached_[index(c)] != 0; }
    StepCost steps(CellIndex c) const { return steps_[index(c)]; }
    double meters(CellIndex c) const {
        return reached(c) ? steps_[index(c)].meters(resolution_)
                          : std::numeric_limits<double>::infinity();
    }
    std::size_t reached_count() const { return reached_count_; }

private:
    std::size_t index(CellIndex c) const {
        return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) + c.x;
    }
    int width_;
    double resolution_;
    std::vector<StepCost> steps_;
    std::vector<std::uint8_t> reached_;
    std::size_t reached_count_ = 0;
};

}  // namespace artsim
