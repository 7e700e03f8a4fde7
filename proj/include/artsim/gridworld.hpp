#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace artsim {

// Continuous position in meters. (0,0) is the lower-left map corner.
struct Pose {
    double x = 0.0;
    double y = 0.0;
};

// Column/row address of a grid cell; row 0 is the bottom row.
struct CellIndex {
    int x = 0;
    int y = 0;

    friend bool operator==(const CellIndex& a, const CellIndex& b) {
        return a.x == b.x && a.y == b.y;
    }
    friend bool operator!=(const CellIndex& a, const CellIndex& b) { return !(a == b); }
};

// A traversable cell always passes signal too; pure obstacles pass neither.
// Window/skylight cells are the rf_transparent && !traversable combination.
struct Cell {
    bool traversable = false;
    bool rf_transparent = false;
};

class OccupancyGrid {
public:
    OccupancyGrid(int width, int height, double resolution_m);

    int width() const { return width_; }
    int height() const { return height_; }
    double resolution() const { return resolution_; }
    std::size_t size() const { return cells_.size(); }

    bool in_bounds(CellIndex c) const {
        return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
    }
    std::size_t index(CellIndex c) const {
        return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) + c.x;
    }
    Cell& at(CellIndex c) { return cells_[index(c)]; }
    const Cell& at(CellIndex c) const { return cells_[index(c)]; }

    CellIndex cell_of(const Pose& p) const;
    Pose center_of(CellIndex c) const;
    bool pose_in_bounds(const Pose& p) const;

    double width_m() const { return width_ * resolution_; }
    double height_m() const { return height_ * resolution_; }

    // Throws std::invalid_argument on any violated invariant: positive dims,
    // obstacle border, traversable => rf_transparent.
    void validate() const;

private:
    int width_;
    int height_;
    double resolution_;
    std::vector<Cell> cells_;
};

enum class Knowledge : std::uint8_t { Unknown = 0, Free = 1, Obstacle = 2 };

// Per-agent map estimate. Cells only ever move away from Unknown, and a
// known cell always matches the ground truth (sensing is noiseless).
class BeliefGrid {
public:
    explicit BeliefGrid(const OccupancyGrid& truth);

    int width() const { return width_; }
    int height() const { return height_; }
    double resolution() const { return resolution_; }

    bool in_bounds(CellIndex c) const {
        return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
    }
    std::size_t index(CellIndex c) const {
        return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) + c.x;
    }
    Knowledge at(CellIndex c) const { return cells_[index(c)]; }
    void set_known(CellIndex c, Knowledge k);

    CellIndex cell_of(const Pose& p) const;
    Pose center_of(CellIndex c) const;

    std::size_t unknown_count() const { return unknown_count_; }

private:
    int width_;
    int height_;
    double resolution_;
    std::vector<Knowledge> cells_;
    std::size_t unknown_count_;
};

// True when the straight ray from `from` to the center of `target` crosses
// no blocking (non-rf_transparent) cell before reaching `target` itself.
bool ray_reaches(const OccupancyGrid& truth, const Pose& from, CellIndex target);

// Marks every cell whose center lies within sensor_range_m of `pose` and is
// visible along an unobstructed ray with its true state. The first blocking
// cell on a ray becomes known Obstacle; cells behind it stay Unknown. The
// pose's own cell is always revealed. Obstacle cells bordering an observed
// free cell become known Obstacle with it (seeing free space means seeing
// the wall surface around it); without that closure, rock tucked behind
// diagonal corners would stay Unknown forever and pin frontier cells open.
void reveal(BeliefGrid& belief, const OccupancyGrid& truth, const Pose& pose,
            double sensor_range_m);

// ---------------------------------------------------------------------------
// Benchmark environments

enum class EnvKind { Tunnel, Window, YJunction };

const char* env_name(EnvKind kind);
EnvKind env_from_name(const std::string& name);

// A feature location that forces the Scout to transmit a payload of the
// given importance level once discovered.
struct TxEvent {
    Pose location;
    int level = 0;
};

struct EnvironmentSpec {
    EnvKind kind = EnvKind::Tunnel;
    double width_m = 60.0;
    double height_m = 30.0;
    double corridor_width_m = 2.0;
    // Window environment only: opening width along the wall, in meters.
    double opening_width_m = 1.0;
    Pose start;
    std::vector<TxEvent> events;
};

struct Environment {
    OccupancyGrid grid;
    std::vector<TxEvent> events;
    Pose start;
    std::string name;
};

// Desk-scale defaults: Tunnel 60x30 m U-shape, Window 40x20 m twin
// corridors, YJunction 40x40 m stem with 120 degree branches.
EnvironmentSpec default_tunnel_spec();
EnvironmentSpec default_window_spec();
EnvironmentSpec default_yjunction_spec();
EnvironmentSpec default_spec(EnvKind kind);

// Rasterizes the spec. Throws std::invalid_argument on degenerate geometry
// (corridor narrower than one cell, non-traversable start or event cell).
Environment generate_environment(const EnvironmentSpec& spec, double resolution_m);

// ---------------------------------------------------------------------------
// Map export (plain-text PGM, P2)

// Ground truth: 0 = obstacle, 128 = rf_transparent only, 255 = traversable.
std::string to_pgm(const OccupancyGrid& grid);
// Belief: 0 = obstacle, 64 = unknown, 255 = free.
std::string to_pgm(const BeliefGrid& belief);

}  // namespace artsim
