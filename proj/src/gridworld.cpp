#include "artsim/gridworld.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace artsim {

namespace {

int floor_cell(double coord, double resolution) {
    return static_cast<int>(std::floor(coord / resolution));
}

}  // namespace

OccupancyGrid::OccupancyGrid(int width, int height, double resolution_m)
    : width_(width), height_(height), resolution_(resolution_m) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("grid dimensions must be at least 1x1");
    }
    if (!(resolution_m > 0.0)) {
        throw std::invalid_argument("grid resolution must be positive");
    }
    cells_.assign(static_cast<std::size_t>(width) * height, Cell{});
}

CellIndex OccupancyGrid::cell_of(const Pose& p) const {
    return {floor_cell(p.x, resolution_), floor_cell(p.y, resolution_)};
}

Pose OccupancyGrid::center_of(CellIndex c) const {
    return {(c.x + 0.5) * resolution_, (c.y + 0.5) * resolution_};
}

bool OccupancyGrid::pose_in_bounds(const Pose& p) const {
    return in_bounds(cell_of(p));
}

void OccupancyGrid::validate() const {
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            const Cell& c = at({x, y});
            if (c.traversable && !c.rf_transparent) {
                throw std::invalid_argument("traversable cell must be rf_transparent");
            }
            const bool border = x == 0 || y == 0 || x == width_ - 1 || y == height_ - 1;
            if (border && (c.traversable || c.rf_transparent)) {
                throw std::invalid_argument("border cells must be obstacles");
            }
        }
    }
}

BeliefGrid::BeliefGrid(const OccupancyGrid& truth)
    : width_(truth.width()),
      height_(truth.height()),
      resolution_(truth.resolution()),
      cells_(truth.size(), Knowledge::Unknown),
      unknown_count_(truth.size()) {}

void BeliefGrid::set_known(CellIndex c, Knowledge k) {
    Knowledge& slot = cells_[index(c)];
    if (slot == Knowledge::Unknown && k != Knowledge::Unknown) {
        --unknown_count_;
    }
    slot = k;
}

CellIndex BeliefGrid::cell_of(const Pose& p) const {
    return {floor_cell(p.x, resolution_), floor_cell(p.y, resolution_)};
}

Pose BeliefGrid::center_of(CellIndex c) const {
    return {(c.x + 0.5) * resolution_, (c.y + 0.5) * resolution_};
}

namespace {

// Amanatides & Woo grid traversal from a continuous point to a target cell
// center. Calls visit(cell) for every cell on the ray including endpoints;
// visit returns false to stop the walk.
template <typename Visit>
void walk_ray(const OccupancyGrid& grid, const Pose& from, CellIndex target, Visit visit) {
    const double res = grid.resolution();
    CellIndex cur = grid.cell_of(from);
    const Pose to = grid.center_of(target);

    if (!visit(cur) || cur == target) {
        return;
    }

    const double dx = to.x - from.x;
    const double dy = to.y - from.y;
    const int step_x = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
    const int step_y = dy > 0 ? 1 : (dy < 0 ? -1 : 0);

    const double inf = std::numeric_limits<double>::infinity();
    // Ray parameter t in [0,1]; t_max_* is the t of the next grid line crossing.
    double t_max_x = inf, t_delta_x = inf;
    double t_max_y = inf, t_delta_y = inf;
    if (step_x != 0) {
        const double edge = (cur.x + (step_x > 0 ? 1 : 0)) * res;
        t_max_x = (edge - from.x) / dx;
        t_delta_x = res / std::abs(dx);
    }
    if (step_y != 0) {
        const double edge = (cur.y + (step_y > 0 ? 1 : 0)) * res;
        t_max_y = (edge - from.y) / dy;
        t_delta_y = res / std::abs(dy);
    }

    // Bounded even if floating point ties misbehave.
    int guard = std::abs(target.x - cur.x) + std::abs(target.y - cur.y) + 4;
    while (guard-- > 0) {
        if (t_max_x <= t_max_y) {
            cur.x += step_x;
            t_max_x += t_delta_x;
        } else {
            cur.y += step_y;
            t_max_y += t_delta_y;
        }
        if (!grid.in_bounds(cur) || !visit(cur) || cur == target) {
            return;
        }
    }
}

}  // namespace

bool ray_reaches(const OccupancyGrid& truth, const Pose& from, CellIndex target) {
    bool reached = false;
    walk_ray(truth, from, target, [&](CellIndex c) {
        if (c == target) {
            reached = true;
            return false;
        }
        return truth.at(c).rf_transparent;
    });
    return reached;
}

void reveal(BeliefGrid& belief, const OccupancyGrid& truth, const Pose& pose,
            double sensor_range_m) {
    const CellIndex pc = truth.cell_of(pose);
    if (!truth.in_bounds(pc)) {
        throw std::invalid_argument("reveal: pose out of bounds");
    }
    auto true_state = [&](CellIndex c) {
        return truth.at(c).traversable ? Knowledge::Free : Knowledge::Obstacle;
    };
    // Observing a free cell observes the wall surface bounding it. Without
    // this closure, obstacle cells tucked behind diagonal corners can never
    // be revealed and keep their free neighbors frontier cells forever.
    auto mark = [&](CellIndex c) {
        const Knowledge state = true_state(c);
        belief.set_known(c, state);
        if (state != Knowledge::Free) {
            return;
        }
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const CellIndex n{c.x + dx, c.y + dy};
                if (truth.in_bounds(n) && belief.at(n) == Knowledge::Unknown &&
                    !truth.at(n).traversable) {
                    belief.set_known(n, Knowledge::Obstacle);
                }
            }
        }
    };
    if (!(sensor_range_m > 0.0)) {
        belief.set_known(pc, true_state(pc));
        return;
    }
    mark(pc);

    const double res = truth.resolution();
    const int reach = static_cast<int>(std::ceil(sensor_range_m / res)) + 1;
    const int x0 = std::max(0, pc.x - reach);
    const int x1 = std::min(truth.width() - 1, pc.x + reach);
    const int y0 = std::max(0, pc.y - reach);
    const int y1 = std::min(truth.height() - 1, pc.y + reach);
    const double range_sq = sensor_range_m * sensor_range_m;

    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const CellIndex c{x, y};
            if (belief.at(c) != Knowledge::Unknown) {
                continue;  // already matches the truth; rays cannot change it
            }
            const Pose center = truth.center_of(c);
            const double ddx = center.x - pose.x;
            const double ddy = center.y - pose.y;
            if (ddx * ddx + ddy * ddy > range_sq) {
                continue;
            }
            if (ray_reaches(truth, pose, c)) {
                mark(c);
            }
        }
    }
}

// ---------------------------------------------------------------------------

const char* env_name(EnvKind kind) {
    switch (kind) {
        case EnvKind::Tunnel: return "tunnel";
        case EnvKind::Window: return "window";
        case EnvKind::YJunction: return "yjunction";
    }
    return "unknown";
}

EnvKind env_from_name(const std::string& name) {
    if (name == "tunnel") return EnvKind::Tunnel;
    if (name == "window") return EnvKind::Window;
    if (name == "yjunction") return EnvKind::YJunction;
    throw std::invalid_argument("unknown environment name: " + name);
}

EnvironmentSpec default_tunnel_spec() {
    EnvironmentSpec spec;
    spec.kind = EnvKind::Tunnel;
    spec.width_m = 60.0;
    spec.height_m = 30.0;
    spec.corridor_width_m = 2.0;
    spec.start = {2.5, 2.5};
    // Far end of the return leg: a few meters from the entrance in a straight
    // line but the full hairpin away by any traversal or signal path.
    spec.events = {{{3.0, 27.5}, 0}};
    return spec;
}

EnvironmentSpec default_window_spec() {
    EnvironmentSpec spec;
    spec.kind = EnvKind::Window;
    spec.width_m = 40.0;
    spec.height_m = 20.0;
    spec.corridor_width_m = 2.0;
    spec.opening_width_m = 1.0;
    spec.start = {2.5, 5.0};
    // Deep in the far corridor, on the other side of the opening.
    spec.events = {{{4.5, 9.0}, 0}};
    return spec;
}

EnvironmentSpec default_yjunction_spec() {
    EnvironmentSpec spec;
    spec.kind = EnvKind::YJunction;
    spec.width_m = 40.0;
    spec.height_m = 40.0;
    spec.corridor_width_m = 2.0;
    spec.start = {20.0, 2.5};
    // Near the end of the left branch.
    spec.events = {{{4.0, 29.25}, 0}};
    return spec;
}

EnvironmentSpec default_spec(EnvKind kind) {
    switch (kind) {
        case EnvKind::Tunnel: return default_tunnel_spec();
        case EnvKind::Window: return default_window_spec();
        case EnvKind::YJunction: return default_yjunction_spec();
    }
    throw std::invalid_argument("unknown environment kind");
}

namespace {

struct Segment {
    Pose a;
    Pose b;
};

double dist_point_segment(const Pose& p, const Segment& s) {
    const double vx = s.b.x - s.a.x;
    const double vy = s.b.y - s.a.y;
    const double wx = p.x - s.a.x;
    const double wy = p.y - s.a.y;
    const double len_sq = vx * vx + vy * vy;
    double t = len_sq > 0.0 ? (wx * vx + wy * vy) / len_sq : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = wx - t * vx;
    const double dy = wy - t * vy;
    return std::hypot(dx, dy);
}

// Carves every non-border cell whose center lies within half_width of a
// segment (a capsule footprint).
void carve(OccupancyGrid& grid, const std::vector<Segment>& segments, double half_width) {
    for (int y = 1; y < grid.height() - 1; ++y) {
        for (int x = 1; x < grid.width() - 1; ++x) {
            const Pose c = grid.center_of({x, y});
            for (const Segment& s : segments) {
                if (dist_point_segment(c, s) <= half_width) {
                    grid.at({x, y}) = Cell{true, true};
                    break;
                }
            }
        }
    }
}

std::vector<Segment> layout_segments(const EnvironmentSpec& spec) {
    const double w = spec.width_m;
    const double h = spec.height_m;
    switch (spec.kind) {
        case EnvKind::Tunnel: {
            // Hairpin: out along the bottom, across the right side, back
            // along the top. Entrance and exit share the left edge.
            const Pose entrance{2.5, 2.5};
            const Pose lower_right{w - 2.5, 2.5};
            const Pose upper_right{w - 2.5, h - 2.5};
            const Pose exit{2.5, h - 2.5};
            return {{entrance, lower_right}, {lower_right, upper_right}, {upper_right, exit}};
        }
        case EnvKind::Window: {
            // Two parallel corridors joined at the right end; the separating
            // wall carries the opening (handled by the caller).
            const double ya = 5.0;
            const double yb = 9.0;
            return {{{2.5, ya}, {w - 2.5, ya}},
                    {{2.5, yb}, {w - 2.5, yb}},
                    {{w - 2.5, ya}, {w - 2.5, yb}}};
        }
        case EnvKind::YJunction: {
            const Pose base{w / 2.0, 2.5};
            const Pose junction{w / 2.0, h / 2.0};
            const double branch_len = 20.0;
            const double sin60 = std::sqrt(3.0) / 2.0;
            const double cos60 = 0.5;
            const Pose left_end{junction.x - branch_len * sin60, junction.y + branch_len * cos60};
            const Pose right_end{junction.x + branch_len * sin60, junction.y + branch_len * cos60};
            return {{base, junction}, {junction, left_end}, {junction, right_end}};
        }
    }
    throw std::invalid_argument("unknown environment kind");
}

// The window opening: rf-transparent, non-traversable cells punched into the
// wall band between the two corridors.
void punch_window(OccupancyGrid& grid, const EnvironmentSpec& spec) {
    const double window_x = 12.0;
    const double x_lo = window_x - spec.opening_width_m / 2.0;
    const double x_hi = window_x + spec.opening_width_m / 2.0;
    const double y_lo = 5.0;  // wall band sits between the corridor centerlines
    const double y_hi = 9.0;
    for (int y = 1; y < grid.height() - 1; ++y) {
        for (int x = 1; x < grid.width() - 1; ++x) {
            Cell& cell = grid.at({x, y});
            if (cell.traversable) {
                continue;
            }
            const Pose c = grid.center_of({x, y});
            if (c.x >= x_lo && c.x < x_hi && c.y >= y_lo && c.y < y_hi) {
                cell.rf_transparent = true;
            }
        }
    }
}

}  // namespace

Environment generate_environment(const EnvironmentSpec& spec, double resolution_m) {
    if (!(resolution_m > 0.0)) {
        throw std::invalid_argument("resolution must be positive");
    }
    if (spec.width_m <= 0.0 || spec.height_m <= 0.0 || spec.corridor_width_m <= 0.0) {
        throw std::invalid_argument("environment dimensions must be positive");
    }
    if (spec.corridor_width_m < resolution_m) {
        throw std::invalid_argument("corridor narrower than one cell");
    }
    if (spec.kind == EnvKind::Window && spec.opening_width_m < resolution_m) {
        throw std::invalid_argument("window opening narrower than one cell");
    }

    const int width = static_cast<int>(std::lround(spec.width_m / resolution_m));
    const int height = static_cast<int>(std::lround(spec.height_m / resolution_m));
    OccupancyGrid grid(width, height, resolution_m);

    carve(grid, layout_segments(spec), spec.corridor_width_m / 2.0);
    if (spec.kind == EnvKind::Window) {
        punch_window(grid, spec);
    }
    grid.validate();

    if (!grid.in_bounds(grid.cell_of(spec.start)) || !grid.at(grid.cell_of(spec.start)).traversable) {
        throw std::invalid_argument("start pose is not on a traversable cell");
    }
    for (const TxEvent& e : spec.events) {
        if (!grid.in_bounds(grid.cell_of(e.location)) ||
            !grid.at(grid.cell_of(e.location)).traversable) {
            throw std::invalid_argument("event location is not on a traversable cell");
        }
        if (e.level < 0 || e.level > 3) {
            throw std::invalid_argument("event level must be in 0..3");
        }
    }

    return Environment{std::move(grid), spec.events, spec.start, env_name(spec.kind)};
}

// ---------------------------------------------------------------------------

namespace {

std::string pgm_header(int width, int height) {
    std::ostringstream os;
    os << "P2\n" << width << " " << height << "\n255\n";
    return os.str();
}

}  // namespace

std::string to_pgm(const OccupancyGrid& grid) {
    std::ostringstream os;
    os << pgm_header(grid.width(), grid.height());
    for (int y = grid.height() - 1; y >= 0; --y) {
        for (int x = 0; x < grid.width(); ++x) {
            const Cell& c = grid.at({x, y});
            const int v = c.traversable ? 255 : (c.rf_transparent ? 128 : 0);
            os << v << (x + 1 < grid.width() ? ' ' : '\n');
        }
    }
    return os.str();
}

std::string to_pgm(const BeliefGrid& belief) {
    std::ostringstream os;
    os << pgm_header(belief.width(), belief.height());
    for (int y = belief.height() - 1; y >= 0; --y) {
        for (int x = 0; x < belief.width(); ++x) {
            int v = 64;
            switch (belief.at({x, y})) {
                case Knowledge::Unknown: v = 64; break;
                case Knowledge::Free: v = 255; break;
                case Knowledge::Obstacle: v = 0; break;
            }
            os << v << (x + 1 < belief.width() ? ' ' : '\n');
        }
    }
    return os.str();
}

}  // namespace artsim
