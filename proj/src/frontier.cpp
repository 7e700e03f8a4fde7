#include "artsim/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace artsim {

std::vector<CellIndex> frontier_cells(const BeliefGrid& belief) {
    std::vector<CellIndex> cells;
    for (int y = 0; y < belief.height(); ++y) {
        for (int x = 0; x < belief.width(); ++x) {
            if (belief.at({x, y}) != Knowledge::Free) {
                continue;
            }
            bool adjacent_unknown = false;
            for (int dy = -1; dy <= 1 && !adjacent_unknown; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const CellIndex n{x + dx, y + dy};
                    if (belief.in_bounds(n) && belief.at(n) == Knowledge::Unknown) {
                        adjacent_unknown = true;
                        break;
                    }
                }
            }
            if (adjacent_unknown) {
                cells.push_back({x, y});
            }
        }
    }
    return cells;
}

namespace {

struct Cluster {
    std::vector<CellIndex> cells;
    CellIndex representative;
};

std::vector<Cluster> cluster_frontier_cells(const BeliefGrid& belief,
                                            const std::vector<CellIndex>& cells) {
    const std::size_t n = static_cast<std::size_t>(belief.width()) * belief.height();
    std::vector<std::uint8_t> is_frontier(n, 0), visited(n, 0);
    auto idx = [&](CellIndex c) { return belief.index(c); };
    for (const CellIndex& c : cells) {
        is_frontier[idx(c)] = 1;
    }

    std::vector<Cluster> clusters;
    for (const CellIndex& seed : cells) {
        if (visited[idx(seed)]) {
            continue;
        }
        Cluster cluster;
        std::queue<CellIndex> queue;
        queue.push(seed);
        visited[idx(seed)] = 1;
        while (!queue.empty()) {
            const CellIndex c = queue.front();
            queue.pop();
            cluster.cells.push_back(c);
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const CellIndex m{c.x + dx, c.y + dy};
                    if (belief.in_bounds(m) && is_frontier[idx(m)] && !visited[idx(m)]) {
                        visited[idx(m)] = 1;
                        queue.push(m);
                    }
                }
            }
        }

        double cx = 0.0, cy = 0.0;
        for (const CellIndex& c : cluster.cells) {
            cx += c.x;
            cy += c.y;
        }
        cx /= cluster.cells.size();
        cy /= cluster.cells.size();

        CellIndex best = cluster.cells.front();
        double best_d = std::numeric_limits<double>::infinity();
        for (const CellIndex& c : cluster.cells) {
            const double d = (c.x - cx) * (c.x - cx) + (c.y - cy) * (c.y - cy);
            if (d < best_d ||
                (d == best_d && (c.y < best.y || (c.y == best.y && c.x < best.x)))) {
                best_d = d;
                best = c;
            }
        }
        cluster.representative = best;
        clusters.push_back(std::move(cluster));
    }
    return clusters;
}

}  // namespace

std::vector<FrontierCandidate> detect_frontiers(const BeliefGrid& belief, const Pose& robot,
                                                double search_radius_m) {
    const CellIndex robot_cell = belief.cell_of(robot);
    if (!belief.in_bounds(robot_cell) || belief.at(robot_cell) != Knowledge::Free) {
        throw std::domain_error("detect_frontiers: robot cell is not known Free");
    }

    const std::vector<CellIndex> cells = frontier_cells(belief);
    if (cells.empty()) {
        return {};
    }

    const std::vector<Cluster> clusters = cluster_frontier_cells(belief, cells);
    const DistanceField wave(GridMask::belief_known_free(belief), robot_cell);

    std::vector<FrontierCandidate> reps;
    reps.reserve(clusters.size());
    for (const Cluster& cluster : clusters) {
        reps.push_back({belief.center_of(cluster.representative), cluster.representative,
                        wave.meters(cluster.representative)});
    }

    const double map_diag =
        std::hypot(belief.width() * belief.resolution(), belief.height() * belief.resolution());
    double radius = search_radius_m;
    std::vector<FrontierCandidate> survivors;
    while (true) {
        survivors.clear();
        for (const FrontierCandidate& r : reps) {
            if (std::isfinite(r.distance_m) && r.distance_m >= kMinFrontierDistanceM &&
                r.distance_m <= radius) {
                survivors.push_back(r);
            }
        }
        if (!survivors.empty() || radius == std::numeric_limits<double>::infinity()) {
            break;
        }
        radius = radius >= map_diag ? std::numeric_limits<double>::infinity() : radius * 2.0;
    }

    std::sort(survivors.begin(), survivors.end(),
              [](const FrontierCandidate& a, const FrontierCandidate& b) {
                  if (a.distance_m != b.distance_m) return a.distance_m < b.distance_m;
                  if (a.cell.y != b.cell.y) return a.cell.y < b.cell.y;
                  return a.cell.x < b.cell.x;
              });
    if (survivors.size() > static_cast<std::size_t>(kMaxFrontierGoals)) {
        survivors.resize(kMaxFrontierGoals);
    }
    return survivors;
}

}  // namespace artsim
