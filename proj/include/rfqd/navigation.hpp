#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rfqd/archive.hpp"
#include "rfqd/arena.hpp"

namespace rfqd {

inline constexpr double kGoalRadius = 0.05;   // success distance, metres
inline constexpr int kMaxActions = 100;       // per-trial action cap
inline constexpr double kActionSeconds = 5.0; // one controller execution
inline constexpr double kLookahead = 0.3;     // waypoint arc-length, metres

struct Cell {
    int x = 0;
    int y = 0;
    bool operator==(const Cell&) const = default;
};

struct ObstacleRect {
    double min_x = 0.0, min_y = 0.0;
    double max_x = 0.0, max_y = 0.0;
};

// Rectangular occupancy world. Obstacle rectangles are inflated by a safety
// margin and rasterized once at load; everything outside the bounds is
// treated as occupied.
class MazeMap {
public:
    MazeMap(double width, double height, double resolution, double inflation,
            const Pose& start, const std::array<double, 2>& goal,
            std::vector<ObstacleRect> obstacles);

    static MazeMap from_json(const std::string& text);
    std::string to_json() const;

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double resolution() const { return resolution_; }
    double inflation() const { return inflation_; }
    double width() const { return width_; }
    double height() const { return height_; }
    const Pose& start() const { return start_; }
    const std::array<double, 2>& goal() const { return goal_; }
    const std::vector<ObstacleRect>& obstacles() const { return obstacles_; }

    bool in_bounds(const Cell& c) const
    {
        return c.x >= 0 && c.x < nx_ && c.y >= 0 && c.y < ny_;
    }
    // occupancy after inflation; out-of-bounds counts as blocked
    bool blocked(const Cell& c) const;
    bool blocked_at(double x, double y) const { return blocked(cell_of(x, y)); }

    Cell cell_of(double x, double y) const;
    std::array<double, 2> center_of(const Cell& c) const;

    // inside one of the raw obstacle rectangles (no inflation), bounds included
    bool inside_obstacle(double x, double y) const;

    // straight segment test, sampled at a quarter of the resolution
    bool segment_blocked(const std::array<double, 2>& a, const std::array<double, 2>& b) const;

private:
    double width_, height_, resolution_, inflation_;
    Pose start_;
    std::array<double, 2> goal_;
    std::vector<ObstacleRect> obstacles_;
    int nx_, ny_;
    std::vector<std::uint8_t> occupied_; // row-major, rasterized at construction
};

// 8-connected shortest path with unit cardinal and sqrt(2) diagonal costs,
// Euclidean heuristic, ties broken by (f, h, row-major index). Diagonal
// moves may not cut corners. The start cell is allowed to be occupied (the
// robot can stand inside the inflated margin and must be able to leave);
// nullopt when the goal is unreachable.
std::optional<std::vector<Cell>> astar(const MazeMap& m, const Cell& start, const Cell& goal);

struct ActionChoice {
    std::size_t index = 0;      // into archive.solutions()
    bool collision_free = true; // false when the escape hatch fired
};

// Waypoint tracking: aim for the path point one lookahead arc-length past
// the closest path point (the goal itself when closer than that), then pick
// the archive member whose predicted arrival lands nearest the waypoint
// among those whose straight-line hop avoids inflated obstacles. When every
// hop collides, falls back to the unconstrained nearest (escape hatch).
ActionChoice select_action(const UnstructuredArchive& archive, const Pose& pose,
                           const std::vector<Cell>& path, const MazeMap& m);

struct NavTraceRow {
    int action = 0;  // 1-based, 0 for the starting pose row
    int substep = 0;
    Pose pose;
};

struct TrialReport {
    bool success = false;
    bool wall_contact = false; // the executed trace entered an obstacle
    int n_actions = 0;
    double elapsed = 0.0; // simulated seconds, kActionSeconds per action
    int escape_hatch_uses = 0;
    std::vector<NavTraceRow> trace;
};

// One navigation trial: replan with astar before every action (execution is
// noisy), select and execute until within kGoalRadius of the goal, the
// action cap, or an unreachable goal. Walls are impassable: the moment the
// executed trace enters an obstacle rectangle the trial ends as a failure,
// with the trace truncated at the contact pose. The world keeps its own
// pose; `start` is that pose before the first action.
TrialReport run_trial(const UnstructuredArchive& archive, const MazeMap& m, const WorldFn& world,
                      const Pose& start, int max_actions = kMaxActions);

// Convenience overload wiring an Arena in as the world.
TrialReport run_trial(const UnstructuredArchive& archive, const MazeMap& m, Arena& arena,
                      int max_actions = kMaxActions);

} // namespace rfqd
