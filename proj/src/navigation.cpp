#include "rfqd/navigation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

namespace rfqd {

namespace {
double point_rect_distance(double x, double y, const ObstacleRect& r)
{
    const double dx = std::max({r.min_x - x, 0.0, x - r.max_x});
    const double dy = std::max({r.min_y - y, 0.0, y - r.max_y});
    return std::sqrt(dx * dx + dy * dy);
}

// Planning start for a robot at (x, y). Inflation can swallow the cell the
// robot physically occupies; planning then starts from the nearest free cell
// instead of giving up while standing in open space.
Cell plan_start_cell(const MazeMap& m, double x, double y)
{
    const Cell here = m.cell_of(x, y);
    if (!m.blocked(here) || !m.in_bounds(here))
        return here;
    Cell best = here;
    double best_d = std::numeric_limits<double>::infinity();
    for (int iy = 0; iy < m.ny(); ++iy) {
        for (int ix = 0; ix < m.nx(); ++ix) {
            const Cell c{ix, iy};
            if (m.blocked(c))
                continue;
            const auto p = m.center_of(c);
            const double d = std::hypot(p[0] - x, p[1] - y);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
    }
    return best;
}
} // namespace

MazeMap::MazeMap(double width, double height, double resolution, double inflation,
                 const Pose& start, const std::array<double, 2>& goal,
                 std::vector<ObstacleRect> obstacles)
    : width_(width), height_(height), resolution_(resolution), inflation_(inflation),
      start_(start), goal_(goal), obstacles_(std::move(obstacles))
{
    if (width_ <= 0.0 || height_ <= 0.0)
        throw std::invalid_argument("maze: bounds must be positive");
    if (resolution_ <= 0.0)
        throw std::invalid_argument("maze: resolution must be positive");
    if (inflation_ < 0.0)
        throw std::invalid_argument("maze: inflation must be non-negative");
    nx_ = static_cast<int>(std::lround(width_ / resolution_));
    ny_ = static_cast<int>(std::lround(height_ / resolution_));
    if (nx_ < 1 || ny_ < 1)
        throw std::invalid_argument("maze: bounds smaller than one cell");

    occupied_.assign(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_), 0);
    for (int iy = 0; iy < ny_; ++iy) {
        for (int ix = 0; ix < nx_; ++ix) {
            const auto c = center_of({ix, iy});
            for (const auto& r : obstacles_) {
                if (point_rect_distance(c[0], c[1], r) <= inflation_) {
                    occupied_[static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx_) +
                              static_cast<std::size_t>(ix)] = 1;
                    break;
                }
            }
        }
    }

    if (blocked(cell_of(start_.x, start_.y)))
        throw std::invalid_argument("maze: start cell is occupied after inflation");
    if (blocked(cell_of(goal_[0], goal_[1])))
        throw std::invalid_argument("maze: goal cell is occupied after inflation");
}

bool MazeMap::blocked(const Cell& c) const
{
    if (!in_bounds(c))
        return true;
    return occupied_[static_cast<std::size_t>(c.y) * static_cast<std::size_t>(nx_) +
                     static_cast<std::size_t>(c.x)] != 0;
}

Cell MazeMap::cell_of(double x, double y) const
{
    return {static_cast<int>(std::floor(x / resolution_)),
            static_cast<int>(std::floor(y / resolution_))};
}

std::array<double, 2> MazeMap::center_of(const Cell& c) const
{
    return {(c.x + 0.5) * resolution_, (c.y + 0.5) * resolution_};
}

bool MazeMap::inside_obstacle(double x, double y) const
{
    for (const auto& r : obstacles_)
        if (x >= r.min_x && x <= r.max_x && y >= r.min_y && y <= r.max_y)
            return true;
    return false;
}

bool MazeMap::segment_blocked(const std::array<double, 2>& a, const std::array<double, 2>& b) const
{
    const double dx = b[0] - a[0], dy = b[1] - a[1];
    const double len = std::sqrt(dx * dx + dy * dy);
    const int steps = std::max(1, static_cast<int>(std::ceil(len / (resolution_ / 4.0))));
    for (int i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        if (blocked_at(a[0] + t * dx, a[1] + t * dy))
            return true;
    }
    return false;
}

MazeMap MazeMap::from_json(const std::string& text)
{
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw std::invalid_argument("maze: not a JSON object");
    try {
        const auto bounds = j.at("bounds").get<std::array<double, 2>>();
        const auto s = j.at("start").get<std::array<double, 3>>();
        const auto goal = j.at("goal").get<std::array<double, 2>>();
        std::vector<ObstacleRect> rects;
        for (const auto& o : j.at("obstacles")) {
            const auto lo = o.at("min").get<std::array<double, 2>>();
            const auto hi = o.at("max").get<std::array<double, 2>>();
            if (hi[0] < lo[0] || hi[1] < lo[1])
                throw std::invalid_argument("maze: obstacle with inverted corners");
            rects.push_back({lo[0], lo[1], hi[0], hi[1]});
        }
        return MazeMap(bounds[0], bounds[1], j.at("resolution").get<double>(),
                       j.at("inflation").get<double>(), Pose{s[0], s[1], s[2]}, goal,
                       std::move(rects));
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("maze: ") + e.what());
    }
}

std::string MazeMap::to_json() const
{
    nlohmann::json j;
    j["bounds"] = {width_, height_};
    j["resolution"] = resolution_;
    j["inflation"] = inflation_;
    j["start"] = {start_.x, start_.y, start_.theta};
    j["goal"] = goal_;
    auto& arr = j["obstacles"] = nlohmann::json::array();
    for (const auto& r : obstacles_)
        arr.push_back({{"min", {r.min_x, r.min_y}}, {"max", {r.max_x, r.max_y}}});
    return j.dump(2);
}

std::optional<std::vector<Cell>> astar(const MazeMap& m, const Cell& start, const Cell& goal)
{
    if (!m.in_bounds(start) || !m.in_bounds(goal))
        return std::nullopt;
    if (m.blocked(goal))
        return std::nullopt;

    const int nx = m.nx(), ny = m.ny();
    const std::size_t n = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    auto index = [nx](const Cell& c) {
        return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(nx) +
               static_cast<std::size_t>(c.x);
    };
    auto heuristic = [&goal](const Cell& c) {
        const double dx = c.x - goal.x, dy = c.y - goal.y;
        return std::sqrt(dx * dx + dy * dy);
    };

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> g(n, kInf);
    std::vector<std::size_t> parent(n, static_cast<std::size_t>(-1));
    std::vector<std::uint8_t> closed(n, 0);

    using Entry = std::tuple<double, double, std::size_t>; // (f, h, index)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

    g[index(start)] = 0.0;
    open.emplace(heuristic(start), heuristic(start), index(start));

    static constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    const double kDiag = std::sqrt(2.0);

    while (!open.empty()) {
        const auto [f, h, idx] = open.top();
        open.pop();
        if (closed[idx])
            continue;
        closed[idx] = 1;
        const Cell cur{static_cast<int>(idx % static_cast<std::size_t>(nx)),
                       static_cast<int>(idx / static_cast<std::size_t>(nx))};
        if (cur == goal) {
            std::vector<Cell> path;
            for (std::size_t i = idx; i != static_cast<std::size_t>(-1); i = parent[i])
                path.push_back({static_cast<int>(i % static_cast<std::size_t>(nx)),
                                static_cast<int>(i / static_cast<std::size_t>(nx))});
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (int d = 0; d < 8; ++d) {
            const Cell nb{cur.x + kDx[d], cur.y + kDy[d]};
            if (!m.in_bounds(nb) || m.blocked(nb))
                continue;
            const bool diagonal = d >= 4;
            if (diagonal) {
                // no corner cutting: both cardinal companions must be free
                if (m.blocked({cur.x + kDx[d], cur.y}) || m.blocked({cur.x, cur.y + kDy[d]}))
                    continue;
            }
            const double cost = diagonal ? kDiag : 1.0;
            const std::size_t ni = index(nb);
            const double cand = g[idx] + cost;
            if (cand < g[ni]) {
                g[ni] = cand;
                parent[ni] = idx;
                const double nh = heuristic(nb);
                open.emplace(cand + nh, nh, ni);
            }
        }
    }
    return std::nullopt;
}

ActionChoice select_action(const UnstructuredArchive& archive, const Pose& pose,
                           const std::vector<Cell>& path, const MazeMap& m)
{
    if (archive.empty())
        throw std::invalid_argument("navigation: cannot act with an empty archive");
    if (path.empty())
        throw std::invalid_argument("navigation: cannot act with an empty path");

    // closest path point to the pose
    std::size_t nearest = 0;
    double nearest_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < path.size(); ++i) {
        const auto c = m.center_of(path[i]);
        const double dx = c[0] - pose.x, dy = c[1] - pose.y;
        const double d = dx * dx + dy * dy;
        if (d < nearest_d) {
            nearest_d = d;
            nearest = i;
        }
    }

    // walk the lookahead arc-length forward; past the end, aim at the goal
    std::array<double, 2> waypoint = m.goal();
    double travelled = 0.0;
    for (std::size_t i = nearest + 1; i < path.size(); ++i) {
        const auto a = m.center_of(path[i - 1]);
        const auto b = m.center_of(path[i]);
        travelled += std::hypot(b[0] - a[0], b[1] - a[1]);
        if (travelled >= kLookahead) {
            waypoint = b;
            break;
        }
    }

    const auto& pool = archive.solutions();
    auto arrival_error = [&](const Solution& s) {
        const auto arr = predicted_arrival(pose, s.bd);
        return std::hypot(arr[0] - waypoint[0], arr[1] - waypoint[1]);
    };

    std::size_t best = pool.size();
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const auto arr = predicted_arrival(pose, pool[i].bd);
        if (m.segment_blocked({pose.x, pose.y}, arr))
            continue;
        const double err = arrival_error(pool[i]);
        if (err < best_err) {
            best_err = err;
            best = i;
        }
    }
    if (best != pool.size())
        return {best, true};

    // every hop collides; take the unconstrained best rather than freeze
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const double err = arrival_error(pool[i]);
        if (err < best_err) {
            best_err = err;
            best = i;
        }
    }
    return {best, false};
}

TrialReport run_trial(const UnstructuredArchive& archive, const MazeMap& m, const WorldFn& world,
                      const Pose& start, int max_actions)
{
    TrialReport rep;
    Pose pose = start;
    rep.trace.push_back({0, 0, pose});

    auto goal_distance = [&]() {
        return std::hypot(pose.x - m.goal()[0], pose.y - m.goal()[1]);
    };
    if (goal_distance() <= kGoalRadius) {
        rep.success = true;
        return rep;
    }

    while (rep.n_actions < max_actions) {
        const auto path = astar(m, plan_start_cell(m, pose.x, pose.y),
                                m.cell_of(m.goal()[0], m.goal()[1]));
        if (!path)
            return rep; // walled off from where we stand
        const ActionChoice choice = select_action(archive, pose, *path, m);
        if (!choice.collision_free)
            ++rep.escape_hatch_uses;
        const EpisodeResult r = world(archive.solutions()[choice.index].genotype, nullptr);
        pose = r.final_pose;
        ++rep.n_actions;
        rep.elapsed = kActionSeconds * rep.n_actions;
        for (int k = 1; k < static_cast<int>(r.pose_trace.size()); ++k) {
            const Pose& p = r.pose_trace[static_cast<std::size_t>(k)];
            rep.trace.push_back({rep.n_actions, k, p});
            if (m.inside_obstacle(p.x, p.y)) {
                rep.wall_contact = true;
                return rep; // crashed into a wall, trial over
            }
        }
        if (goal_distance() <= kGoalRadius) {
            rep.success = true;
            return rep;
        }
    }
    return rep;
}

TrialReport run_trial(const UnstructuredArchive& archive, const MazeMap& m, Arena& arena,
                      int max_actions)
{
    return run_trial(
        archive, m, [&arena](const Genotype& g, const ZoneMap* z) { return arena.execute(g, z); },
        arena.pose(), max_actions);
}

} // namespace rfqd
