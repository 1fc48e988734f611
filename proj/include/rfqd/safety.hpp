#pragma once

#include <algorithm>

#include "rfqd/arena.hpp"

namespace rfqd {

// Distance from p to the nearest point outside the exploration zone; 0 once
// already outside. This is the dist(s, omega) term of the safety score.
inline double dist_to_unsafe(const Pose& p, const ZoneMap& z)
{
    const double dx = p.x - z.center_x, dy = p.y - z.center_y;
    return std::max(0.0, z.r_exploration - std::sqrt(dx * dx + dy * dy));
}

// Running normalizer of the safety score. The caller feeds every really
// observed state in, so the denominator only ever grows.
struct SafetyState {
    double beta = 0.3;            // buffer before exploration resumes, metres
    double running_max_dist = 0.0; // max over observed dist_to_unsafe values

    void observe(double dist) { running_max_dist = std::max(running_max_dist, dist); }
};

// Normalized safety margin:
//   eps(p) = (dist_to_unsafe(p) - beta) / (running_max_dist - beta)
// Positive iff the pose is more than beta inside the exploration zone, 1
// exactly where the best distance so far was observed.
double epsilon(const Pose& p, const ZoneMap& z, const SafetyState& ss);

} // namespace rfqd
