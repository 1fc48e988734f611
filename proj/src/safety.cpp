#include "rfqd/safety.hpp"

#include <stdexcept>

namespace rfqd {

double epsilon(const Pose& p, const ZoneMap& z, const SafetyState& ss)
{
    if (ss.running_max_dist <= ss.beta)
        throw std::invalid_argument(
            "epsilon: running max distance has not exceeded beta; the "
            "exploration zone is too small for the configured buffer");
    return (dist_to_unsafe(p, z) - ss.beta) / (ss.running_max_dist - ss.beta);
}

} // namespace rfqd
