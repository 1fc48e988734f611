#include "rfqd/genotype.hpp"

#include <cmath>

namespace rfqd {

GaitParams decode(const Genotype& g)
{
    GaitParams p;
    std::size_t i = 0;
    for (auto& leg : p.legs) {
        leg.hip = {g[i], g[i + 1], g[i + 2]};
        leg.kneefoot = {g[i + 3], g[i + 4], g[i + 5]};
        i += 6;
    }
    return p;
}

Genotype encode(const GaitParams& p)
{
    std::array<double, kGenotypeSize> v{};
    std::size_t i = 0;
    for (const auto& leg : p.legs) {
        v[i++] = leg.hip.amplitude;
        v[i++] = leg.hip.phase;
        v[i++] = leg.hip.duty;
        v[i++] = leg.kneefoot.amplitude;
        v[i++] = leg.kneefoot.phase;
        v[i++] = leg.kneefoot.duty;
    }
    return Genotype(v);
}

double signal_value(const JointSignal& s, double t, double freq)
{
    double p = t * freq + s.phase;
    p -= std::floor(p); // fractional period position in [0, 1)
    const double d = s.duty;
    if (d <= 0.0)
        return -s.amplitude * std::sin(M_PI * p);
    if (d >= 1.0)
        return s.amplitude * std::sin(M_PI * p);
    if (p < d)
        return s.amplitude * std::sin(M_PI * p / d);
    return -s.amplitude * std::sin(M_PI * (p - d) / (1.0 - d));
}

std::array<double, kNumLegs * kJointsPerLeg> joint_commands(const Genotype& g, double t)
{
    const GaitParams p = decode(g);
    std::array<double, kNumLegs * kJointsPerLeg> out{};
    std::size_t i = 0;
    for (const auto& leg : p.legs) {
        out[i++] = signal_value(leg.hip, t, kGaitFrequencyHz);
        const double kf = signal_value(leg.kneefoot, t, kGaitFrequencyHz);
        out[i++] = kf;
        out[i++] = kf;
    }
    return out;
}

} // namespace rfqd
