#pragma once

#include <algorithm>
#include <array>
#include <cstddef>

#include "rfqd/rng.hpp"

namespace rfqd {

inline constexpr std::size_t kGenotypeSize = 24;
inline constexpr std::size_t kNumLegs = 4;
inline constexpr std::size_t kJointsPerLeg = 3; // hip, knee, foot
inline constexpr double kGaitFrequencyHz = 1.0;
inline constexpr double kEpisodeSeconds = 5.0;

// 24 normalized gait parameters, each clamped to [0, 1].
class Genotype {
public:
    Genotype() { params_.fill(0.0); }

    explicit Genotype(const std::array<double, kGenotypeSize>& values)
    {
        for (std::size_t i = 0; i < kGenotypeSize; ++i)
            params_[i] = std::clamp(values[i], 0.0, 1.0);
    }

    static Genotype random(Rng& rng)
    {
        std::array<double, kGenotypeSize> v{};
        for (double& x : v)
            x = rng.uniform();
        return Genotype(v);
    }

    double operator[](std::size_t i) const { return params_[i]; }
    const std::array<double, kGenotypeSize>& values() const { return params_; }
    static constexpr std::size_t size() { return kGenotypeSize; }

    bool operator==(const Genotype& other) const { return params_ == other.params_; }

private:
    std::array<double, kGenotypeSize> params_;
};

// One joint's open-loop signal: amplitude, phase offset and duty cycle,
// all as fractions in [0, 1].
struct JointSignal {
    double amplitude = 0.0;
    double phase = 0.0;
    double duty = 0.0;
};

struct LegParams {
    JointSignal hip;
    JointSignal kneefoot; // shared by knee and foot
};

// Decoded form of a genotype: 4 legs x (hip, kneefoot) x (A, phase, duty).
struct GaitParams {
    std::array<LegParams, kNumLegs> legs;
};

// Fixed layout: [leg0.hip.(A,phase,duty), leg0.kneefoot.(A,phase,duty), leg1.hip, ...]
GaitParams decode(const Genotype& g);
Genotype encode(const GaitParams& p);

// Duty-cycled sine: the positive half-wave is compressed into the first
// `duty` fraction of the period, the negative half into the rest. Continuous
// in t with period 1/freq; degenerate duty 0 (or 1) falls back to the pure
// negative (resp. positive) half-wave.
double signal_value(const JointSignal& s, double t, double freq);

// 12 normalized joint commands at time t (1 Hz gait): per leg
// [hip, kneefoot, kneefoot].
std::array<double, kNumLegs * kJointsPerLeg> joint_commands(const Genotype& g, double t);

} // namespace rfqd
