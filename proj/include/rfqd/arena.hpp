#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "rfqd/genotype.hpp"
#include "rfqd/rng.hpp"

namespace rfqd {

inline constexpr int kSubsteps = 10;          // H
inline constexpr double kSubstepSeconds = 0.5; // dt, H * dt = episode length
inline constexpr double kMaxLinearSpeed = 0.08;  // m/s, per body axis
inline constexpr double kMaxAngularSpeed = 0.6;  // rad/s
inline constexpr double kDegenerateBdRadius = 1e-3; // below this the arc fitness is 0

// wraps into (-pi, pi]
inline double wrap_angle(double a)
{
    a = std::fmod(a, 2.0 * M_PI);
    if (a <= -M_PI)
        a += 2.0 * M_PI;
    else if (a > M_PI)
        a -= 2.0 * M_PI;
    return a;
}

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0; // radians, wrapped into (-pi, pi]
};

struct Twist {
    double vx = 0.0;    // m/s, body frame
    double vy = 0.0;    // m/s, body frame
    double omega = 0.0; // rad/s
};

struct NoiseLevels {
    double sigma_v = 0.005;     // m/s on vx and vy
    double sigma_omega = 0.02;  // rad/s on omega
};

struct ZoneMap {
    double center_x = 0.0;
    double center_y = 0.0;
    double r_exploration = 0.5; // m
    double r_recovery = 0.75;   // m
};

enum class Zone { Exploration, Recovery, Outside };

Zone zone_of(const Pose& p, const ZoneMap& z);
const char* zone_name(Zone z);

// One substep of an episode, expressed in the episode-start body frame.
struct Transition {
    std::array<double, 3> state{};      // (x, y, theta) relative to episode start
    double phase = 0.0;                 // k / H
    Genotype action;
    std::array<double, 3> next_state{}; // at phase (k + 1) / H
};

struct EpisodeResult {
    Pose start_pose;                 // world frame
    Pose final_pose;                 // world frame
    std::array<double, 2> bd{};      // final position in the start body frame
    double fitness = 0.0;            // in [-pi, 0]
    std::vector<Transition> transitions;  // H entries
    std::vector<Pose> pose_trace;         // H + 1 world poses, start included
    std::vector<Zone> zone_events;        // zones visited, consecutive repeats collapsed
};

// Hidden ground-truth mapping from genotype and substep to a body twist:
// a random-Fourier-feature field squashed through tanh, built once from a
// seed and immutable afterwards.
class Surrogate {
public:
    static constexpr int kFeatures = 32;

    explicit Surrogate(std::uint64_t seed);

    Twist twist(const Genotype& g, int k) const;
    std::uint64_t seed() const { return seed_; }

private:
    struct Channel {
        std::array<std::array<double, kGenotypeSize>, kFeatures> w{};
        std::array<double, kFeatures> a{};
        std::array<double, kFeatures> b{};
        std::array<double, kFeatures> rho{};
    };
    double feature_sum(const Channel& c, const Genotype& g, int k) const;

    std::uint64_t seed_;
    std::array<Channel, 3> channels_; // vx, vy, omega
};

using TwistSource = std::function<Twist(const Genotype&, int)>;

// Arc-following fitness: negative absolute error between the final relative
// heading and the tangent heading of the circular arc through the final
// position. Final positions closer than kDegenerateBdRadius score 0.
double arc_fitness(const std::array<double, 2>& bd, double theta_rel);

// Integrates H substeps of the given twist source from `start`, optionally
// adding Gaussian actuation noise (noise_rng == nullptr disables it) and
// recording zone events (zones == nullptr skips them). Pure in everything
// but the rng stream.
EpisodeResult execute_episode(const Pose& start, const Genotype& g,
                              const TwistSource& twist, Rng* noise_rng,
                              const NoiseLevels& noise, const ZoneMap* zones = nullptr);

// The environment as its consumers see it: executes one controller from the
// live (persistent) pose and reports the episode. Arena provides this;
// tests substitute scripted worlds.
using WorldFn = std::function<EpisodeResult(const Genotype&, const ZoneMap*)>;

// Persistent world: owns the live pose, which is never reset. Consecutive
// execute() calls always start exactly where the previous one ended.
class Arena {
public:
    Arena(std::uint64_t surrogate_seed, const NoiseLevels& noise, const Pose& start,
          Rng noise_rng, bool noise_enabled = true)
        : surrogate_(surrogate_seed), noise_(noise), pose_(start),
          noise_rng_(noise_rng), noise_enabled_(noise_enabled)
    {
    }

    EpisodeResult execute(const Genotype& g, const ZoneMap* zones = nullptr);

    const Pose& pose() const { return pose_; }
    const Surrogate& surrogate() const { return surrogate_; }
    const NoiseLevels& noise() const { return noise_; }

private:
    Surrogate surrogate_;
    NoiseLevels noise_;
    Pose pose_;
    Rng noise_rng_;
    bool noise_enabled_;
};

// (x, y, theta) of `p` expressed in the body frame of `origin`.
std::array<double, 3> relative_state(const Pose& p, const Pose& origin);

// World pose reached from `pose` by a displacement `bd` given in the pose's
// body frame (heading change unknown, kept as-is).
inline std::array<double, 2> predicted_arrival(const Pose& pose, const std::array<double, 2>& bd)
{
    const double c = std::cos(pose.theta), s = std::sin(pose.theta);
    return {pose.x + c * bd[0] - s * bd[1], pose.y + s * bd[0] + c * bd[1]};
}

} // namespace rfqd
