#include "rfqd/arena.hpp"

namespace rfqd {

Zone zone_of(const Pose& p, const ZoneMap& z)
{
    const double dx = p.x - z.center_x;
    const double dy = p.y - z.center_y;
    const double d = std::sqrt(dx * dx + dy * dy);
    if (d <= z.r_exploration)
        return Zone::Exploration;
    if (d <= z.r_recovery)
        return Zone::Recovery;
    return Zone::Outside;
}

const char* zone_name(Zone z)
{
    switch (z) {
    case Zone::Exploration: return "exploration";
    case Zone::Recovery: return "recovery";
    case Zone::Outside: return "outside";
    }
    return "?";
}

Surrogate::Surrogate(std::uint64_t seed) : seed_(seed)
{
    Rng rng = substream(seed, "surrogate");
    for (auto& ch : channels_) {
        for (int j = 0; j < kFeatures; ++j) {
            for (std::size_t i = 0; i < kGenotypeSize; ++i)
                ch.w[j][i] = rng.normal();
            ch.a[j] = rng.normal();
            ch.b[j] = rng.uniform(0.0, 2.0 * M_PI);
            ch.rho[j] = rng.uniform(0.0, 2.0 * M_PI);
        }
    }
}

double Surrogate::feature_sum(const Channel& c, const Genotype& g, int k) const
{
    double u = 0.0;
    for (int j = 0; j < kFeatures; ++j) {
        double dot = 0.0;
        for (std::size_t i = 0; i < kGenotypeSize; ++i)
            dot += c.w[j][i] * g[i];
        u += c.a[j] * std::cos(dot + c.b[j] + c.rho[j] * k);
    }
    return u / std::sqrt(static_cast<double>(kFeatures));
}

Twist Surrogate::twist(const Genotype& g, int k) const
{
    Twist t;
    t.vx = kMaxLinearSpeed * std::tanh(feature_sum(channels_[0], g, k));
    t.vy = kMaxLinearSpeed * std::tanh(feature_sum(channels_[1], g, k));
    t.omega = kMaxAngularSpeed * std::tanh(feature_sum(channels_[2], g, k));
    return t;
}

std::array<double, 3> relative_state(const Pose& p, const Pose& origin)
{
    const double dx = p.x - origin.x;
    const double dy = p.y - origin.y;
    const double c = std::cos(origin.theta), s = std::sin(origin.theta);
    return {c * dx + s * dy, -s * dx + c * dy, wrap_angle(p.theta - origin.theta)};
}

double arc_fitness(const std::array<double, 2>& bd, double theta_rel)
{
    if (std::sqrt(bd[0] * bd[0] + bd[1] * bd[1]) < kDegenerateBdRadius)
        return 0.0;
    const double desired = 2.0 * std::atan2(bd[1], bd[0]);
    return -std::fabs(wrap_angle(theta_rel - desired));
}

EpisodeResult execute_episode(const Pose& start, const Genotype& g,
                              const TwistSource& twist, Rng* noise_rng,
                              const NoiseLevels& noise, const ZoneMap* zones)
{
    EpisodeResult r;
    r.start_pose = start;
    r.pose_trace.reserve(kSubsteps + 1);
    r.pose_trace.push_back(start);
    r.transitions.reserve(kSubsteps);
    if (zones)
        r.zone_events.push_back(zone_of(start, *zones));

    Pose pose = start;
    for (int k = 0; k < kSubsteps; ++k) {
        Transition tr;
        tr.state = relative_state(pose, start);
        tr.phase = static_cast<double>(k) / kSubsteps;
        tr.action = g;

        Twist w = twist(g, k);
        if (noise_rng) {
            w.vx += noise_rng->normal(0.0, noise.sigma_v);
            w.vy += noise_rng->normal(0.0, noise.sigma_v);
            w.omega += noise_rng->normal(0.0, noise.sigma_omega);
        }

        // heading first, then translate with the updated heading
        pose.theta = wrap_angle(pose.theta + w.omega * kSubstepSeconds);
        const double c = std::cos(pose.theta), s = std::sin(pose.theta);
        pose.x += kSubstepSeconds * (w.vx * c - w.vy * s);
        pose.y += kSubstepSeconds * (w.vx * s + w.vy * c);

        tr.next_state = relative_state(pose, start);
        r.transitions.push_back(tr);
        r.pose_trace.push_back(pose);
        if (zones) {
            const Zone zk = zone_of(pose, *zones);
            if (zk != r.zone_events.back())
                r.zone_events.push_back(zk);
        }
    }

    r.final_pose = pose;
    const auto rel = relative_state(pose, start);
    r.bd = {rel[0], rel[1]};
    r.fitness = arc_fitness(r.bd, rel[2]);
    return r;
}

EpisodeResult Arena::execute(const Genotype& g, const ZoneMap* zones)
{
    const TwistSource src = [this](const Genotype& gg, int k) { return surrogate_.twist(gg, k); };
    EpisodeResult r = execute_episode(pose_, g, src, noise_enabled_ ? &noise_rng_ : nullptr,
                                      noise_, zones);
    pose_ = r.final_pose;
    return r;
}

} // namespace rfqd
