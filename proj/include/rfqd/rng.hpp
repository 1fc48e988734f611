#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace rfqd {

// Deterministic random stream. Wraps mt19937_64 (whose output sequence is
// pinned by the standard) and hand-rolls the floating-point draws, so the
// same seed gives the same values on every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // uniform in [0, 1)
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller, two engine draws per call, no cached state
    double normal()
    {
        ++normal_draws_;
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // uniform integer in [0, n), n > 0
    std::size_t uniform_index(std::size_t n)
    {
        return static_cast<std::size_t>(
            (static_cast<__uint128_t>(engine_()) * n) >> 64);
    }

    std::uint64_t raw() { return engine_(); }

    // number of normal() draws consumed so far
    std::uint64_t normal_draws() const { return normal_draws_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t normal_draws_ = 0;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}
} // namespace detail

// Derives an independent sub-stream seed from a master seed and a stream
// name (optionally an index, e.g. one stream per ensemble member). Streams
// only interact through the master seed: consuming more draws from one
// never perturbs another.
inline std::uint64_t substream_seed(std::uint64_t master, std::string_view name,
                                    std::uint64_t index = 0)
{
    std::uint64_t h = detail::splitmix64(master ^ detail::fnv1a(name));
    return detail::splitmix64(h ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
}

inline Rng substream(std::uint64_t master, std::string_view name, std::uint64_t index = 0)
{
    return Rng(substream_seed(master, name, index));
}

} // namespace rfqd
