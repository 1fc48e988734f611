#include "rfqd/variation.hpp"

#include <algorithm>

namespace rfqd {

Genotype iso_line_dd(const Genotype& x, const Genotype& y, const VariationParams& p, Rng& rng)
{
    std::array<double, kGenotypeSize> iso{};
    for (double& n : iso)
        n = rng.normal();
    const double m = rng.normal();

    std::array<double, kGenotypeSize> child{};
    for (std::size_t i = 0; i < kGenotypeSize; ++i)
        child[i] = std::clamp(x[i] + p.sigma_iso * iso[i] + p.sigma_line * (y[i] - x[i]) * m,
                              0.0, 1.0);
    return Genotype(child);
}

} // namespace rfqd
