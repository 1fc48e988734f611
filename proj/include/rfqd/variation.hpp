#pragma once

#include "rfqd/genotype.hpp"
#include "rfqd/rng.hpp"

namespace rfqd {

struct VariationParams {
    double sigma_iso = 0.01; // per-gene isotropic scale
    double sigma_line = 0.2; // scale of the shared step along (y - x)
};

// ISO+LineDD: child_i = clamp(x_i + sigma_iso * n_i + sigma_line * (y_i - x_i) * m)
// with n_i fresh per gene and m shared across genes. Consumes exactly 25
// normal draws.
Genotype iso_line_dd(const Genotype& x, const Genotype& y, const VariationParams& p, Rng& rng);

} // namespace rfqd
