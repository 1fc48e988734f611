#include "rfqd/archive.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace rfqd {

namespace {
double bd_distance(const std::array<double, 2>& a, const std::array<double, 2>& b)
{
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    return std::sqrt(dx * dx + dy * dy);
}
} // namespace

std::size_t UnstructuredArchive::nearest(const std::array<double, 2>& bd, double& dist_out) const
{
    std::size_t best = static_cast<std::size_t>(-1);
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < solutions_.size(); ++i) {
        const double d = bd_distance(bd, solutions_[i].bd);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    dist_out = best_d;
    return best;
}

AddResult UnstructuredArchive::try_add(Solution s)
{
    if (s.id == 0)
        s.id = next_id_++;
    else
        next_id_ = std::max(next_id_, s.id + 1);

    double d = 0.0;
    const std::size_t idx = nearest(s.bd, d);
    if (solutions_.empty() || d > l_) {
        solutions_.push_back(std::move(s));
        return Added{};
    }
    if (s.fitness > solutions_[idx].fitness) {
        const std::uint64_t old_id = solutions_[idx].id;
        solutions_.erase(solutions_.begin() + static_cast<std::ptrdiff_t>(idx));
        solutions_.push_back(std::move(s));
        return Replaced{old_id};
    }
    return Rejected{};
}

double UnstructuredArchive::novelty(const std::array<double, 2>& bd, int k) const
{
    if (solutions_.empty())
        return std::numeric_limits<double>::infinity();
    std::vector<double> dists;
    dists.reserve(solutions_.size());
    for (const auto& s : solutions_)
        dists.push_back(bd_distance(bd, s.bd));
    const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(k), dists.size());
    std::partial_sort(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(n), dists.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        sum += dists[i];
    return sum / static_cast<double>(n);
}

Solution UnstructuredArchive::remove(std::uint64_t id)
{
    for (std::size_t i = 0; i < solutions_.size(); ++i) {
        if (solutions_[i].id == id) {
            Solution s = std::move(solutions_[i]);
            solutions_.erase(solutions_.begin() + static_cast<std::ptrdiff_t>(i));
            return s;
        }
    }
    throw std::invalid_argument("archive: no solution with id " + std::to_string(id));
}

const Solution* UnstructuredArchive::find(std::uint64_t id) const
{
    for (const auto& s : solutions_)
        if (s.id == id)
            return &s;
    return nullptr;
}

void UnstructuredArchive::restore(const Solution& s)
{
    solutions_.push_back(s);
    next_id_ = std::max(next_id_, s.id + 1);
}

int coverage_cell(const std::array<double, 2>& bd)
{
    const double span = kCoverageBdMax - kCoverageBdMin;
    auto clampi = [](int v) { return std::clamp(v, 0, kCoverageGridSide - 1); };
    const int ix = clampi(static_cast<int>(std::floor((bd[0] - kCoverageBdMin) / span * kCoverageGridSide)));
    const int iy = clampi(static_cast<int>(std::floor((bd[1] - kCoverageBdMin) / span * kCoverageGridSide)));
    return iy * kCoverageGridSide + ix;
}

ArchiveMetrics UnstructuredArchive::metrics() const
{
    ArchiveMetrics m;
    m.size = solutions_.size();
    std::set<int> cells;
    for (const auto& s : solutions_) {
        cells.insert(coverage_cell(s.bd));
        m.max_fitness = std::max(m.max_fitness, s.fitness);
        m.qd_score += 1.0 - std::fabs(s.fitness) / M_PI;
    }
    m.coverage = static_cast<double>(cells.size()) /
                 static_cast<double>(kCoverageGridSide * kCoverageGridSide);
    return m;
}

} // namespace rfqd
