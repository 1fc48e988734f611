#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "rfqd/genotype.hpp"

namespace rfqd {

struct Solution {
    std::uint64_t id = 0; // 0 = unassigned, archive hands out ids on insertion
    Genotype genotype;
    std::array<double, 2> bd{};
    double fitness = 0.0; // in [-pi, 0]
    int n_evals = 1;      // real executions folded into fitness/bd
};

struct Added {};
struct Replaced {
    std::uint64_t old_id;
};
struct Rejected {};
using AddResult = std::variant<Added, Replaced, Rejected>;

struct ArchiveMetrics {
    std::size_t size = 0;
    double coverage = 0.0;    // occupied fraction of the reference grid
    double max_fitness = -std::numeric_limits<double>::infinity();
    double qd_score = 0.0;    // sum of (1 - |fitness| / pi)
};

// Reference tessellation used for the coverage metric only.
inline constexpr int kCoverageGridSide = 32;
inline constexpr double kCoverageBdMin = -0.6;
inline constexpr double kCoverageBdMax = 0.6;

// Unstructured archive: a solution is admitted when its descriptor is
// farther than `l` from every member, or when it beats its nearest
// neighbour on fitness (in which case the neighbour is dropped).
class UnstructuredArchive {
public:
    UnstructuredArchive(double l, int k) : l_(l), k_(k) {}

    // Assigns a fresh id when s.id == 0; ties on fitness keep the incumbent.
    AddResult try_add(Solution s);

    // Mean Euclidean distance from bd to the k nearest member descriptors
    // (all members when fewer than k; +inf when empty).
    double novelty(const std::array<double, 2>& bd, int k) const;
    double novelty(const std::array<double, 2>& bd) const { return novelty(bd, k_); }

    // Removes and returns the solution with the given id; throws on unknown
    // ids, which can only come from a harness bug.
    Solution remove(std::uint64_t id);

    ArchiveMetrics metrics() const;

    const std::vector<Solution>& solutions() const { return solutions_; }
    std::size_t size() const { return solutions_.size(); }
    bool empty() const { return solutions_.empty(); }
    double threshold() const { return l_; }
    int neighbour_count() const { return k_; }
    std::uint64_t next_id() const { return next_id_; }

    const Solution* find(std::uint64_t id) const;

    // Restores a persisted member verbatim (ids already assigned).
    void restore(const Solution& s);

private:
    // index of the member nearest to bd, first on ties; npos when empty
    std::size_t nearest(const std::array<double, 2>& bd, double& dist_out) const;

    double l_;
    int k_;
    std::uint64_t next_id_ = 1;
    std::vector<Solution> solutions_; // insertion order
};

int coverage_cell(const std::array<double, 2>& bd);

} // namespace rfqd
