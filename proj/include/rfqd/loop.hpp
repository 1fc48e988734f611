#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

#include "rfqd/archive.hpp"
#include "rfqd/arena.hpp"
#include "rfqd/dynmodel.hpp"
#include "rfqd/safety.hpp"
#include "rfqd/variation.hpp"

namespace rfqd {

enum class Ablation { RFQD, NoDA, NoRecovery, MapElites };

const char* ablation_name(Ablation a);
Ablation ablation_from_name(const std::string& name);

struct RunConfig {
    bool dynamics_awareness = true;
    bool recovery_enabled = true;
    int eval_budget = 1000;       // real executions, the wall-clock stand-in
    int init_evals = 10;          // random controllers before the loop starts
    int train_cadence = 10;       // retrain after this many new real evals
    int imagination_iters = 200;  // QD iterations per imagination phase
    int batch_per_cycle = 10;     // executions selected per cycle
    double alpha = 0.8;           // EMA weight of the new measurement
    double beta = 0.3;            // safety buffer, metres
    double archive_l = 0.05;      // archive distance threshold, metres
    int novelty_k = 5;            // neighbours for novelty scoring
    VariationParams variation;
    EnsembleConfig ensemble;
    TrainSettings train;
    std::uint64_t seed = 1;       // master seed; every stream derives from it

    void apply(Ablation a)
    {
        dynamics_awareness = a == Ablation::RFQD || a == Ablation::NoRecovery;
        recovery_enabled = a == Ablation::RFQD || a == Ablation::NoDA;
    }
};

enum class Termination { BudgetExhausted, LeftRecoveryZone, InitFailure };

const char* termination_name(Termination t);

struct MetricRow {
    int eval = 0; // 1-based real-evaluation index
    std::size_t archive_size = 0;
    double coverage = 0.0;
    double max_fitness = 0.0;
    double qd_score = 0.0;
};

struct TraceRow {
    int episode = 0; // 1-based, matches MetricRow.eval
    int substep = 0; // 0 = episode start pose
    Pose pose;
};

struct RunReport {
    int real_evals_used = 0;
    Termination termination = Termination::BudgetExhausted;
    std::vector<MetricRow> metrics; // one row per real evaluation
    std::vector<TraceRow> trace;    // H + 1 rows per real evaluation
};

struct RunResult {
    RunReport report;
    UnstructuredArchive archive;
    Ensemble ensemble;
};

// Evaluating a genotype under the learned model. Injectable so tests can
// substitute a perfect oracle for the ensemble.
using RolloutFn = std::function<ImaginedOutcome(const Genotype&, int member)>;

// Runs `iters` rounds of select-mutate-imagine-add against the imagined
// archive. The caller seeds `imagined` with a copy of the real archive
// beforehand; nothing here touches the real archive.
void imagination_phase(const RolloutFn& rollout, int members, UnstructuredArchive& imagined,
                       int iters, const VariationParams& vp, Rng& var_rng, Rng& member_rng);

// Picks up to `batch` imagined solutions for real execution: only those not
// seeded from the real archive, only those whose predicted arrival stays
// strictly inside the exploration zone, ranked by novelty against the real
// archive (descending, ties keep archive order).
std::vector<Solution> select_for_execution(const UnstructuredArchive& imagined,
                                           const UnstructuredArchive& real,
                                           const std::unordered_set<std::uint64_t>& seeded_ids,
                                           const Pose& pose, const ZoneMap& zones, int batch);

// The archive member whose predicted arrival from `pose` lands closest to
// the zone center. Null when the archive is empty.
const Solution* recovery_step(const UnstructuredArchive& archive, const Pose& pose,
                              const ZoneMap& zones);

// Folds a recovery re-execution into an existing member: remove, EMA the
// fitness and descriptor with weight alpha on the new measurement, bump
// n_evals, then re-apply the addition rule (the update may evict it).
void update_controller(UnstructuredArchive& archive, std::uint64_t id, double f_new,
                       const std::array<double, 2>& bd_new, double alpha);

// The reset-free learning loop. `world` must persist its pose across calls;
// `start` is that pose before the first episode.
RunResult run(const RunConfig& cfg, const WorldFn& world, const Pose& start, const ZoneMap& zones);

// Convenience overload wiring an Arena in as the world.
RunResult run(const RunConfig& cfg, Arena& arena, const ZoneMap& zones);

} // namespace rfqd
