#pragma once

#include <string>
#include <vector>

#include "rfqd/config.hpp"
#include "rfqd/io.hpp"
#include "rfqd/navigation.hpp"

namespace rfqd {

struct TrainOutput {
    RunResult result;
    std::string run_dir;
};

// Runs one training run per the config's ablation + seed and writes
// archive.jsonl, metrics.csv, trace.csv, report.json (and model.json when
// the dynamics model is in play) into <out_dir>/<ablation>_seed<seed>/.
TrainOutput cmd_train(const ExperimentConfig& cfg);

struct NavOutcome {
    std::vector<TrialReport> trials;
    int successes = 0;
};

// Independent maze trials of one archive: trial t gets its own arena whose
// actuation noise comes from the nav-noise substream with index t.
NavOutcome run_navigation(const UnstructuredArchive& archive, const MazeMap& maze,
                          const ExperimentConfig& cfg, std::uint64_t run_seed);

// Loads an archive file and runs trials, writing nav_report.json and
// per-trial traces next to the archive.
NavOutcome cmd_navigate(const std::string& archive_path, const std::string& maze_path,
                        int trials, const ExperimentConfig& cfg);

struct RunEntry {
    Ablation ablation;
    std::uint64_t seed = 0;
    int evals_used = 0;
    Termination termination = Termination::BudgetExhausted;
    ArchiveMetrics final_metrics;
    NavOutcome nav;
};

struct Quartiles {
    double q1 = 0.0, median = 0.0, q3 = 0.0;
};

Quartiles quartiles(std::vector<double> values);

struct AggregateReport {
    std::vector<RunEntry> entries; // ablations x seeds, in run order
};

// The four-way comparison: every ablation x `seeds` training runs, each
// followed by `nav_trials` maze trials. Writes ablate_report.json into the
// out dir; per-run artifacts land in their own run dirs as with cmd_train.
AggregateReport cmd_ablate(const ExperimentConfig& cfg);

std::string aggregate_to_json(const AggregateReport& agg);

// Human-readable summary table of an aggregate report.
std::string aggregate_table(const AggregateReport& agg);

} // namespace rfqd
