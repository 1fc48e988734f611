#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rfqd/experiment.hpp"
#include "rfqd/plot.hpp"

namespace {

rfqd::ExperimentConfig config_or_defaults(const std::string& path)
{
    if (path.empty())
        return rfqd::ExperimentConfig{};
    return rfqd::load_config(path);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"reset-free quality-diversity learning on a seeded surrogate arena"};
    app.require_subcommand(1);

    std::string config_path, ablation, archive_path, maze_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int trials = 5;
    std::vector<std::string> run_dirs;

    CLI::App* train = app.add_subcommand("train", "one training run; artifacts go to a run directory");
    train->add_option("--config", config_path, "config file (key = value)")->required();
    train->add_option("--ablation", ablation, "RFQD, NoDA, NoRecovery or MapElites");
    train->add_option("--seed", seed, "master seed for this run")->each([&](const std::string&) {
        seed_given = true;
    });

    CLI::App* ablate = app.add_subcommand("ablate", "all four ablations x seeds, plus maze trials");
    ablate->add_option("--config", config_path, "config file (key = value)")->required();

    CLI::App* navigate = app.add_subcommand("navigate", "maze trials of a stored archive");
    navigate->add_option("--archive", archive_path, "archive.jsonl from a training run")->required();
    navigate->add_option("--maze", maze_path, "maze map JSON")->required();
    navigate->add_option("--trials", trials, "number of trials");
    navigate->add_option("--config", config_path, "config for arena/noise parameters");
    navigate->add_option("--seed", seed, "seed for trial noise streams")->each(
        [&](const std::string&) { seed_given = true; });

    CLI::App* plot = app.add_subcommand("plot", "render SVG plots for run directories");
    plot->add_option("dirs", run_dirs, "run directories from train/ablate")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) {
            rfqd::ExperimentConfig cfg = rfqd::load_config(config_path);
            if (!ablation.empty()) {
                cfg.ablation = rfqd::ablation_from_name(ablation);
                cfg.run.apply(cfg.ablation);
            }
            if (seed_given)
                cfg.run.seed = seed;
            const rfqd::TrainOutput out = rfqd::cmd_train(cfg);
            std::printf("%s seed %llu: %d real evaluations, %s, archive size %zu -> %s\n",
                        rfqd::ablation_name(cfg.ablation),
                        static_cast<unsigned long long>(cfg.run.seed),
                        out.result.report.real_evals_used,
                        rfqd::termination_name(out.result.report.termination),
                        out.result.archive.size(), out.run_dir.c_str());
        } else if (*ablate) {
            const rfqd::ExperimentConfig cfg = rfqd::load_config(config_path);
            const rfqd::AggregateReport agg = rfqd::cmd_ablate(cfg);
            std::printf("%s", rfqd::aggregate_table(agg).c_str());
            std::printf("report: %s/ablate_report.json\n", cfg.out_dir.c_str());
        } else if (*navigate) {
            rfqd::ExperimentConfig cfg = config_or_defaults(config_path);
            if (seed_given)
                cfg.run.seed = seed;
            const rfqd::NavOutcome out = rfqd::cmd_navigate(archive_path, maze_path, trials, cfg);
            for (std::size_t t = 0; t < out.trials.size(); ++t)
                std::printf("trial %zu: %s after %d actions (%.0f s simulated)\n", t + 1,
                            out.trials[t].success ? "success" : "failure",
                            out.trials[t].n_actions, out.trials[t].elapsed);
            std::printf("%d/%zu trials successful\n", out.successes, out.trials.size());
        } else if (*plot) {
            for (const auto& dir : run_dirs) {
                rfqd::plot_run_dir(dir);
                std::printf("plots written to %s\n", dir.c_str());
            }
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
