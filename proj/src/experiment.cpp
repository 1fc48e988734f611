#include "rfqd/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

#include <json.hpp>

namespace rfqd {

namespace fs = std::filesystem;

TrainOutput cmd_train(const ExperimentConfig& cfg)
{
    const Pose start{cfg.zones.center_x, cfg.zones.center_y, 0.0};
    Arena arena(cfg.surrogate_seed, cfg.noise, start,
                substream(cfg.run.seed, "arena-noise"));
    RunResult result = run(cfg.run, arena, cfg.zones);

    const std::string dir = cfg.out_dir + "/" + ablation_name(cfg.ablation) + "_seed" +
                            std::to_string(cfg.run.seed);
    fs::create_directories(dir);
    write_file(dir + "/archive.jsonl", archive_to_jsonl(result.archive));
    write_file(dir + "/metrics.csv", metrics_to_csv(result.report.metrics));
    write_file(dir + "/trace.csv", trace_to_csv(result.report.trace));
    write_file(dir + "/report.json",
               run_report_to_json(result.report, result.archive, cfg.ablation, cfg.run.seed));
    write_file(dir + "/config.cfg", config_to_text(cfg));
    if (cfg.run.dynamics_awareness)
        write_file(dir + "/model.json", result.ensemble.to_json());
    return {std::move(result), dir};
}

NavOutcome run_navigation(const UnstructuredArchive& archive, const MazeMap& maze,
                          const ExperimentConfig& cfg, std::uint64_t run_seed)
{
    NavOutcome out;
    for (int t = 0; t < cfg.nav_trials; ++t) {
        Arena arena(cfg.surrogate_seed, cfg.noise, maze.start(),
                    substream(run_seed, "nav-noise", static_cast<std::uint64_t>(t)));
        TrialReport rep = run_trial(archive, maze, arena);
        if (rep.success)
            ++out.successes;
        out.trials.push_back(std::move(rep));
    }
    return out;
}

NavOutcome cmd_navigate(const std::string& archive_path, const std::string& maze_path,
                        int trials, const ExperimentConfig& cfg)
{
    const UnstructuredArchive archive =
        archive_from_jsonl(read_file(archive_path), cfg.run.archive_l, cfg.run.novelty_k);
    if (archive.empty())
        throw std::runtime_error("navigate: archive '" + archive_path + "' is empty");
    const MazeMap maze = MazeMap::from_json(read_file(maze_path));

    ExperimentConfig c = cfg;
    c.nav_trials = trials;
    NavOutcome out = run_navigation(archive, maze, c, cfg.run.seed);

    const fs::path dir = fs::path(archive_path).parent_path();
    nlohmann::json j;
    j["archive"] = archive_path;
    j["maze"] = maze_path;
    j["successes"] = out.successes;
    j["trials"] = nlohmann::json::array();
    for (std::size_t t = 0; t < out.trials.size(); ++t) {
        j["trials"].push_back(nlohmann::json::parse(trial_report_to_json(out.trials[t])));
        const fs::path trace = dir / ("nav_trace_" + std::to_string(t + 1) + ".csv");
        write_file(trace.string(), nav_trace_to_csv(out.trials[t].trace));
    }
    write_file((dir / "nav_report.json").string(), j.dump(2) + "\n");
    return out;
}

Quartiles quartiles(std::vector<double> values)
{
    if (values.empty())
        return {};
    std::sort(values.begin(), values.end());
    auto at = [&](double p) {
        const double pos = p * static_cast<double>(values.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
        const double frac = pos - static_cast<double>(lo);
        return values[lo] + frac * (values[hi] - values[lo]);
    };
    return {at(0.25), at(0.5), at(0.75)};
}

AggregateReport cmd_ablate(const ExperimentConfig& cfg)
{
    static constexpr Ablation kAll[] = {Ablation::RFQD, Ablation::NoDA, Ablation::NoRecovery,
                                        Ablation::MapElites};
    const MazeMap maze = MazeMap::from_json(read_file(cfg.maze_path));

    AggregateReport agg;
    for (const Ablation ab : kAll) {
        for (int i = 0; i < cfg.seeds; ++i) {
            ExperimentConfig c = cfg;
            c.ablation = ab;
            c.run.seed = cfg.run.seed + static_cast<std::uint64_t>(i);
            c.run.apply(ab);
            TrainOutput t = cmd_train(c);

            RunEntry e;
            e.ablation = ab;
            e.seed = c.run.seed;
            e.evals_used = t.result.report.real_evals_used;
            e.termination = t.result.report.termination;
            e.final_metrics = t.result.archive.metrics();
            e.nav = run_navigation(t.result.archive, maze, c, c.run.seed);
            for (std::size_t k = 0; k < e.nav.trials.size(); ++k) {
                const std::string trace =
                    t.run_dir + "/nav_trace_" + std::to_string(k + 1) + ".csv";
                write_file(trace, nav_trace_to_csv(e.nav.trials[k].trace));
            }
            agg.entries.push_back(std::move(e));
        }
    }

    fs::create_directories(cfg.out_dir);
    write_file(cfg.out_dir + "/ablate_report.json", aggregate_to_json(agg));
    return agg;
}

namespace {

nlohmann::json quartiles_json(const Quartiles& q)
{
    return {{"q1", q.q1}, {"median", q.median}, {"q3", q.q3}};
}

struct Columns {
    std::vector<double> evals, coverage, max_fitness, qd_score, nav_successes, nav_actions;
};

std::map<std::string, Columns> collect(const AggregateReport& agg)
{
    std::map<std::string, Columns> by;
    for (const auto& e : agg.entries) {
        Columns& c = by[ablation_name(e.ablation)];
        c.evals.push_back(e.evals_used);
        c.coverage.push_back(e.final_metrics.coverage);
        c.max_fitness.push_back(e.final_metrics.max_fitness);
        c.qd_score.push_back(e.final_metrics.qd_score);
        c.nav_successes.push_back(e.nav.successes);
        for (const auto& t : e.nav.trials)
            c.nav_actions.push_back(t.n_actions);
    }
    return by;
}

} // namespace

std::string aggregate_to_json(const AggregateReport& agg)
{
    nlohmann::json j;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : agg.entries) {
        nlohmann::json je;
        je["ablation"] = ablation_name(e.ablation);
        je["seed"] = e.seed;
        je["evals_used"] = e.evals_used;
        je["termination"] = termination_name(e.termination);
        je["final"]["archive_size"] = e.final_metrics.size;
        je["final"]["coverage"] = e.final_metrics.coverage;
        je["final"]["max_fitness"] = e.final_metrics.max_fitness;
        je["final"]["qd_score"] = e.final_metrics.qd_score;
        je["nav"]["successes"] = e.nav.successes;
        je["nav"]["trials"] = nlohmann::json::array();
        for (const auto& t : e.nav.trials)
            je["nav"]["trials"].push_back(nlohmann::json::parse(trial_report_to_json(t)));
        j["entries"].push_back(std::move(je));
    }

    for (const auto& [name, c] : collect(agg)) {
        nlohmann::json& js = j["summary"][name];
        js["evals_used"] = quartiles_json(quartiles(c.evals));
        js["coverage"] = quartiles_json(quartiles(c.coverage));
        js["max_fitness"] = quartiles_json(quartiles(c.max_fitness));
        js["qd_score"] = quartiles_json(quartiles(c.qd_score));
        js["nav_successes"] = quartiles_json(quartiles(c.nav_successes));
        js["nav_actions"] = quartiles_json(quartiles(c.nav_actions));
    }
    return j.dump(2) + "\n";
}

std::string aggregate_table(const AggregateReport& agg)
{
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-12s %10s %10s %12s %10s %12s\n", "ablation",
                  "evals", "coverage", "max_fitness", "qd_score", "nav_success");
    out << buf;
    for (const auto& [name, c] : collect(agg)) {
        const Quartiles ev = quartiles(c.evals);
        const Quartiles cov = quartiles(c.coverage);
        const Quartiles mf = quartiles(c.max_fitness);
        const Quartiles qd = quartiles(c.qd_score);
        const Quartiles ns = quartiles(c.nav_successes);
        std::snprintf(buf, sizeof buf, "%-12s %10.1f %10.3f %12.3f %10.2f %12.1f\n",
                      name.c_str(), ev.median, cov.median, mf.median, qd.median, ns.median);
        out << buf;
    }
    out << "(medians across seeds; evals = real evaluations used)\n";
    return out.str();
}

} // namespace rfqd
