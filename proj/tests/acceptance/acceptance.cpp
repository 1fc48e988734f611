// Acceptance gate: ten checks covering the exact unit-level contracts and
// the qualitative orderings the engine is expected to reproduce on the
// seeded surrogate arena. Each check prints one [PASS]/[FAIL] line; the
// process exits nonzero when any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rfqd/experiment.hpp"
#include "support/dijkstra.hpp"
#include "support/gradcheck.hpp"
#include "support/reference_archive.hpp"

using namespace rfqd;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void report(int number, const char* label, bool pass, const std::string& detail, double secs)
{
    std::printf("[%s] %2d. %-42s %s (%.1f s)\n", pass ? "PASS" : "FAIL", number, label,
                detail.c_str(), secs);
    std::fflush(stdout);
    if (!pass)
        ++g_failures;
}

std::string fmt(const char* format, ...)
{
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

double median_of(std::vector<double> v) { return quartiles(std::move(v)).median; }

// ---------------------------------------------------------------------------

void check_safety_margin()
{
    Timer t;
    const ZoneMap z{0.0, 0.0, 0.5, 0.75};
    SafetyState ss;
    ss.beta = 0.3;
    ss.observe(0.5); // center distance, the reference maximum

    const double e_center = epsilon({0.0, 0.0, 0.0}, z, ss);
    const double e_buffer = epsilon({0.2, 0.0, 0.0}, z, ss); // dist == beta
    const double e_outside = epsilon({0.6, 0.0, 0.0}, z, ss);

    const bool pass = std::fabs(e_center - 1.0) <= 1e-12 && std::fabs(e_buffer) <= 1e-12 &&
                      std::fabs(e_outside - (-1.5)) <= 1e-12 && e_outside < 0.0;
    report(1, "safety margin reference values",
           pass, fmt("center %.12f, buffer %.12f, outside %.12f", e_center, e_buffer, e_outside),
           t.seconds());
}

void check_fitness_averaging()
{
    Timer t;
    const auto updated_fitness = [](double f_old, double f_new, double alpha) {
        UnstructuredArchive a(0.05, 5);
        Solution s;
        s.bd = {0.1, 0.0};
        s.fitness = f_old;
        a.try_add(std::move(s));
        update_controller(a, 1, f_new, {0.1, 0.0}, alpha);
        return a.solutions().at(0).fitness;
    };

    const double blended = updated_fitness(-1.0, -0.5, 0.8);
    const double keep_old = updated_fitness(-1.0, -0.5, 0.0);
    const double take_new = updated_fitness(-1.0, -0.5, 1.0);

    const bool pass = std::fabs(blended - (-0.6)) <= 1e-12 && keep_old == -1.0 &&
                      take_new == -0.5;
    report(2, "fitness averaging update", pass,
           fmt("0.8 -> %.12f, 0.0 -> %g, 1.0 -> %g", blended, keep_old, take_new), t.seconds());
}

void check_gradients()
{
    Timer t;
    const int hidden = 8;
    const auto r = testsupport::gradient_check_batches(hidden, /*batches=*/5, /*batch_size=*/16,
                                                       /*seed=*/4711, /*tol=*/1e-4);
    const std::size_t per_net = static_cast<std::size_t>(
        kModelInputs * hidden + hidden + hidden * hidden + hidden + hidden * kModelOutputs +
        kModelOutputs);
    const bool pass = r.n_failed == 0 && r.n_checked == 5 * per_net;
    report(3, "model gradient check", pass,
           fmt("%zu/%zu parameters within 1e-4, max rel err %.2e", r.n_checked - r.n_failed,
               r.n_checked, r.max_rel_error),
           t.seconds());
}

void check_archive_oracle()
{
    Timer t;
    UnstructuredArchive archive(0.05, 5);
    testing::ReferenceArchive ref{0.05, {}};
    Rng rng(912);

    bool ok = true;
    int replaced = 0;
    for (int i = 0; i < 200 && ok; ++i) {
        Solution s;
        s.bd = {rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)};
        s.fitness = -rng.uniform(0.0, M_PI);
        const AddResult got = archive.try_add(s);
        const int want = ref.add(s);
        if (want == -1)
            ok = std::holds_alternative<Added>(got);
        else if (want == -2)
            ok = std::holds_alternative<Rejected>(got);
        else {
            ok = std::holds_alternative<Replaced>(got);
            ++replaced;
        }
        if (!ok)
            break;
        if (archive.size() != ref.members.size()) {
            ok = false;
            break;
        }
        for (std::size_t j = 0; j < ref.members.size(); ++j)
            if (archive.solutions()[j].bd != ref.members[j].bd ||
                archive.solutions()[j].fitness != ref.members[j].fitness)
                ok = false;
    }
    report(4, "archive vs brute-force oracle", ok,
           fmt("200 insertions, %zu members, %d replacements", archive.size(), replaced),
           t.seconds());
}

void check_shortest_paths()
{
    Timer t;
    Rng rng(313);
    const int side = 30;
    const double res = 0.1;
    int compared = 0, solved = 0;
    bool ok = true;

    for (int grid = 0; grid < 20 && ok; ++grid) {
        std::vector<ObstacleRect> rects;
        std::vector<char> blocked_cell(side * side, 0);
        for (int y = 0; y < side; ++y)
            for (int x = 0; x < side; ++x)
                if (!(x == 0 && y == 0) && rng.uniform() < 0.30) {
                    rects.push_back({x * res, y * res, (x + 1) * res, (y + 1) * res});
                    blocked_cell[static_cast<std::size_t>(y * side + x)] = 1;
                }
        const MazeMap m(side * res, side * res, res, 0.0, {0.05, 0.05, 0.0}, {0.05, 0.05},
                        rects);

        for (int trial = 0; trial < 3; ++trial) {
            const Cell start{static_cast<int>(rng.uniform_index(side)),
                             static_cast<int>(rng.uniform_index(side))};
            const Cell goal{static_cast<int>(rng.uniform_index(side)),
                            static_cast<int>(rng.uniform_index(side))};
            const auto path = astar(m, start, goal);
            const auto oracle = testing::dijkstra_pair(m, start, goal);
            ++compared;
            if (path.has_value() != oracle.has_value()) {
                ok = false;
                break;
            }
            if (path) {
                ++solved;
                if (!(testing::count_steps(*path) == *oracle)) {
                    ok = false;
                    break;
                }
            }
        }
    }
    report(5, "shortest-path cost optimality", ok && solved >= 20,
           fmt("20 grids, %d queries, %d solved, all costs matched", compared, solved),
           t.seconds());
}

void check_model_learnability()
{
    Timer t;
    const ExperimentConfig defaults;
    const std::uint64_t data_seed = 606;

    Arena arena(defaults.surrogate_seed, defaults.noise, {0.0, 0.0, 0.0},
                substream(data_seed, "arena-noise"));
    Rng genotype_rng = substream(data_seed, "init-genotypes");
    ReplayBuffer buffer;
    for (int i = 0; i < 500; ++i)
        buffer.push_episode(arena.execute(Genotype::random(genotype_rng)));

    Ensemble ensemble(EnsembleConfig{4, 64}, data_seed);
    ensemble.train(buffer, TrainSettings{});

    const Surrogate& world = arena.surrogate();
    const TwistSource twist = [&world](const Genotype& g, int k) { return world.twist(g, k); };
    Rng holdout_rng = substream(data_seed, "holdout");
    std::vector<double> errors;
    for (int i = 0; i < 50; ++i) {
        const Genotype g = Genotype::random(holdout_rng);
        const EpisodeResult real =
            execute_episode({0.0, 0.0, 0.0}, g, twist, nullptr, defaults.noise);
        double bx = 0.0, by = 0.0;
        for (int mem = 0; mem < ensemble.members(); ++mem) {
            const ImaginedOutcome out = ensemble.imagine_rollout(g, mem);
            bx += out.bd[0];
            by += out.bd[1];
        }
        bx /= ensemble.members();
        by /= ensemble.members();
        errors.push_back(std::hypot(bx - real.bd[0], by - real.bd[1]));
    }
    const double med = median_of(errors);
    report(6, "learned-model displacement accuracy", med < 0.10,
           fmt("median error %.4f m over 50 held-out gaits (target 0.05, limit 0.10)%s", med,
               med < 0.05 ? "" : " [above target]"),
           t.seconds());
}

// Shared run set for the three ordering checks: every ablation x 4 seeds at
// eval_budget 600, each archive followed by 5 maze trials.
AggregateReport run_comparison(const std::string& out_dir)
{
    fs::remove_all(out_dir);
    fs::create_directories(out_dir);

    ExperimentConfig cfg;
    cfg.run.eval_budget = 600;
    cfg.seeds = 4;
    cfg.nav_trials = 5;
    cfg.out_dir = out_dir;
    const MazeMap maze(2.0, 2.0, 0.05, 0.1, {0.25, 0.25, 0.0}, {1.75, 1.75},
                       {{0.0, 0.65, 1.4, 0.75}, {0.6, 1.25, 2.0, 1.35}});
    cfg.maze_path = out_dir + "/maze.json";
    write_file(cfg.maze_path, maze.to_json());
    return cmd_ablate(cfg);
}

std::map<Ablation, std::vector<RunEntry>> by_ablation(const AggregateReport& agg)
{
    std::map<Ablation, std::vector<RunEntry>> out;
    for (const auto& e : agg.entries)
        out[e.ablation].push_back(e);
    return out;
}

void check_run_length_ordering(const std::map<Ablation, std::vector<RunEntry>>& runs)
{
    Timer t;
    std::vector<double> with_recovery, without_recovery;
    int full_rfqd = 0, full_noda = 0;
    for (const auto& e : runs.at(Ablation::RFQD)) {
        with_recovery.push_back(e.evals_used);
        full_rfqd += e.evals_used == 600;
    }
    for (const auto& e : runs.at(Ablation::NoDA)) {
        with_recovery.push_back(e.evals_used);
        full_noda += e.evals_used == 600;
    }
    for (const auto& e : runs.at(Ablation::NoRecovery))
        without_recovery.push_back(e.evals_used);
    for (const auto& e : runs.at(Ablation::MapElites))
        without_recovery.push_back(e.evals_used);

    const double med_rec = median_of(with_recovery);
    const double med_no = median_of(without_recovery);
    const bool pass = med_rec >= 3.0 * med_no && full_rfqd >= 3 && full_noda >= 3;
    report(7, "recovery extends run length", pass,
           fmt("median evals %g vs %g without recovery; full budget on %d+%d of 4+4 seeds",
               med_rec, med_no, full_rfqd, full_noda),
           t.seconds());
}

void check_quality_ordering(const std::map<Ablation, std::vector<RunEntry>>& runs)
{
    Timer t;
    const auto& rfqd = runs.at(Ablation::RFQD);
    const auto& norec = runs.at(Ablation::NoRecovery);
    const auto& mapel = runs.at(Ablation::MapElites);
    int dominated = 0;
    for (std::size_t i = 0; i < rfqd.size(); ++i) {
        const auto& m = rfqd[i].final_metrics;
        const bool over_norec = m.qd_score >= norec[i].final_metrics.qd_score &&
                                m.coverage >= norec[i].final_metrics.coverage;
        const bool over_mapel = m.qd_score >= mapel[i].final_metrics.qd_score &&
                                m.coverage >= mapel[i].final_metrics.coverage;
        dominated += over_norec && over_mapel;
    }

    std::vector<double> rfqd_evals, noda_evals;
    for (const auto& e : rfqd)
        rfqd_evals.push_back(e.evals_used);
    for (const auto& e : runs.at(Ablation::NoDA))
        noda_evals.push_back(e.evals_used);
    const bool fewer_evals = median_of(rfqd_evals) <= median_of(noda_evals);

    const bool pass = dominated >= 3 && fewer_evals;
    report(8, "recovery preserves archive quality", pass,
           fmt("qd+coverage dominate both no-recovery variants on %d/4 seeds; "
               "median evals %g vs %g",
               dominated, median_of(rfqd_evals), median_of(noda_evals)),
           t.seconds());
}

void check_navigation_ordering(const std::map<Ablation, std::vector<RunEntry>>& runs)
{
    Timer t;
    const auto successes = [&](Ablation a) {
        std::vector<double> out;
        for (const auto& e : runs.at(a))
            out.push_back(e.nav.successes);
        return median_of(out);
    };
    const double rfqd = successes(Ablation::RFQD);
    const double noda = successes(Ablation::NoDA);
    const double norec = successes(Ablation::NoRecovery);
    const double mapel = successes(Ablation::MapElites);

    const double recovery_floor = std::min(rfqd, noda);
    const bool pass = recovery_floor >= 4.0 && norec < recovery_floor && mapel < recovery_floor;
    report(9, "maze navigation success ordering", pass,
           fmt("median successes of 5: %g / %g with recovery, %g / %g without", rfqd, noda,
               norec, mapel),
           t.seconds());
}

void check_determinism(const std::string& first_dir)
{
    Timer t;
    const std::string repeat_dir = "acceptance_repeat";
    fs::remove_all(repeat_dir);
    fs::create_directories(repeat_dir);

    ExperimentConfig cfg;
    cfg.run.eval_budget = 600;
    cfg.ablation = Ablation::NoDA;
    cfg.run.apply(cfg.ablation);
    cfg.run.seed = 1;
    cfg.out_dir = repeat_dir;
    const TrainOutput out = cmd_train(cfg);

    bool pass = true;
    std::string mismatched;
    for (const char* name : {"archive.jsonl", "metrics.csv", "trace.csv", "report.json"}) {
        const std::string a = read_file(first_dir + "/NoDA_seed1/" + std::string(name));
        const std::string b = read_file(out.run_dir + "/" + std::string(name));
        if (a != b) {
            pass = false;
            mismatched += std::string(" ") + name;
        }
    }

    const MazeMap maze(2.0, 2.0, 0.05, 0.1, {0.25, 0.25, 0.0}, {1.75, 1.75},
                       {{0.0, 0.65, 1.4, 0.75}, {0.6, 1.25, 2.0, 1.35}});
    const std::string maze_path = repeat_dir + "/maze.json";
    write_file(maze_path, maze.to_json());
    cmd_navigate(out.run_dir + "/archive.jsonl", maze_path, 5, cfg);
    const std::string nav_first = read_file(out.run_dir + "/nav_report.json");
    cmd_navigate(out.run_dir + "/archive.jsonl", maze_path, 5, cfg);
    if (read_file(out.run_dir + "/nav_report.json") != nav_first) {
        pass = false;
        mismatched += " nav_report.json";
    }

    report(10, "byte-identical reruns", pass,
           pass ? "train + navigate artifacts reproduced exactly"
                : "mismatch in" + mismatched,
           t.seconds());
}

} // namespace

int main()
{
    Timer total;
    std::printf("acceptance checks (surrogate world seed %llu)\n",
                static_cast<unsigned long long>(ExperimentConfig{}.surrogate_seed));

    check_safety_margin();
    check_fitness_averaging();
    check_gradients();
    check_archive_oracle();
    check_shortest_paths();
    check_model_learnability();

    const std::string out_dir = "acceptance_runs";
    const AggregateReport agg = run_comparison(out_dir);
    const auto runs = by_ablation(agg);
    check_run_length_ordering(runs);
    check_quality_ordering(runs);
    check_navigation_ordering(runs);
    check_determinism(out_dir);

    std::printf("%d/10 checks passed (%.0f s total)\n", 10 - g_failures, total.seconds());
    return g_failures == 0 ? 0 : 1;
}
