#include "rfqd/loop.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rfqd {

const char* ablation_name(Ablation a)
{
    switch (a) {
    case Ablation::RFQD: return "RFQD";
    case Ablation::NoDA: return "NoDA";
    case Ablation::NoRecovery: return "NoRecovery";
    case Ablation::MapElites: return "MapElites";
    }
    return "?";
}

Ablation ablation_from_name(const std::string& name)
{
    if (name == "RFQD") return Ablation::RFQD;
    if (name == "NoDA") return Ablation::NoDA;
    if (name == "NoRecovery") return Ablation::NoRecovery;
    if (name == "MapElites") return Ablation::MapElites;
    throw std::invalid_argument("unknown ablation: " + name +
                                " (expected RFQD, NoDA, NoRecovery or MapElites)");
}

const char* termination_name(Termination t)
{
    switch (t) {
    case Termination::BudgetExhausted: return "BudgetExhausted";
    case Termination::LeftRecoveryZone: return "LeftRecoveryZone";
    case Termination::InitFailure: return "InitFailure";
    }
    return "?";
}

void imagination_phase(const RolloutFn& rollout, int members, UnstructuredArchive& imagined,
                       int iters, const VariationParams& vp, Rng& var_rng, Rng& member_rng)
{
    for (int it = 0; it < iters; ++it) {
        if (imagined.empty())
            return; // nothing to select from; the caller seeds before calling
        const auto& pool = imagined.solutions();
        const Genotype& x = pool[var_rng.uniform_index(pool.size())].genotype;
        const Genotype& y = pool[var_rng.uniform_index(pool.size())].genotype;
        const Genotype child = iso_line_dd(x, y, vp, var_rng);
        const int member = static_cast<int>(member_rng.uniform_index(static_cast<std::size_t>(members)));
        const ImaginedOutcome out = rollout(child, member);
        Solution s;
        s.genotype = child;
        s.bd = out.bd;
        s.fitness = out.fitness;
        imagined.try_add(std::move(s));
    }
}

std::vector<Solution> select_for_execution(const UnstructuredArchive& imagined,
                                           const UnstructuredArchive& real,
                                           const std::unordered_set<std::uint64_t>& seeded_ids,
                                           const Pose& pose, const ZoneMap& zones, int batch)
{
    struct Ranked {
        const Solution* sol;
        double novelty;
    };
    std::vector<Ranked> safe;
    for (const auto& s : imagined.solutions()) {
        if (seeded_ids.contains(s.id))
            continue; // already executed for real at some point
        const auto arrival = predicted_arrival(pose, s.bd);
        if (dist_to_unsafe({arrival[0], arrival[1], 0.0}, zones) <= 0.0)
            continue;
        safe.push_back({&s, real.novelty(s.bd)});
    }
    std::stable_sort(safe.begin(), safe.end(),
                     [](const Ranked& a, const Ranked& b) { return a.novelty > b.novelty; });
    std::vector<Solution> out;
    const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(std::max(0, batch)),
                                                safe.size());
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(*safe[i].sol);
    return out;
}

const Solution* recovery_step(const UnstructuredArchive& archive, const Pose& pose,
                              const ZoneMap& zones)
{
    const Solution* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& s : archive.solutions()) {
        const auto arrival = predicted_arrival(pose, s.bd);
        const double dx = arrival[0] - zones.center_x, dy = arrival[1] - zones.center_y;
        const double d = std::sqrt(dx * dx + dy * dy);
        if (d < best_d) {
            best_d = d;
            best = &s;
        }
    }
    return best;
}

void update_controller(UnstructuredArchive& archive, std::uint64_t id, double f_new,
                       const std::array<double, 2>& bd_new, double alpha)
{
    Solution s = archive.remove(id);
    s.fitness = (1.0 - alpha) * s.fitness + alpha * f_new;
    s.bd[0] = (1.0 - alpha) * s.bd[0] + alpha * bd_new[0];
    s.bd[1] = (1.0 - alpha) * s.bd[1] + alpha * bd_new[1];
    s.n_evals += 1;
    archive.try_add(std::move(s));
}

namespace {

// Everything one real execution touches: buffer, safety, report bookkeeping.
struct LoopState {
    RunReport report;
    ReplayBuffer buffer;
    SafetyState safety;
    Pose pose;
    int evals = 0;

    EpisodeResult execute(const WorldFn& world, const Genotype& g, const ZoneMap& zones)
    {
        EpisodeResult r = world(g, &zones);
        ++evals;
        buffer.push_episode(r);
        for (int k = 0; k < static_cast<int>(r.pose_trace.size()); ++k)
            report.trace.push_back({evals, k, r.pose_trace[static_cast<std::size_t>(k)]});
        safety.observe(dist_to_unsafe(r.final_pose, zones));
        pose = r.final_pose;
        return r;
    }

    void record_metrics(const UnstructuredArchive& archive)
    {
        const ArchiveMetrics m = archive.metrics();
        report.metrics.push_back({evals, m.size, m.coverage, m.max_fitness, m.qd_score});
    }
};

} // namespace

RunResult run(const RunConfig& cfg, const WorldFn& world, const Pose& start, const ZoneMap& zones)
{
    UnstructuredArchive archive(cfg.archive_l, cfg.novelty_k);
    Ensemble ensemble(cfg.ensemble, cfg.seed);
    Rng init_rng = substream(cfg.seed, "init-genotypes");
    Rng var_rng = substream(cfg.seed, "variation");
    Rng member_rng = substream(cfg.seed, "member-choice");

    LoopState st;
    st.safety.beta = cfg.beta;
    st.pose = start;
    st.safety.observe(dist_to_unsafe(start, zones));

    auto finish = [&](Termination t) {
        st.report.termination = t;
        st.report.real_evals_used = st.evals;
        return RunResult{std::move(st.report), std::move(archive), std::move(ensemble)};
    };

    // Initialisation: random controllers, no recovery, executed back to back.
    for (int i = 0; i < cfg.init_evals; ++i) {
        if (st.evals >= cfg.eval_budget)
            return finish(Termination::BudgetExhausted);
        const Genotype g = Genotype::random(init_rng);
        const EpisodeResult r = st.execute(world, g, zones);
        archive.try_add({0, g, r.bd, r.fitness, 1});
        st.record_metrics(archive);
        if (zone_of(st.pose, zones) == Zone::Outside)
            return finish(Termination::InitFailure);
    }

    int last_train_evals = 0;
    bool in_recovery = false;

    while (true) {
        if (st.evals >= cfg.eval_budget)
            return finish(Termination::BudgetExhausted);
        if (zone_of(st.pose, zones) == Zone::Outside)
            return finish(Termination::LeftRecoveryZone);

        if (cfg.recovery_enabled && (in_recovery || zone_of(st.pose, zones) == Zone::Recovery)) {
            in_recovery = true;
            const Solution* pick = recovery_step(archive, st.pose, zones);
            if (pick == nullptr)
                return finish(Termination::InitFailure); // nothing known to drive back with
            const std::uint64_t id = pick->id;
            const Genotype g = pick->genotype;
            const EpisodeResult r = st.execute(world, g, zones);
            update_controller(archive, id, r.fitness, r.bd, cfg.alpha);
            st.record_metrics(archive);
            if (zone_of(st.pose, zones) != Zone::Outside && epsilon(st.pose, zones, st.safety) > 0.0)
                in_recovery = false; // back inside with the beta buffer restored
            continue;
        }

        std::vector<Genotype> batch;
        if (cfg.dynamics_awareness) {
            if (!ensemble.trained() || st.evals - last_train_evals >= cfg.train_cadence) {
                ensemble.train(st.buffer, cfg.train);
                last_train_evals = st.evals;
            }

            UnstructuredArchive imagined(cfg.archive_l, cfg.novelty_k);
            std::unordered_set<std::uint64_t> seeded;
            for (const auto& s : archive.solutions()) {
                imagined.restore(s);
                seeded.insert(s.id);
            }
            RolloutFn rollout = [&](const Genotype& g, int member) {
                return ensemble.imagine_rollout(g, member);
            };
            imagination_phase(rollout, ensemble.members(), imagined, cfg.imagination_iters,
                              cfg.variation, var_rng, member_rng);
            const auto picks = select_for_execution(imagined, archive, seeded, st.pose, zones,
                                                    cfg.batch_per_cycle);
            for (const auto& s : picks)
                batch.push_back(s.genotype);
            if (batch.empty())
                batch.push_back(Genotype::random(init_rng)); // keep the loop alive
        } else {
            const auto& pool = archive.solutions();
            if (pool.empty()) {
                batch.push_back(Genotype::random(init_rng));
            } else {
                for (int j = 0; j < cfg.batch_per_cycle; ++j) {
                    const Genotype& x = pool[var_rng.uniform_index(pool.size())].genotype;
                    const Genotype& y = pool[var_rng.uniform_index(pool.size())].genotype;
                    batch.push_back(iso_line_dd(x, y, cfg.variation, var_rng));
                }
            }
        }

        for (const Genotype& g : batch) {
            if (st.evals >= cfg.eval_budget)
                return finish(Termination::BudgetExhausted);
            const EpisodeResult r = st.execute(world, g, zones);
            archive.try_add({0, g, r.bd, r.fitness, 1});
            st.record_metrics(archive);
            if (zone_of(st.pose, zones) != Zone::Exploration)
                break; // abandon the batch; the loop head decides what next
        }
    }
}

RunResult run(const RunConfig& cfg, Arena& arena, const ZoneMap& zones)
{
    const Pose start = arena.pose();
    return run(
        cfg, [&arena](const Genotype& g, const ZoneMap* z) { return arena.execute(g, z); },
        start, zones);
}

} // namespace rfqd
