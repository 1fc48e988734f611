#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <variant>

#include "rfqd/experiment.hpp"
#include "rfqd/plot.hpp"

namespace py = pybind11;
using namespace rfqd;

namespace {

// python-friendly view of the archive insertion verdict
struct AddOutcome {
    std::string status; // "added" | "replaced" | "rejected"
    std::optional<std::uint64_t> old_id;
};

AddOutcome to_outcome(const AddResult& r)
{
    if (std::holds_alternative<Added>(r))
        return {"added", std::nullopt};
    if (const auto* rep = std::get_if<Replaced>(&r))
        return {"replaced", rep->old_id};
    return {"rejected", std::nullopt};
}

std::string pose_repr(const Pose& p)
{
    std::ostringstream out;
    out << "Pose(x=" << p.x << ", y=" << p.y << ", theta=" << p.theta << ")";
    return out.str();
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Reset-free quality-diversity learning in a persistent arena";

    m.attr("GENOTYPE_SIZE") = kGenotypeSize;
    m.attr("SUBSTEPS") = kSubsteps;
    m.attr("SUBSTEP_SECONDS") = kSubstepSeconds;
    m.attr("COVERAGE_GRID_SIDE") = kCoverageGridSide;
    m.attr("GOAL_RADIUS") = kGoalRadius;
    m.attr("MAX_ACTIONS") = kMaxActions;
    m.attr("LOOKAHEAD") = kLookahead;

    // --- randomness ------------------------------------------------------
    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("uniform", py::overload_cast<>(&Rng::uniform))
        .def("uniform", py::overload_cast<double, double>(&Rng::uniform), py::arg("lo"),
             py::arg("hi"))
        .def("normal", py::overload_cast<>(&Rng::normal))
        .def("normal", py::overload_cast<double, double>(&Rng::normal), py::arg("mean"),
             py::arg("stddev"))
        .def("uniform_index", &Rng::uniform_index, py::arg("n"))
        .def("raw", &Rng::raw);

    m.def("substream_seed", &substream_seed, py::arg("master"), py::arg("name"),
          py::arg("index") = 0,
          "Independent sub-stream seed derived from a master seed and a stream name");
    m.def(
        "substream",
        [](std::uint64_t master, const std::string& name, std::uint64_t index) {
            return substream(master, name, index);
        },
        py::arg("master"), py::arg("name"), py::arg("index") = 0);

    // --- genotype --------------------------------------------------------
    py::class_<Genotype>(m, "Genotype")
        .def(py::init<>())
        .def(py::init<const std::array<double, kGenotypeSize>&>(), py::arg("values"),
             "Build from 24 gait parameters, each clamped to [0, 1]")
        .def_static("random", &Genotype::random, py::arg("rng"))
        .def_property_readonly("values", &Genotype::values)
        .def("__getitem__",
             [](const Genotype& g, std::size_t i) {
                 if (i >= kGenotypeSize)
                     throw py::index_error();
                 return g[i];
             })
        .def("__len__", [](const Genotype&) { return kGenotypeSize; })
        .def("__eq__", &Genotype::operator==, py::is_operator())
        .def("__repr__", [](const Genotype& g) {
            std::ostringstream out;
            out << "Genotype([" << g[0] << ", " << g[1] << ", ...])";
            return out.str();
        });

    // --- world types -----------------------------------------------------
    py::class_<Pose>(m, "Pose")
        .def(py::init<>())
        .def(py::init([](double x, double y, double theta) { return Pose{x, y, theta}; }),
             py::arg("x") = 0.0, py::arg("y") = 0.0, py::arg("theta") = 0.0)
        .def_readwrite("x", &Pose::x)
        .def_readwrite("y", &Pose::y)
        .def_readwrite("theta", &Pose::theta)
        .def("__repr__", &pose_repr);

    py::class_<Twist>(m, "Twist")
        .def(py::init<>())
        .def_readwrite("vx", &Twist::vx)
        .def_readwrite("vy", &Twist::vy)
        .def_readwrite("omega", &Twist::omega);

    py::class_<NoiseLevels>(m, "NoiseLevels")
        .def(py::init<>())
        .def(py::init([](double sigma_v, double sigma_omega) {
                 return NoiseLevels{sigma_v, sigma_omega};
             }),
             py::arg("sigma_v") = 0.005, py::arg("sigma_omega") = 0.02)
        .def_readwrite("sigma_v", &NoiseLevels::sigma_v)
        .def_readwrite("sigma_omega", &NoiseLevels::sigma_omega);

    py::class_<ZoneMap>(m, "ZoneMap")
        .def(py::init<>())
        .def(py::init([](double cx, double cy, double re, double rr) {
                 return ZoneMap{cx, cy, re, rr};
             }),
             py::arg("center_x") = 0.0, py::arg("center_y") = 0.0,
             py::arg("r_exploration") = 0.5, py::arg("r_recovery") = 0.75)
        .def_readwrite("center_x", &ZoneMap::center_x)
        .def_readwrite("center_y", &ZoneMap::center_y)
        .def_readwrite("r_exploration", &ZoneMap::r_exploration)
        .def_readwrite("r_recovery", &ZoneMap::r_recovery);

    py::enum_<Zone>(m, "Zone")
        .value("Exploration", Zone::Exploration)
        .value("Recovery", Zone::Recovery)
        .value("Outside", Zone::Outside);
    m.def("zone_of", &zone_of, py::arg("pose"), py::arg("zones"));

    py::class_<Transition>(m, "Transition")
        .def(py::init<>())
        .def_readwrite("state", &Transition::state)
        .def_readwrite("phase", &Transition::phase)
        .def_readwrite("action", &Transition::action)
        .def_readwrite("next_state", &Transition::next_state);

    py::class_<EpisodeResult>(m, "EpisodeResult")
        .def_readonly("start_pose", &EpisodeResult::start_pose)
        .def_readonly("final_pose", &EpisodeResult::final_pose)
        .def_readonly("bd", &EpisodeResult::bd)
        .def_readonly("fitness", &EpisodeResult::fitness)
        .def_readonly("transitions", &EpisodeResult::transitions)
        .def_readonly("pose_trace", &EpisodeResult::pose_trace)
        .def_readonly("zone_events", &EpisodeResult::zone_events);

    py::class_<Surrogate>(m, "Surrogate")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("twist", &Surrogate::twist, py::arg("genotype"), py::arg("substep"))
        .def_property_readonly("seed", &Surrogate::seed);

    m.def("arc_fitness", &arc_fitness, py::arg("bd"), py::arg("theta_rel"));
    m.def("relative_state", &relative_state, py::arg("pose"), py::arg("origin"));
    m.def("predicted_arrival", &predicted_arrival, py::arg("pose"), py::arg("bd"));
    m.def(
        "execute_episode",
        [](const Pose& start, const Genotype& g, const TwistSource& twist,
           std::optional<Rng*> noise_rng, const NoiseLevels& noise,
           std::optional<ZoneMap> zones) {
            return execute_episode(start, g, twist, noise_rng ? *noise_rng : nullptr, noise,
                                   zones ? &*zones : nullptr);
        },
        py::arg("start"), py::arg("genotype"), py::arg("twist"),
        py::arg("noise_rng") = py::none(), py::arg("noise") = NoiseLevels{},
        py::arg("zones") = py::none(),
        "Integrate one open-loop episode of a twist source; noise_rng=None disables noise");

    py::class_<Arena>(m, "Arena")
        .def(py::init([](std::uint64_t surrogate_seed, const NoiseLevels& noise,
                         const Pose& start, std::uint64_t noise_seed, bool noise_enabled) {
                 return Arena(surrogate_seed, noise, start, Rng(noise_seed), noise_enabled);
             }),
             py::arg("surrogate_seed"), py::arg("noise"), py::arg("start"),
             py::arg("noise_seed"), py::arg("noise_enabled") = true)
        .def(
            "execute",
            [](Arena& a, const Genotype& g, std::optional<ZoneMap> zones) {
                return a.execute(g, zones ? &*zones : nullptr);
            },
            py::arg("genotype"), py::arg("zones") = py::none())
        .def_property_readonly("pose", &Arena::pose)
        .def_property_readonly("surrogate", &Arena::surrogate,
                               py::return_value_policy::reference_internal)
        .def_property_readonly("noise", &Arena::noise,
                               py::return_value_policy::reference_internal);

    // --- archive ---------------------------------------------------------
    py::class_<Solution>(m, "Solution")
        .def(py::init<>())
        .def_readwrite("id", &Solution::id)
        .def_readwrite("genotype", &Solution::genotype)
        .def_readwrite("bd", &Solution::bd)
        .def_readwrite("fitness", &Solution::fitness)
        .def_readwrite("n_evals", &Solution::n_evals)
        .def("__repr__", [](const Solution& s) {
            std::ostringstream out;
            out << "Solution(id=" << s.id << ", bd=[" << s.bd[0] << ", " << s.bd[1]
                << "], fitness=" << s.fitness << ")";
            return out.str();
        });

    py::class_<AddOutcome>(m, "AddOutcome")
        .def_readonly("status", &AddOutcome::status)
        .def_readonly("old_id", &AddOutcome::old_id)
        .def("__repr__", [](const AddOutcome& o) { return "AddOutcome(" + o.status + ")"; });

    py::class_<ArchiveMetrics>(m, "ArchiveMetrics")
        .def_readonly("size", &ArchiveMetrics::size)
        .def_readonly("coverage", &ArchiveMetrics::coverage)
        .def_readonly("max_fitness", &ArchiveMetrics::max_fitness)
        .def_readonly("qd_score", &ArchiveMetrics::qd_score);

    py::class_<UnstructuredArchive>(m, "UnstructuredArchive")
        .def(py::init<double, int>(), py::arg("l"), py::arg("k"))
        .def(
            "try_add", [](UnstructuredArchive& a, Solution s) { return to_outcome(a.try_add(std::move(s))); },
            py::arg("solution"))
        .def("novelty",
             py::overload_cast<const std::array<double, 2>&, int>(&UnstructuredArchive::novelty,
                                                                  py::const_),
             py::arg("bd"), py::arg("k"))
        .def("novelty",
             py::overload_cast<const std::array<double, 2>&>(&UnstructuredArchive::novelty,
                                                             py::const_),
             py::arg("bd"))
        .def("remove", &UnstructuredArchive::remove, py::arg("id"))
        .def("metrics", &UnstructuredArchive::metrics)
        .def_property_readonly("solutions",
                               [](const UnstructuredArchive& a) { return a.solutions(); })
        .def("__len__", &UnstructuredArchive::size)
        .def_property_readonly("threshold", &UnstructuredArchive::threshold)
        .def_property_readonly("neighbour_count", &UnstructuredArchive::neighbour_count)
        .def(
            "find",
            [](const UnstructuredArchive& a, std::uint64_t id) -> std::optional<Solution> {
                const Solution* s = a.find(id);
                return s ? std::optional<Solution>(*s) : std::nullopt;
            },
            py::arg("id"))
        .def("restore", &UnstructuredArchive::restore, py::arg("solution"));

    m.def("coverage_cell", &coverage_cell, py::arg("bd"));
    m.def("archive_to_jsonl", &archive_to_jsonl, py::arg("archive"));
    m.def("archive_from_jsonl", &archive_from_jsonl, py::arg("text"), py::arg("l"),
          py::arg("k"));

    // --- variation -------------------------------------------------------
    py::class_<VariationParams>(m, "VariationParams")
        .def(py::init<>())
        .def(py::init([](double sigma_iso, double sigma_line) {
                 return VariationParams{sigma_iso, sigma_line};
             }),
             py::arg("sigma_iso") = 0.01, py::arg("sigma_line") = 0.2)
        .def_readwrite("sigma_iso", &VariationParams::sigma_iso)
        .def_readwrite("sigma_line", &VariationParams::sigma_line);
    m.def("iso_line_dd", &iso_line_dd, py::arg("x"), py::arg("y"), py::arg("params"),
          py::arg("rng"));

    // --- dynamics model --------------------------------------------------
    m.def("model_input", &model_input, py::arg("transition"));
    m.def("model_target", &model_target, py::arg("transition"));

    py::class_<ReplayBuffer>(m, "ReplayBuffer")
        .def(py::init<std::size_t>(), py::arg("capacity") = 100000)
        .def("push", &ReplayBuffer::push, py::arg("transition"))
        .def("push_episode", &ReplayBuffer::push_episode, py::arg("episode"))
        .def("__len__", &ReplayBuffer::size)
        .def("__getitem__",
             [](const ReplayBuffer& b, std::size_t i) {
                 if (i >= b.size())
                     throw py::index_error();
                 return b[i];
             })
        .def_property_readonly("capacity", &ReplayBuffer::capacity);

    py::class_<TrainSettings>(m, "TrainSettings")
        .def(py::init<>())
        .def_readwrite("epochs", &TrainSettings::epochs)
        .def_readwrite("learning_rate", &TrainSettings::learning_rate)
        .def_readwrite("minibatch", &TrainSettings::minibatch);

    py::class_<MemberTrainLog>(m, "MemberTrainLog")
        .def_readonly("epoch_loss", &MemberTrainLog::epoch_loss)
        .def_readonly("final_loss", &MemberTrainLog::final_loss);

    py::class_<TrainReport>(m, "TrainReport")
        .def_readonly("members", &TrainReport::members)
        .def_readonly("skipped_empty_buffer", &TrainReport::skipped_empty_buffer);

    py::class_<ImaginedOutcome>(m, "ImaginedOutcome")
        .def_readonly("bd", &ImaginedOutcome::bd)
        .def_readonly("fitness", &ImaginedOutcome::fitness)
        .def_readonly("final_state", &ImaginedOutcome::final_state);

    py::class_<EnsembleConfig>(m, "EnsembleConfig")
        .def(py::init<>())
        .def(py::init([](int members, int hidden) {
                 return EnsembleConfig{members, hidden};
             }),
             py::arg("members") = 4, py::arg("hidden") = 64)
        .def_readwrite("members", &EnsembleConfig::members)
        .def_readwrite("hidden", &EnsembleConfig::hidden);

    py::class_<ProbabilisticNet::Prediction>(m, "Prediction")
        .def_readonly("mean", &ProbabilisticNet::Prediction::mean)
        .def_readonly("logvar", &ProbabilisticNet::Prediction::logvar);

    py::class_<Ensemble>(m, "Ensemble")
        .def(py::init<const EnsembleConfig&, std::uint64_t>(), py::arg("config"),
             py::arg("seed"))
        .def("train", &Ensemble::train, py::arg("buffer"), py::arg("settings"))
        .def("predict", &Ensemble::predict, py::arg("member"), py::arg("input"))
        .def("imagine_rollout", &Ensemble::imagine_rollout, py::arg("genotype"),
             py::arg("member"))
        .def("disagreement", &Ensemble::disagreement, py::arg("genotype"))
        .def_property_readonly("members", &Ensemble::members)
        .def_property_readonly("hidden", &Ensemble::hidden)
        .def_property_readonly("trained", &Ensemble::trained)
        .def_property_readonly("seed", &Ensemble::seed)
        .def("to_json", &Ensemble::to_json)
        .def_static("from_json", &Ensemble::from_json, py::arg("text"));

    // --- safety ----------------------------------------------------------
    py::class_<SafetyState>(m, "SafetyState")
        .def(py::init<>())
        .def_readwrite("beta", &SafetyState::beta)
        .def_readwrite("running_max_dist", &SafetyState::running_max_dist)
        .def("observe", &SafetyState::observe, py::arg("dist"));
    m.def("dist_to_unsafe", &dist_to_unsafe, py::arg("pose"), py::arg("zones"));
    m.def("epsilon", &epsilon, py::arg("pose"), py::arg("zones"), py::arg("state"));

    // --- learning loop ---------------------------------------------------
    py::enum_<Ablation>(m, "Ablation")
        .value("RFQD", Ablation::RFQD)
        .value("NoDA", Ablation::NoDA)
        .value("NoRecovery", Ablation::NoRecovery)
        .value("MapElites", Ablation::MapElites);
    m.def("ablation_name", &ablation_name, py::arg("ablation"));
    m.def("ablation_from_name", &ablation_from_name, py::arg("name"));

    py::enum_<Termination>(m, "Termination")
        .value("BudgetExhausted", Termination::BudgetExhausted)
        .value("LeftRecoveryZone", Termination::LeftRecoveryZone)
        .value("InitFailure", Termination::InitFailure);
    m.def("termination_name", &termination_name, py::arg("termination"));

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("dynamics_awareness", &RunConfig::dynamics_awareness)
        .def_readwrite("recovery_enabled", &RunConfig::recovery_enabled)
        .def_readwrite("eval_budget", &RunConfig::eval_budget)
        .def_readwrite("init_evals", &RunConfig::init_evals)
        .def_readwrite("train_cadence", &RunConfig::train_cadence)
        .def_readwrite("imagination_iters", &RunConfig::imagination_iters)
        .def_readwrite("batch_per_cycle", &RunConfig::batch_per_cycle)
        .def_readwrite("alpha", &RunConfig::alpha)
        .def_readwrite("beta", &RunConfig::beta)
        .def_readwrite("archive_l", &RunConfig::archive_l)
        .def_readwrite("novelty_k", &RunConfig::novelty_k)
        .def_readwrite("variation", &RunConfig::variation)
        .def_readwrite("ensemble", &RunConfig::ensemble)
        .def_readwrite("train", &RunConfig::train)
        .def_readwrite("seed", &RunConfig::seed)
        .def("apply", &RunConfig::apply, py::arg("ablation"),
             "Set the dynamics-awareness and recovery flags for an ablation");

    py::class_<MetricRow>(m, "MetricRow")
        .def_readonly("eval", &MetricRow::eval)
        .def_readonly("archive_size", &MetricRow::archive_size)
        .def_readonly("coverage", &MetricRow::coverage)
        .def_readonly("max_fitness", &MetricRow::max_fitness)
        .def_readonly("qd_score", &MetricRow::qd_score);

    py::class_<TraceRow>(m, "TraceRow")
        .def_readonly("episode", &TraceRow::episode)
        .def_readonly("substep", &TraceRow::substep)
        .def_readonly("pose", &TraceRow::pose);

    py::class_<RunReport>(m, "RunReport")
        .def_readonly("real_evals_used", &RunReport::real_evals_used)
        .def_readonly("termination", &RunReport::termination)
        .def_readonly("metrics", &RunReport::metrics)
        .def_readonly("trace", &RunReport::trace);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("report", &RunResult::report)
        .def_readonly("archive", &RunResult::archive)
        .def_readonly("ensemble", &RunResult::ensemble);

    m.def(
        "run", [](const RunConfig& cfg, Arena& arena, const ZoneMap& zones) {
            return run(cfg, arena, zones);
        },
        py::arg("config"), py::arg("arena"), py::arg("zones"),
        "Run the reset-free learning loop in a persistent arena");
    m.def(
        "run",
        [](const RunConfig& cfg, const WorldFn& world, const Pose& start, const ZoneMap& zones) {
            return run(cfg, world, start, zones);
        },
        py::arg("config"), py::arg("world"), py::arg("start"), py::arg("zones"),
        "Run the loop against any world callable (genotype, zones_or_None) -> EpisodeResult");

    // --- maze navigation -------------------------------------------------
    py::class_<Cell>(m, "Cell")
        .def(py::init([](int x, int y) { return Cell{x, y}; }), py::arg("x"), py::arg("y"))
        .def_readwrite("x", &Cell::x)
        .def_readwrite("y", &Cell::y)
        .def("__eq__", [](const Cell& a, const Cell& b) { return a == b; }, py::is_operator())
        .def("__repr__", [](const Cell& c) {
            return "Cell(" + std::to_string(c.x) + ", " + std::to_string(c.y) + ")";
        });

    py::class_<ObstacleRect>(m, "ObstacleRect")
        .def(py::init([](double min_x, double min_y, double max_x, double max_y) {
                 return ObstacleRect{min_x, min_y, max_x, max_y};
             }),
             py::arg("min_x"), py::arg("min_y"), py::arg("max_x"), py::arg("max_y"))
        .def_readwrite("min_x", &ObstacleRect::min_x)
        .def_readwrite("min_y", &ObstacleRect::min_y)
        .def_readwrite("max_x", &ObstacleRect::max_x)
        .def_readwrite("max_y", &ObstacleRect::max_y);

    py::class_<MazeMap>(m, "MazeMap")
        .def(py::init<double, double, double, double, const Pose&,
                      const std::array<double, 2>&, std::vector<ObstacleRect>>(),
             py::arg("width"), py::arg("height"), py::arg("resolution"), py::arg("inflation"),
             py::arg("start"), py::arg("goal"), py::arg("obstacles"))
        .def_static("from_json", &MazeMap::from_json, py::arg("text"))
        .def("to_json", &MazeMap::to_json)
        .def_property_readonly("nx", &MazeMap::nx)
        .def_property_readonly("ny", &MazeMap::ny)
        .def_property_readonly("resolution", &MazeMap::resolution)
        .def_property_readonly("start", &MazeMap::start)
        .def_property_readonly("goal", &MazeMap::goal)
        .def("blocked", &MazeMap::blocked, py::arg("cell"))
        .def("blocked_at", &MazeMap::blocked_at, py::arg("x"), py::arg("y"))
        .def("cell_of", &MazeMap::cell_of, py::arg("x"), py::arg("y"))
        .def("center_of", &MazeMap::center_of, py::arg("cell"))
        .def("segment_blocked", &MazeMap::segment_blocked, py::arg("a"), py::arg("b"))
        .def("inside_obstacle", &MazeMap::inside_obstacle, py::arg("x"), py::arg("y"));

    m.def("astar", &astar, py::arg("maze"), py::arg("start"), py::arg("goal"),
          "8-connected shortest path; None when the goal is unreachable");

    py::class_<ActionChoice>(m, "ActionChoice")
        .def_readonly("index", &ActionChoice::index)
        .def_readonly("collision_free", &ActionChoice::collision_free);
    m.def("select_action", &select_action, py::arg("archive"), py::arg("pose"),
          py::arg("path"), py::arg("maze"));

    py::class_<NavTraceRow>(m, "NavTraceRow")
        .def_readonly("action", &NavTraceRow::action)
        .def_readonly("substep", &NavTraceRow::substep)
        .def_readonly("pose", &NavTraceRow::pose);

    py::class_<TrialReport>(m, "TrialReport")
        .def_readonly("success", &TrialReport::success)
        .def_readonly("wall_contact", &TrialReport::wall_contact)
        .def_readonly("n_actions", &TrialReport::n_actions)
        .def_readonly("elapsed", &TrialReport::elapsed)
        .def_readonly("escape_hatch_uses", &TrialReport::escape_hatch_uses)
        .def_readonly("trace", &TrialReport::trace);

    m.def(
        "run_trial",
        [](const UnstructuredArchive& archive, const MazeMap& maze, Arena& arena,
           int max_actions) { return run_trial(archive, maze, arena, max_actions); },
        py::arg("archive"), py::arg("maze"), py::arg("arena"),
        py::arg("max_actions") = kMaxActions);
    m.def(
        "run_trial",
        [](const UnstructuredArchive& archive, const MazeMap& maze, const WorldFn& world,
           const Pose& start, int max_actions) {
            return run_trial(archive, maze, world, start, max_actions);
        },
        py::arg("archive"), py::arg("maze"), py::arg("world"), py::arg("start"),
        py::arg("max_actions") = kMaxActions);

    // --- experiment harness ----------------------------------------------
    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("run", &ExperimentConfig::run)
        .def_readwrite("ablation", &ExperimentConfig::ablation)
        .def_readwrite("surrogate_seed", &ExperimentConfig::surrogate_seed)
        .def_readwrite("noise", &ExperimentConfig::noise)
        .def_readwrite("zones", &ExperimentConfig::zones)
        .def_readwrite("seeds", &ExperimentConfig::seeds)
        .def_readwrite("nav_trials", &ExperimentConfig::nav_trials)
        .def_readwrite("maze_path", &ExperimentConfig::maze_path)
        .def_readwrite("out_dir", &ExperimentConfig::out_dir);

    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("load_config", &load_config, py::arg("path"));
    m.def("config_to_text", &config_to_text, py::arg("config"));

    py::class_<TrainOutput>(m, "TrainOutput")
        .def_readonly("result", &TrainOutput::result)
        .def_readonly("run_dir", &TrainOutput::run_dir);
    m.def("cmd_train", &cmd_train, py::arg("config"),
          "One training run; writes archive.jsonl, metrics.csv, trace.csv, report.json");

    py::class_<NavOutcome>(m, "NavOutcome")
        .def_readonly("trials", &NavOutcome::trials)
        .def_readonly("successes", &NavOutcome::successes);
    m.def("run_navigation", &run_navigation, py::arg("archive"), py::arg("maze"),
          py::arg("config"), py::arg("run_seed"));
    m.def("cmd_navigate", &cmd_navigate, py::arg("archive_path"), py::arg("maze_path"),
          py::arg("trials"), py::arg("config"));

    py::class_<Quartiles>(m, "Quartiles")
        .def_readonly("q1", &Quartiles::q1)
        .def_readonly("median", &Quartiles::median)
        .def_readonly("q3", &Quartiles::q3);
    m.def("quartiles", &quartiles, py::arg("values"));

    py::class_<RunEntry>(m, "RunEntry")
        .def_readonly("ablation", &RunEntry::ablation)
        .def_readonly("seed", &RunEntry::seed)
        .def_readonly("evals_used", &RunEntry::evals_used)
        .def_readonly("termination", &RunEntry::termination)
        .def_readonly("final_metrics", &RunEntry::final_metrics)
        .def_readonly("nav", &RunEntry::nav);

    py::class_<AggregateReport>(m, "AggregateReport")
        .def_readonly("entries", &AggregateReport::entries);
    m.def("cmd_ablate", &cmd_ablate, py::arg("config"),
          "Every ablation x seeds, training plus maze trials; writes ablate_report.json");
    m.def("aggregate_to_json", &aggregate_to_json, py::arg("report"));
    m.def("aggregate_table", &aggregate_table, py::arg("report"));

    // --- plots -----------------------------------------------------------
    m.def("plot_archive_svg", &plot_archive_svg, py::arg("archive"), py::arg("zones"));
    m.def("plot_metrics_svg", &plot_metrics_svg, py::arg("rows"));
    m.def("plot_trace_svg", &plot_trace_svg, py::arg("rows"), py::arg("zones"));
    m.def("plot_run_dir", &plot_run_dir, py::arg("run_dir"),
          "Render archive.svg, metrics.svg and trace.svg inside a run directory");
}
