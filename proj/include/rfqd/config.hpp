#pragma once

#include <cstdint>
#include <string>

#include "rfqd/arena.hpp"
#include "rfqd/loop.hpp"

namespace rfqd {

// Everything a run needs, as read from a key = value config file. Defaults
// are the experiment values; see configs/default.cfg for the annotated list.
struct ExperimentConfig {
    RunConfig run;
    Ablation ablation = Ablation::RFQD;
    std::uint64_t surrogate_seed = 24; // world identity; frozen per experiment
    NoiseLevels noise;
    ZoneMap zones; // center (0,0), radii 0.5 / 0.75
    int seeds = 4;       // training runs per ablation in the comparison
    int nav_trials = 5;  // maze trials per trained archive
    std::string maze_path = "configs/maze_default.json";
    std::string out_dir = "runs";
};

// Parses the key = value format ('#' comments, blank lines ignored).
// Unknown keys and malformed values are errors naming the offending key.
ExperimentConfig parse_config(const std::string& text);

ExperimentConfig load_config(const std::string& path);

// The config echoed back in file form (defaults filled in).
std::string config_to_text(const ExperimentConfig& c);

} // namespace rfqd
