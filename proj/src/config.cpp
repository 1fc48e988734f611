#include "rfqd/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rfqd {

namespace {

std::string trim(const std::string& s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
        ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
        --b;
    return s.substr(a, b - a);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value)
{
    throw std::invalid_argument("config: bad value '" + value + "' for key '" + key + "'");
}

double parse_real(const std::string& key, const std::string& value)
{
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (errno != 0 || end == value.c_str() || *end != '\0')
        bad_value(key, value);
    return v;
}

long long parse_int(const std::string& key, const std::string& value)
{
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (errno != 0 || end == value.c_str() || *end != '\0')
        bad_value(key, value);
    return v;
}

std::uint64_t parse_seed(const std::string& key, const std::string& value)
{
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (errno != 0 || end == value.c_str() || *end != '\0')
        bad_value(key, value);
    return v;
}

} // namespace

ExperimentConfig parse_config(const std::string& text)
{
    ExperimentConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not a key = value pair: '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " has an empty key or value");

        if (key == "seed") c.run.seed = parse_seed(key, value);
        else if (key == "ablation") c.ablation = ablation_from_name(value);
        else if (key == "eval_budget") c.run.eval_budget = static_cast<int>(parse_int(key, value));
        else if (key == "init_evals") c.run.init_evals = static_cast<int>(parse_int(key, value));
        else if (key == "train_cadence") c.run.train_cadence = static_cast<int>(parse_int(key, value));
        else if (key == "imagination_iters") c.run.imagination_iters = static_cast<int>(parse_int(key, value));
        else if (key == "batch_per_cycle") c.run.batch_per_cycle = static_cast<int>(parse_int(key, value));
        else if (key == "alpha") c.run.alpha = parse_real(key, value);
        else if (key == "beta") c.run.beta = parse_real(key, value);
        else if (key == "archive_l") c.run.archive_l = parse_real(key, value);
        else if (key == "novelty_k") c.run.novelty_k = static_cast<int>(parse_int(key, value));
        else if (key == "sigma_iso") c.run.variation.sigma_iso = parse_real(key, value);
        else if (key == "sigma_line") c.run.variation.sigma_line = parse_real(key, value);
        else if (key == "ensemble_members") c.run.ensemble.members = static_cast<int>(parse_int(key, value));
        else if (key == "ensemble_hidden") c.run.ensemble.hidden = static_cast<int>(parse_int(key, value));
        else if (key == "train_epochs") c.run.train.epochs = static_cast<int>(parse_int(key, value));
        else if (key == "learning_rate") c.run.train.learning_rate = parse_real(key, value);
        else if (key == "minibatch") c.run.train.minibatch = static_cast<int>(parse_int(key, value));
        else if (key == "r_exploration") c.zones.r_exploration = parse_real(key, value);
        else if (key == "r_recovery") c.zones.r_recovery = parse_real(key, value);
        else if (key == "sigma_v") c.noise.sigma_v = parse_real(key, value);
        else if (key == "sigma_omega") c.noise.sigma_omega = parse_real(key, value);
        else if (key == "surrogate_seed") c.surrogate_seed = parse_seed(key, value);
        else if (key == "seeds") c.seeds = static_cast<int>(parse_int(key, value));
        else if (key == "nav_trials") c.nav_trials = static_cast<int>(parse_int(key, value));
        else if (key == "maze") c.maze_path = value;
        else if (key == "out_dir") c.out_dir = value;
        else
            throw std::invalid_argument("config: unknown key '" + key + "' on line " +
                                        std::to_string(lineno));
    }

    if (c.run.alpha < 0.0 || c.run.alpha > 1.0)
        throw std::invalid_argument("config: alpha must lie in [0, 1]");
    if (c.run.beta < 0.0)
        throw std::invalid_argument("config: beta must be non-negative");
    if (c.zones.r_recovery < c.zones.r_exploration)
        throw std::invalid_argument("config: r_recovery must be >= r_exploration");
    if (c.run.eval_budget < 1 || c.run.init_evals < 1)
        throw std::invalid_argument("config: eval_budget and init_evals must be positive");
    if (c.run.ensemble.members < 1 || c.run.ensemble.hidden < 1)
        throw std::invalid_argument("config: ensemble_members and ensemble_hidden must be positive");
    if (c.run.novelty_k < 1)
        throw std::invalid_argument("config: novelty_k must be positive");
    c.run.apply(c.ablation);
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

namespace {
std::string fmt_real(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
} // namespace

std::string config_to_text(const ExperimentConfig& c)
{
    std::ostringstream out;
    out << "seed = " << c.run.seed << "\n";
    out << "ablation = " << ablation_name(c.ablation) << "\n";
    out << "eval_budget = " << c.run.eval_budget << "\n";
    out << "init_evals = " << c.run.init_evals << "\n";
    out << "train_cadence = " << c.run.train_cadence << "\n";
    out << "imagination_iters = " << c.run.imagination_iters << "\n";
    out << "batch_per_cycle = " << c.run.batch_per_cycle << "\n";
    out << "alpha = " << fmt_real(c.run.alpha) << "\n";
    out << "beta = " << fmt_real(c.run.beta) << "\n";
    out << "archive_l = " << fmt_real(c.run.archive_l) << "\n";
    out << "novelty_k = " << c.run.novelty_k << "\n";
    out << "sigma_iso = " << fmt_real(c.run.variation.sigma_iso) << "\n";
    out << "sigma_line = " << fmt_real(c.run.variation.sigma_line) << "\n";
    out << "ensemble_members = " << c.run.ensemble.members << "\n";
    out << "ensemble_hidden = " << c.run.ensemble.hidden << "\n";
    out << "train_epochs = " << c.run.train.epochs << "\n";
    out << "learning_rate = " << fmt_real(c.run.train.learning_rate) << "\n";
    out << "minibatch = " << c.run.train.minibatch << "\n";
    out << "r_exploration = " << fmt_real(c.zones.r_exploration) << "\n";
    out << "r_recovery = " << fmt_real(c.zones.r_recovery) << "\n";
    out << "sigma_v = " << fmt_real(c.noise.sigma_v) << "\n";
    out << "sigma_omega = " << fmt_real(c.noise.sigma_omega) << "\n";
    out << "surrogate_seed = " << c.surrogate_seed << "\n";
    out << "seeds = " << c.seeds << "\n";
    out << "nav_trials = " << c.nav_trials << "\n";
    out << "maze = " << c.maze_path << "\n";
    out << "out_dir = " << c.out_dir << "\n";
    return out.str();
}

} // namespace rfqd
