#include "rfqd/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rfqd {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out)
        throw std::runtime_error("failed writing '" + path + "'");
}

std::string archive_to_jsonl(const UnstructuredArchive& a)
{
    std::ostringstream out;
    for (const auto& s : a.solutions()) {
        nlohmann::json j;
        j["id"] = s.id;
        j["genotype"] = s.genotype.values();
        j["bd"] = s.bd;
        j["fitness"] = s.fitness;
        j["n_evals"] = s.n_evals;
        out << j.dump() << "\n";
    }
    return out.str();
}

UnstructuredArchive archive_from_jsonl(const std::string& text, double l, int k)
{
    UnstructuredArchive a(l, k);
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        Solution s;
        try {
            const nlohmann::json j = nlohmann::json::parse(line);
            s.id = j.at("id").get<std::uint64_t>();
            s.genotype = Genotype(j.at("genotype").get<std::array<double, kGenotypeSize>>());
            s.bd = j.at("bd").get<std::array<double, 2>>();
            s.fitness = j.at("fitness").get<double>();
            s.n_evals = j.at("n_evals").get<int>();
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument("archive line " + std::to_string(lineno) + ": " +
                                        e.what());
        }
        if (s.id == 0)
            throw std::invalid_argument("archive line " + std::to_string(lineno) +
                                        ": id 0 is reserved");
        a.restore(s);
    }
    return a;
}

namespace {

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

std::string metrics_to_csv(const std::vector<MetricRow>& rows)
{
    std::ostringstream out;
    out << "eval,archive_size,coverage,max_fitness,qd_score\n";
    for (const auto& r : rows)
        out << r.eval << "," << r.archive_size << "," << fmt(r.coverage) << ","
            << fmt(r.max_fitness) << "," << fmt(r.qd_score) << "\n";
    return out.str();
}

std::vector<MetricRow> metrics_from_csv(const std::string& text)
{
    std::vector<MetricRow> rows;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (header) {
            header = false;
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 5)
            throw std::invalid_argument("metrics csv: expected 5 columns, got " +
                                        std::to_string(f.size()));
        MetricRow r;
        r.eval = std::stoi(f[0]);
        r.archive_size = static_cast<std::size_t>(std::stoull(f[1]));
        r.coverage = std::stod(f[2]);
        r.max_fitness = std::stod(f[3]);
        r.qd_score = std::stod(f[4]);
        rows.push_back(r);
    }
    return rows;
}

std::string trace_to_csv(const std::vector<TraceRow>& rows)
{
    std::ostringstream out;
    out << "episode,substep,x,y,theta\n";
    for (const auto& r : rows)
        out << r.episode << "," << r.substep << "," << fmt(r.pose.x) << "," << fmt(r.pose.y)
            << "," << fmt(r.pose.theta) << "\n";
    return out.str();
}

std::vector<TraceRow> trace_from_csv(const std::string& text)
{
    std::vector<TraceRow> rows;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (header) {
            header = false;
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 5)
            throw std::invalid_argument("trace csv: expected 5 columns, got " +
                                        std::to_string(f.size()));
        TraceRow r;
        r.episode = std::stoi(f[0]);
        r.substep = std::stoi(f[1]);
        r.pose = {std::stod(f[2]), std::stod(f[3]), std::stod(f[4])};
        rows.push_back(r);
    }
    return rows;
}

std::string nav_trace_to_csv(const std::vector<NavTraceRow>& rows)
{
    std::ostringstream out;
    out << "action,substep,x,y,theta\n";
    for (const auto& r : rows)
        out << r.action << "," << r.substep << "," << fmt(r.pose.x) << "," << fmt(r.pose.y)
            << "," << fmt(r.pose.theta) << "\n";
    return out.str();
}

std::string run_report_to_json(const RunReport& rep, const UnstructuredArchive& archive,
                               Ablation ablation, std::uint64_t seed)
{
    const ArchiveMetrics m = archive.metrics();
    nlohmann::json j;
    j["ablation"] = ablation_name(ablation);
    j["seed"] = seed;
    j["real_evals_used"] = rep.real_evals_used;
    j["termination"] = termination_name(rep.termination);
    j["final"]["archive_size"] = m.size;
    j["final"]["coverage"] = m.coverage;
    j["final"]["max_fitness"] = m.max_fitness;
    j["final"]["qd_score"] = m.qd_score;
    return j.dump(2) + "\n";
}

std::string trial_report_to_json(const TrialReport& rep)
{
    nlohmann::json j;
    j["success"] = rep.success;
    j["wall_contact"] = rep.wall_contact;
    j["n_actions"] = rep.n_actions;
    j["elapsed"] = rep.elapsed;
    j["escape_hatch_uses"] = rep.escape_hatch_uses;
    return j.dump();
}

} // namespace rfqd
