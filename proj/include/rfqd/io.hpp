#pragma once

#include <string>
#include <vector>

#include "rfqd/archive.hpp"
#include "rfqd/loop.hpp"
#include "rfqd/navigation.hpp"

namespace rfqd {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// One solution per line: {"bd": [..], "fitness": .., "genotype": [..24],
// "id": .., "n_evals": ..}. Reading restores members verbatim.
std::string archive_to_jsonl(const UnstructuredArchive& a);
UnstructuredArchive archive_from_jsonl(const std::string& text, double l, int k);

// eval,archive_size,coverage,max_fitness,qd_score
std::string metrics_to_csv(const std::vector<MetricRow>& rows);
std::vector<MetricRow> metrics_from_csv(const std::string& text);

// episode,substep,x,y,theta
std::string trace_to_csv(const std::vector<TraceRow>& rows);
std::vector<TraceRow> trace_from_csv(const std::string& text);

std::string nav_trace_to_csv(const std::vector<NavTraceRow>& rows);

// RunReport without the bulky per-eval vectors (those live in the CSVs).
std::string run_report_to_json(const RunReport& rep, const UnstructuredArchive& archive,
                               Ablation ablation, std::uint64_t seed);

std::string trial_report_to_json(const TrialReport& rep);

} // namespace rfqd
