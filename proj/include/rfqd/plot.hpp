#pragma once

#include <string>
#include <vector>

#include "rfqd/archive.hpp"
#include "rfqd/arena.hpp"
#include "rfqd/loop.hpp"

namespace rfqd {

// Archive scatter in descriptor space, coloured by fitness, with the zone
// circles for scale. Every solution is one <circle class="sol"> element.
std::string plot_archive_svg(const UnstructuredArchive& archive, const ZoneMap& zones);

// Coverage, max fitness and QD score against the evaluation counter,
// one panel each.
std::string plot_metrics_svg(const std::vector<MetricRow>& rows);

// World-frame path of the robot across the whole run, zones drawn as
// circles.
std::string plot_trace_svg(const std::vector<TraceRow>& rows, const ZoneMap& zones);

// Writes archive.svg, metrics.svg, trace.svg into the run directory,
// reading the artifacts cmd_train left there. Throws listing whatever is
// missing.
void plot_run_dir(const std::string& run_dir);

} // namespace rfqd
