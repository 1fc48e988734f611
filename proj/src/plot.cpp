#include "rfqd/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "rfqd/config.hpp"
#include "rfqd/io.hpp"

namespace rfqd {

namespace {

std::string num(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// linear map from world interval [w0, w1] to pixel interval [p0, p1]
struct Scale {
    double w0, w1, p0, p1;
    double operator()(double w) const { return p0 + (w - w0) / (w1 - w0) * (p1 - p0); }
};

std::string fitness_color(double fitness)
{
    const double t = std::clamp(1.0 - std::fabs(fitness) / M_PI, 0.0, 1.0);
    char buf[32];
    std::snprintf(buf, sizeof buf, "hsl(%d,70%%,45%%)", static_cast<int>(std::lround(120.0 * t)));
    return buf;
}

void zone_circles(std::ostringstream& out, const ZoneMap& z, const Scale& sx, const Scale& sy)
{
    const double px = sx(z.center_x), py = sy(z.center_y);
    const double re = std::fabs(sx(z.center_x + z.r_exploration) - px);
    const double rr = std::fabs(sx(z.center_x + z.r_recovery) - px);
    out << "<circle cx=\"" << num(px) << "\" cy=\"" << num(py) << "\" r=\"" << num(rr)
        << "\" fill=\"none\" stroke=\"#c08060\" stroke-dasharray=\"6 4\"/>\n";
    out << "<circle cx=\"" << num(px) << "\" cy=\"" << num(py) << "\" r=\"" << num(re)
        << "\" fill=\"none\" stroke=\"#6080c0\"/>\n";
}

void frame(std::ostringstream& out, double w, double h)
{
    out << "<rect x=\"0.5\" y=\"0.5\" width=\"" << num(w - 1) << "\" height=\"" << num(h - 1)
        << "\" fill=\"white\" stroke=\"#444\"/>\n";
}

} // namespace

std::string plot_archive_svg(const UnstructuredArchive& archive, const ZoneMap& zones)
{
    const double kSize = 520.0, kMargin = 40.0;
    const double lim = std::max(0.8, zones.r_recovery * 1.05);
    const Scale sx{-lim, lim, kMargin, kSize - kMargin};
    const Scale sy{-lim, lim, kSize - kMargin, kMargin}; // y up

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kSize) << "\" height=\""
        << num(kSize) << "\">\n";
    frame(out, kSize, kSize);
    zone_circles(out, zones, sx, sy);
    out << "<line x1=\"" << num(sx(-lim)) << "\" y1=\"" << num(sy(0)) << "\" x2=\""
        << num(sx(lim)) << "\" y2=\"" << num(sy(0)) << "\" stroke=\"#ddd\"/>\n";
    out << "<line x1=\"" << num(sx(0)) << "\" y1=\"" << num(sy(-lim)) << "\" x2=\""
        << num(sx(0)) << "\" y2=\"" << num(sy(lim)) << "\" stroke=\"#ddd\"/>\n";
    for (const auto& s : archive.solutions()) {
        out << "<circle class=\"sol\" cx=\"" << num(sx(s.bd[0])) << "\" cy=\""
            << num(sy(s.bd[1])) << "\" r=\"4\" fill=\"" << fitness_color(s.fitness)
            << "\" stroke=\"#333\" stroke-width=\"0.5\"/>\n";
    }
    out << "<text x=\"" << num(kSize / 2) << "\" y=\"" << num(kSize - 8)
        << "\" text-anchor=\"middle\" font-size=\"12\">final displacement x (m), " << archive.size()
        << " solutions</text>\n";
    out << "<text x=\"12\" y=\"" << num(kSize / 2)
        << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 12 "
        << num(kSize / 2) << ")\">final displacement y (m)</text>\n";
    out << "</svg>\n";
    return out.str();
}

namespace {

void metric_panel(std::ostringstream& out, const std::vector<MetricRow>& rows,
                  double (*get)(const MetricRow&), const char* label, double top)
{
    const double kW = 640.0, kH = 170.0, kL = 60.0, kR = 20.0, kT = 18.0, kB = 26.0;
    double lo = 0.0, hi = 1.0;
    if (!rows.empty()) {
        lo = hi = get(rows.front());
        for (const auto& r : rows) {
            lo = std::min(lo, get(r));
            hi = std::max(hi, get(r));
        }
        if (hi - lo < 1e-12) {
            hi += 1.0;
            lo -= 1.0;
        }
    }
    const double x0 = 1.0;
    const double x1 = rows.empty() ? 1.0 : static_cast<double>(rows.back().eval);
    const Scale sx{x0, std::max(x1, x0 + 1e-9), kL, kW - kR};
    const Scale sy{lo, hi, top + kH - kB, top + kT};

    out << "<rect x=\"" << num(kL) << "\" y=\"" << num(top + kT) << "\" width=\""
        << num(kW - kL - kR) << "\" height=\"" << num(kH - kT - kB)
        << "\" fill=\"none\" stroke=\"#999\"/>\n";
    if (!rows.empty()) {
        out << "<polyline class=\"curve\" fill=\"none\" stroke=\"#3366aa\" stroke-width=\"1.5\" points=\"";
        for (const auto& r : rows)
            out << num(sx(r.eval)) << "," << num(sy(get(r))) << " ";
        out << "\"/>\n";
    }
    out << "<text class=\"xmin\" x=\"" << num(kL) << "\" y=\"" << num(top + kH - 8)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << num(x0) << "</text>\n";
    out << "<text class=\"xmax\" x=\"" << num(kW - kR) << "\" y=\"" << num(top + kH - 8)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << num(x1) << "</text>\n";
    out << "<text x=\"" << num(kL - 6) << "\" y=\"" << num(sy(lo))
        << "\" font-size=\"11\" text-anchor=\"end\">" << num(lo) << "</text>\n";
    out << "<text x=\"" << num(kL - 6) << "\" y=\"" << num(sy(hi) + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << num(hi) << "</text>\n";
    out << "<text x=\"" << num(kL) << "\" y=\"" << num(top + 13) << "\" font-size=\"12\">"
        << label << "</text>\n";
}

} // namespace

std::string plot_metrics_svg(const std::vector<MetricRow>& rows)
{
    const double kW = 640.0, kH = 170.0;
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kW) << "\" height=\""
        << num(3 * kH) << "\">\n";
    frame(out, kW, 3 * kH);
    metric_panel(out, rows, [](const MetricRow& r) { return r.coverage; },
                 "coverage (fraction of the reference grid)", 0.0);
    metric_panel(out, rows, [](const MetricRow& r) { return r.max_fitness; },
                 "max fitness (rad)", kH);
    metric_panel(out, rows, [](const MetricRow& r) { return r.qd_score; }, "QD score", 2 * kH);
    out << "</svg>\n";
    return out.str();
}

std::string plot_trace_svg(const std::vector<TraceRow>& rows, const ZoneMap& zones)
{
    const double kSize = 520.0, kMargin = 40.0;
    double lim = std::max(0.8, zones.r_recovery * 1.05);
    for (const auto& r : rows)
        lim = std::max({lim, std::fabs(r.pose.x - zones.center_x) * 1.05,
                        std::fabs(r.pose.y - zones.center_y) * 1.05});
    const Scale sx{zones.center_x - lim, zones.center_x + lim, kMargin, kSize - kMargin};
    const Scale sy{zones.center_y - lim, zones.center_y + lim, kSize - kMargin, kMargin};

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kSize) << "\" height=\""
        << num(kSize) << "\">\n";
    frame(out, kSize, kSize);
    zone_circles(out, zones, sx, sy);
    if (!rows.empty()) {
        out << "<polyline class=\"trace\" fill=\"none\" stroke=\"#338855\" stroke-width=\"1\" points=\"";
        for (const auto& r : rows)
            out << num(sx(r.pose.x)) << "," << num(sy(r.pose.y)) << " ";
        out << "\"/>\n";
        out << "<circle cx=\"" << num(sx(rows.front().pose.x)) << "\" cy=\""
            << num(sy(rows.front().pose.y)) << "\" r=\"5\" fill=\"#222\"/>\n";
        out << "<circle cx=\"" << num(sx(rows.back().pose.x)) << "\" cy=\""
            << num(sy(rows.back().pose.y)) << "\" r=\"5\" fill=\"none\" stroke=\"#222\"/>\n";
    }
    out << "<text x=\"" << num(kSize / 2) << "\" y=\"" << num(kSize - 8)
        << "\" text-anchor=\"middle\" font-size=\"12\">world x (m); filled dot = start</text>\n";
    out << "</svg>\n";
    return out.str();
}

void plot_run_dir(const std::string& run_dir)
{
    namespace fs = std::filesystem;
    std::vector<std::string> missing;
    for (const char* name : {"archive.jsonl", "metrics.csv", "trace.csv"})
        if (!fs::exists(fs::path(run_dir) / name))
            missing.push_back(name);
    if (!missing.empty()) {
        std::string msg = "plot: '" + run_dir + "' is missing";
        for (const auto& m : missing)
            msg += " " + m;
        throw std::runtime_error(msg);
    }

    // zone radii as configured for the run when the echo is present
    ZoneMap zones;
    const fs::path cfg_path = fs::path(run_dir) / "config.cfg";
    double l = 0.05;
    int k = 5;
    if (fs::exists(cfg_path)) {
        const ExperimentConfig cfg = load_config(cfg_path.string());
        zones = cfg.zones;
        l = cfg.run.archive_l;
        k = cfg.run.novelty_k;
    }

    const UnstructuredArchive archive =
        archive_from_jsonl(read_file(run_dir + "/archive.jsonl"), l, k);
    const auto metrics = metrics_from_csv(read_file(run_dir + "/metrics.csv"));
    const auto trace = trace_from_csv(read_file(run_dir + "/trace.csv"));

    write_file(run_dir + "/archive.svg", plot_archive_svg(archive, zones));
    write_file(run_dir + "/metrics.svg", plot_metrics_svg(metrics));
    write_file(run_dir + "/trace.svg", plot_trace_svg(trace, zones));
}

} // namespace rfqd
