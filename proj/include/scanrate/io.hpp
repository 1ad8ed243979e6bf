#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "scanrate/estimators.hpp"
#include "scanrate/experiment.hpp"
#include "scanrate/regression.hpp"

namespace scanrate {

/// Input parse failure; carries the 1-based line number for diagnostics.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, int line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Reads newline-delimited decimals, or a single-column CSV whose header line
/// is `value`. Blank lines are ignored.
inline Series read_series(std::istream& in) {
    Series out;
    std::string line;
    int lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        trimmed.erase(trimmed.find_last_not_of(" \t") + 1);
        if (trimmed.empty()) continue;
        if (first && trimmed == "value") {
            first = false;
            continue;
        }
        first = false;
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(trimmed, &pos);
        } catch (const std::exception&) {
            throw parse_error("not a number: '" + trimmed + "'", lineno);
        }
        if (pos != trimmed.size())
            throw parse_error("trailing characters after number: '" + trimmed + "'", lineno);
        if (std::isnan(v)) throw parse_error("NaN value", lineno);
        out.push_back(v);
    }
    return out;
}

inline Series read_series_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    return read_series(in);
}

inline void write_series_file(const std::string& path, const Series& series) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    char buf[40];
    for (double x : series) {
        std::snprintf(buf, sizeof buf, "%.12g\n", x);
        out << buf;
    }
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const EstimatorSpec& spec) {
    nlohmann::json j;
    j["statistic"] = spec.stat.id();
    j["map"] = spec.map.id;
    j["method"] = to_string(spec.method);
    j["trim_n0"] = spec.trim_n0;
    j["scan_policy"] = to_string(spec.scan_policy);
    j["scan_count"] = spec.scan_count;
    j["seed"] = spec.seed;
    j["aggregation"] = to_string(spec.aggregation);
    if (spec.centered) {
        j["centered"] = {{"m", spec.centered->m}, {"b", spec.centered->b}};
    }
    if (spec.clip_override) {
        j["clip"] = {spec.clip_override->first, spec.clip_override->second};
    }
    return j;
}

inline nlohmann::json to_json(const EstimateReport& report) {
    nlohmann::json j;
    j["point_estimate"] = report.point;
    j["dropped_points"] = report.dropped_points;
    j["failed_scans"] = report.failed_scans;
    j["clipped_fraction"] = report.clipped_fraction();
    j["spec"] = to_json(report.spec);
    nlohmann::json scans = nlohmann::json::array();
    for (const auto& e : report.per_scan) {
        scans.push_back({{"scan", e.scan_index},
                         {"lambda", e.lambda},
                         {"slope", e.slope},
                         {"clipped", e.clipped}});
    }
    j["per_scan"] = scans;
    return j;
}

/// One-line CSV form of a report:
/// statistic,map,method,scans,aggregation,point,clipped_fraction,dropped,failed
inline std::string report_csv_row(const EstimateReport& report) {
    std::ostringstream s;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", report.point);
    s << report.spec.stat.id() << ',' << report.spec.map.id << ','
      << to_string(report.spec.method) << ',' << report.per_scan.size() << ','
      << to_string(report.spec.aggregation) << ',' << buf << ','
      << report.clipped_fraction() << ',' << report.dropped_points << ','
      << report.failed_scans;
    return s.str();
}

inline nlohmann::json to_json(const McResult& r) {
    return {{"mse", r.mse},
            {"bias", r.bias},
            {"variance", r.variance},
            {"replicates", r.replicates},
            {"failed", r.failed},
            {"wall_seconds", r.wall_seconds}};
}

inline nlohmann::json to_json(const TableResult& table) {
    nlohmann::json j;
    j["seed"] = table.seed;
    j["replicates"] = table.replicates;
    j["notes"] = table.notes;
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : table.cells) {
        cells.push_back({{"panel", std::string(1, c.panel)},
                         {"row", c.row},
                         {"estimator", c.estimator},
                         {"N", c.scan_count},
                         {"q", c.q},
                         {"inapplicable", c.inapplicable},
                         {"result", to_json(c.result)}});
    }
    j["cells"] = cells;
    return j;
}

// ---------------------------------------------------------------------------
// Diagnostics CSV
// ---------------------------------------------------------------------------

/// Trajectory export: k, block start, statistic value.
inline std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "k,block_start,T_k\n";
    char buf[40];
    for (int k = 1; k <= traj.n(); ++k) {
        std::snprintf(buf, sizeof buf, "%.12g",
                      traj.values[static_cast<std::size_t>(k - 1)]);
        out += std::to_string(k) + ',' +
               std::to_string(traj.scan.block_of_size(k).start) + ',' + buf + '\n';
    }
    return out;
}

/// Log-log scatter export: one row per requested k, with retained = 0 rows
/// carrying empty Y.
inline std::string loglog_csv(const LogLogSample& sample) {
    std::string out = "k,log_k,Y_k,retained\n";
    char buf[40];
    std::size_t pi = 0, di = 0;
    for (int k = sample.first_k; k <= sample.last_k; ++k) {
        if (pi < sample.points.size() && sample.points[pi].k == k) {
            const auto& p = sample.points[pi++];
            std::snprintf(buf, sizeof buf, "%.12g", p.log_k);
            out += std::to_string(k) + ',' + buf + ',';
            std::snprintf(buf, sizeof buf, "%.12g", p.y);
            out += std::string(buf) + ",1\n";
        } else if (di < sample.dropped.size() && sample.dropped[di].k == k) {
            ++di;
            std::snprintf(buf, sizeof buf, "%.12g", std::log(k));
            out += std::to_string(k) + ',' + buf + ",,0\n";
        }
    }
    return out;
}

} // namespace scanrate
