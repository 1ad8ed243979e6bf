#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "scanrate/blockstats.hpp"
#include "scanrate/ratemap.hpp"
#include "scanrate/regression.hpp"
#include "scanrate/rng.hpp"
#include "scanrate/scan.hpp"

namespace scanrate {

enum class ScanPolicy { direct, reverse, uniform };
enum class Aggregation { none, mean, median };

inline std::string to_string(ScanPolicy p) {
    switch (p) {
        case ScanPolicy::direct: return "direct";
        case ScanPolicy::reverse: return "reverse";
        case ScanPolicy::uniform: return "uniform";
    }
    return "?";
}

inline std::string to_string(Aggregation a) {
    switch (a) {
        case Aggregation::none: return "none";
        case Aggregation::mean: return "mean";
        case Aggregation::median: return "median";
    }
    return "?";
}

struct CenteredWindow {
    int m = 10;
    int b = 0;  // 0 = choose floor(n^(2/3)) at run time
};

struct EstimatorSpec {
    Statistic stat = Statistic::avg_squares();
    RateMap map = rate_maps::tail_sum_squares(/*sum_form=*/false);
    FitMethod method = FitMethod::ols_intercept;
    int trim_n0 = 1;
    ScanPolicy scan_policy = ScanPolicy::direct;
    int scan_count = 1;
    std::uint64_t seed = 0;
    Aggregation aggregation = Aggregation::none;
    std::optional<CenteredWindow> centered;
    std::optional<std::pair<double, double>> clip_override;

    RateMap effective_map() const {
        return clip_override ? map.with_clip(clip_override) : map;
    }
};

struct ScanEstimate {
    int scan_index = 0;
    double lambda = 0.0;
    double slope = 0.0;
    bool clipped = false;
};

struct EstimateReport {
    double point = std::numeric_limits<double>::quiet_NaN();
    std::vector<ScanEstimate> per_scan;
    int dropped_points = 0;  // excluded ks summed over scans
    int failed_scans = 0;
    EstimatorSpec spec;

    double clipped_fraction() const {
        if (per_scan.empty()) return 0.0;
        int c = 0;
        for (const auto& e : per_scan) c += e.clipped;
        return static_cast<double>(c) / static_cast<double>(per_scan.size());
    }
};

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

/// Exact median; even counts take the midpoint of the two central values.
inline double median_of(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median_of: empty");
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return (v.size() % 2 == 1) ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

namespace detail {

inline ScanPath scan_for_policy(ScanPolicy policy, int n, RandomStream& stream) {
    switch (policy) {
        case ScanPolicy::direct: return direct_scan(n);
        case ScanPolicy::reverse: return reverse_scan(n);
        case ScanPolicy::uniform: return uniform_random_scan(n, stream);
    }
    throw std::logic_error("scan_for_policy: unknown policy");
}

struct ScanOutcome {
    ScanEstimate estimate;
    int dropped = 0;
};

inline ScanOutcome estimate_on_scan(const Series& series, const ScanPath& scan,
                                    const EstimatorSpec& spec,
                                    std::optional<double> center, int index) {
    const Trajectory traj = trajectory(series, scan, spec.stat);
    const LogLogSample sample = build_loglog_sample(traj, spec.trim_n0, center);
    SlopeFit sfit;
    if (spec.centered) {
        const int n = scan.n();
        const int m = spec.centered->m;
        const int b = spec.centered->b > 0
                          ? spec.centered->b
                          : static_cast<int>(std::floor(std::pow(n, 2.0 / 3.0)));
        if (b < 1 || b + m > n)
            throw std::invalid_argument("centered window needs b >= 1 and b + m <= n");
        sfit = fit_windowed(sample, m, b);
    } else {
        sfit = fit(sample, spec.method);
    }
    const InvertedSlope inv = invert_slope(spec.effective_map(), sfit.slope);
    return {ScanEstimate{index, inv.lambda, sfit.slope, inv.clipped},
            static_cast<int>(sample.dropped.size())};
}

inline double aggregate(Aggregation how, const std::vector<ScanEstimate>& per_scan) {
    std::vector<double> values;
    values.reserve(per_scan.size());
    for (const auto& e : per_scan) values.push_back(e.lambda);
    switch (how) {
        case Aggregation::none:
            if (values.size() != 1)
                throw std::logic_error("aggregation none with several scans");
            return values.front();
        case Aggregation::mean: return mean_of(values);
        case Aggregation::median: return median_of(values);
    }
    throw std::logic_error("aggregate: unknown mode");
}

inline EstimateReport run_pipeline(const Series& series, const EstimatorSpec& spec,
                                   std::optional<double> center) {
    const int n = static_cast<int>(series.size());
    if (n < 1) throw std::invalid_argument("estimate: empty series");
    const int count = (spec.aggregation == Aggregation::none) ? 1 : spec.scan_count;
    if (count < 1) throw std::invalid_argument("estimate: scan count must be >= 1");

    // Scans are drawn up front so the per-scan work is RNG-free and order
    // independent.
    RandomStream stream(spec.seed);
    std::vector<ScanPath> scans;
    scans.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        scans.push_back(scan_for_policy(spec.scan_policy, n, stream));

    EstimateReport report;
    report.spec = spec;
    for (int i = 0; i < count; ++i) {
        try {
            ScanOutcome out = estimate_on_scan(series, scans[static_cast<std::size_t>(i)],
                                               spec, center, i);
            report.per_scan.push_back(out.estimate);
            report.dropped_points += out.dropped;
        } catch (const std::runtime_error&) {
            ++report.failed_scans;
        }
    }
    if (report.failed_scans * 2 > count)
        throw std::runtime_error("estimate: more than half the scans failed");
    if (report.per_scan.empty())
        throw std::runtime_error("estimate: no scan produced an estimate");
    report.point = aggregate(spec.aggregation, report.per_scan);
    return report;
}

} // namespace detail

/// One-scan pipeline for diverging statistics: trajectory, log-log sample,
/// slope fit, map inversion.
inline EstimateReport estimate_uncentered_single(const Series& series,
                                                 const EstimatorSpec& spec) {
    EstimatorSpec s = spec;
    s.aggregation = Aggregation::none;
    s.centered.reset();
    return detail::run_pipeline(series, s, std::nullopt);
}

/// Scan-aggregated pipeline: per-scan estimates (clipped per map policy) are
/// combined by mean or median. Individual degenerate scans are dropped, up to
/// half of them.
inline EstimateReport estimate_scanned(const Series& series, const EstimatorSpec& spec) {
    EstimatorSpec s = spec;
    if (s.aggregation == Aggregation::none) s.aggregation = Aggregation::mean;
    s.centered.reset();
    return detail::run_pipeline(series, s, std::nullopt);
}

/// Centered pipeline for converging statistics: Y_k = log|T_k - T_n| over the
/// window k = m..b+m, with T_n the full-series statistic (every scan's final
/// block is the whole series, so the center is scan independent).
inline EstimateReport estimate_centered(const Series& series, const EstimatorSpec& spec) {
    if (!spec.centered)
        throw std::invalid_argument("estimate_centered: spec.centered not set");
    const double center = batch_value(std::span<const double>(series), spec.stat);
    return detail::run_pipeline(series, spec, center);
}

/// Dispatch on the spec: centered window if configured, otherwise single or
/// scan-aggregated uncentered estimation.
inline EstimateReport estimate(const Series& series, const EstimatorSpec& spec) {
    if (spec.centered) return estimate_centered(series, spec);
    if (spec.aggregation == Aggregation::none) return estimate_uncentered_single(series, spec);
    return estimate_scanned(series, spec);
}

/// Multiplies the trajectory by k^(-G), turning a statistic that converges to
/// zero into a diverging one; the intercept-fit slope shifts by exactly -G.
inline Trajectory diverging_transform(const Trajectory& traj, double g_lower_bound) {
    Trajectory out = traj;
    for (int k = 1; k <= traj.n(); ++k) {
        double& v = out.values[static_cast<std::size_t>(k - 1)];
        if (v < 0.0)
            throw std::domain_error("diverging transform needs a nonnegative trajectory");
        v *= std::pow(static_cast<double>(k), -g_lower_bound);
    }
    return out;
}

/// Median over moment orders r = 2..R of the median-aggregated estimates,
/// each moment paired with its own tail map.
inline double combined_median_estimate(const Series& series, const EstimatorSpec& base,
                                       int highest_order) {
    if (highest_order < 2)
        throw std::invalid_argument("combined_median_estimate: need R >= 2");
    const bool sum_form = !base.stat.averaged();
    std::vector<double> per_order;
    for (int r = 2; r <= highest_order; ++r) {
        EstimatorSpec spec = base;
        spec.stat = sum_form ? Statistic::abs_moment_sum(r) : Statistic::abs_moment_avg(r);
        spec.map = rate_maps::tail_abs_moment(r, sum_form);
        spec.aggregation = Aggregation::median;
        per_order.push_back(estimate_scanned(series, spec).point);
    }
    return median_of(std::move(per_order));
}

enum class HillSign {
    absolute,  // order statistics of |X_t|
    positive,  // order statistics of the positive observations only
};

/// Hill estimator from q upper order statistics: alpha = q / sum of
/// log-ratios against the (q+1)-th largest value. Returns +infinity when the
/// log-ratios sum to zero.
inline double hill_estimate(const Series& series, int q,
                            HillSign sign = HillSign::absolute) {
    std::vector<double> a;
    a.reserve(series.size());
    if (sign == HillSign::absolute) {
        for (double x : series) a.push_back(std::fabs(x));
    } else {
        for (double x : series) if (x > 0.0) a.push_back(x);
    }
    const int n = static_cast<int>(a.size());
    if (q < 1 || q > n - 1)
        throw std::invalid_argument("hill_estimate: q outside [1, n-1]");
    std::sort(a.begin(), a.end());
    const double threshold = a[static_cast<std::size_t>(n - q - 1)];
    if (threshold == 0.0)
        throw std::runtime_error("hill_estimate: (q+1)-th largest value is zero");
    double h = 0.0;
    for (int j = 1; j <= q; ++j)
        h += std::log(a[static_cast<std::size_t>(n - j)] / threshold);
    h /= static_cast<double>(q);
    if (h == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / h;
}

} // namespace scanrate
