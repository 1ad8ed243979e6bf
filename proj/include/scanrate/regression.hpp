#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "scanrate/blockstats.hpp"

namespace scanrate {

enum class FitMethod { ols_intercept, ols_origin, lad_intercept };

inline std::string to_string(FitMethod m) {
    switch (m) {
        case FitMethod::ols_intercept: return "ols-intercept";
        case FitMethod::ols_origin: return "ols-origin";
        case FitMethod::lad_intercept: return "lad-intercept";
    }
    return "?";
}

enum class DropReason { nonpositive, center_tie };

struct DroppedK {
    int k;
    DropReason reason;
};

/// Log-domain regression sample: retained pairs (k, Y_k) with k strictly
/// increasing, plus the list of excluded k and why.
struct LogLogSample {
    struct Point {
        int k;
        double log_k;
        double y;
    };
    std::vector<Point> points;
    std::vector<DroppedK> dropped;
    int first_k = 1;  // requested range, before drops
    int last_k = 1;
    std::string statistic_id;
    std::string scan_id;
};

struct SlopeFit {
    double slope = 0.0;
    std::optional<double> intercept;
    FitMethod method = FitMethod::ols_intercept;
    int k_first = 0, k_last = 0;
    int n_used = 0;
    double residual_sum = 0.0;  // L2 or L1 depending on method
};

/// Builds the regression sample from a trajectory over k = trim_n0..n.
/// Without a center: Y_k = log T_k, dropping nonpositive T_k.
/// With a center c: Y_k = log|T_k - c|, dropping exact ties.
/// Errors out when the drops exceed half the requested window.
inline LogLogSample build_loglog_sample(const Trajectory& traj, int trim_n0,
                                        std::optional<double> center = std::nullopt) {
    const int n = traj.n();
    if (trim_n0 < 1 || trim_n0 > n)
        throw std::invalid_argument("build_loglog_sample: trim outside [1, n]");

    LogLogSample sample;
    sample.first_k = trim_n0;
    sample.last_k = n;
    sample.statistic_id = traj.stat.id();
    sample.scan_id = traj.scan.to_string();
    sample.points.reserve(static_cast<std::size_t>(n - trim_n0 + 1));

    for (int k = trim_n0; k <= n; ++k) {
        const double t = traj.values[static_cast<std::size_t>(k - 1)];
        if (center) {
            const double d = t - *center;
            if (d == 0.0) {
                sample.dropped.push_back({k, DropReason::center_tie});
                continue;
            }
            sample.points.push_back({k, std::log(k), std::log(std::fabs(d))});
        } else {
            if (!(t > 0.0)) {
                sample.dropped.push_back({k, DropReason::nonpositive});
                continue;
            }
            sample.points.push_back({k, std::log(k), std::log(t)});
        }
    }

    if (sample.dropped.size() > sample.points.size())
        throw std::runtime_error("build_loglog_sample: more than half the window dropped");
    return sample;
}

namespace detail {

inline void require_two_distinct(const std::vector<LogLogSample::Point>& pts) {
    if (pts.size() < 2)
        throw std::runtime_error("slope fit: fewer than 2 retained points");
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].log_k != pts[0].log_k) return;
    throw std::runtime_error("slope fit: degenerate design, all k identical");
}

inline SlopeFit ols_with_intercept(const std::vector<LogLogSample::Point>& pts) {
    require_two_distinct(pts);
    const double n = static_cast<double>(pts.size());
    double mx = 0.0, my = 0.0;
    for (const auto& p : pts) { mx += p.log_k; my += p.y; }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (const auto& p : pts) {
        const double dx = p.log_k - mx;
        sxy += dx * (p.y - my);
        sxx += dx * dx;
    }
    SlopeFit fit;
    fit.method = FitMethod::ols_intercept;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.k_first = pts.front().k;
    fit.k_last = pts.back().k;
    fit.n_used = static_cast<int>(pts.size());
    double rss = 0.0;
    for (const auto& p : pts) {
        const double r = p.y - (*fit.intercept + fit.slope * p.log_k);
        rss += r * r;
    }
    fit.residual_sum = rss;
    return fit;
}

} // namespace detail

/// Least-squares slope of Y on log k with an intercept.
inline SlopeFit fit_ols_intercept(const LogLogSample& sample) {
    return detail::ols_with_intercept(sample.points);
}

/// Through-the-origin slope: sum(Y_k log k) / sum(log^2 k).
inline SlopeFit fit_ols_origin(const LogLogSample& sample) {
    double sxy = 0.0, sxx = 0.0;
    int used = 0;
    for (const auto& p : sample.points) {
        sxy += p.y * p.log_k;
        sxx += p.log_k * p.log_k;
        ++used;
    }
    if (used < 1 || sxx == 0.0)
        throw std::runtime_error("fit_ols_origin: no k >= 2 retained");
    SlopeFit fit;
    fit.method = FitMethod::ols_origin;
    fit.slope = sxy / sxx;
    fit.k_first = sample.points.front().k;
    fit.k_last = sample.points.back().k;
    fit.n_used = used;
    double rss = 0.0;
    for (const auto& p : sample.points) {
        const double r = p.y - fit.slope * p.log_k;
        rss += r * r;
    }
    fit.residual_sum = rss;
    return fit;
}

/// Exact least-absolute-deviations line with intercept. Some optimal LAD line
/// interpolates two sample points, so the search over point pairs is exact.
/// O(p^3); intended for the modest window sizes used here.
inline SlopeFit fit_lad_intercept(const LogLogSample& sample) {
    const auto& pts = sample.points;
    detail::require_two_distinct(pts);

    double best_obj = std::numeric_limits<double>::infinity();
    double best_slope = 0.0, best_icpt = 0.0;
    const std::size_t p = pts.size();
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            const double dx = pts[j].log_k - pts[i].log_k;
            if (dx == 0.0) continue;
            const double g = (pts[j].y - pts[i].y) / dx;
            const double a = pts[i].y - g * pts[i].log_k;
            double obj = 0.0;
            for (const auto& q : pts) obj += std::fabs(q.y - a - g * q.log_k);
            if (obj < best_obj) {
                best_obj = obj;
                best_slope = g;
                best_icpt = a;
            }
        }
    }

    SlopeFit fit;
    fit.method = FitMethod::lad_intercept;
    fit.slope = best_slope;
    fit.intercept = best_icpt;
    fit.k_first = pts.front().k;
    fit.k_last = pts.back().k;
    fit.n_used = static_cast<int>(p);
    fit.residual_sum = best_obj;
    return fit;
}

/// Intercept-OLS restricted to retained ks in [m, b+m].
inline SlopeFit fit_windowed(const LogLogSample& sample, int m, int b) {
    if (m < 1 || b < 1)
        throw std::invalid_argument("fit_windowed: m and b must be positive");
    std::vector<LogLogSample::Point> window;
    for (const auto& p : sample.points)
        if (p.k >= m && p.k <= b + m) window.push_back(p);
    if (window.size() < 2)
        throw std::runtime_error("fit_windowed: fewer than 2 retained points in window");
    SlopeFit fit = detail::ols_with_intercept(window);
    return fit;
}

inline SlopeFit fit(const LogLogSample& sample, FitMethod method) {
    switch (method) {
        case FitMethod::ols_intercept: return fit_ols_intercept(sample);
        case FitMethod::ols_origin: return fit_ols_origin(sample);
        case FitMethod::lad_intercept: return fit_lad_intercept(sample);
    }
    throw std::logic_error("fit: unknown method");
}

} // namespace scanrate
