#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "scanrate/scan.hpp"

namespace scanrate {

using Series = std::vector<double>;

/// Identity of a block statistic. Moment statistics come in a diverging sum
/// form and an averaged form; the two differ by a factor k and therefore by
/// an exact slope shift of 1 in the log-log regression.
struct Statistic {
    enum class Kind {
        sum_squares,     // sum of x^2 over the block
        avg_squares,     // (1/k) sum of x^2
        mean,            // (1/k) sum of x
        abs_moment_sum,  // sum of |x|^r
        abs_moment_avg,  // (1/k) sum of |x|^r
        maximum,
        minimum,
        range,
    };

    Kind kind = Kind::avg_squares;
    int order = 2;  // r, used by the abs-moment forms only

    static Statistic sum_squares() { return {Kind::sum_squares, 2}; }
    static Statistic avg_squares() { return {Kind::avg_squares, 2}; }
    static Statistic mean() { return {Kind::mean, 1}; }
    static Statistic abs_moment_sum(int r) { return checked(Kind::abs_moment_sum, r); }
    static Statistic abs_moment_avg(int r) { return checked(Kind::abs_moment_avg, r); }
    static Statistic maximum() { return {Kind::maximum, 1}; }
    static Statistic minimum() { return {Kind::minimum, 1}; }
    static Statistic range() { return {Kind::range, 1}; }

    bool averaged() const {
        return kind == Kind::avg_squares || kind == Kind::mean || kind == Kind::abs_moment_avg;
    }

    std::string id() const {
        switch (kind) {
            case Kind::sum_squares: return "sum-squares";
            case Kind::avg_squares: return "avg-squares";
            case Kind::mean: return "mean";
            case Kind::abs_moment_sum: return "abs-moment-sum-" + std::to_string(order);
            case Kind::abs_moment_avg: return "abs-moment-avg-" + std::to_string(order);
            case Kind::maximum: return "max";
            case Kind::minimum: return "min";
            case Kind::range: return "range";
        }
        return "?";
    }

    friend bool operator==(const Statistic&, const Statistic&) = default;

private:
    static Statistic checked(Kind k, int r) {
        if (r < 1) throw std::invalid_argument("abs-moment order must be >= 1");
        return {k, r};
    }
};

namespace detail {

inline double int_pow_abs(double x, int r) {
    double a = std::fabs(x), p = 1.0;
    for (int i = 0; i < r; ++i) p *= a;
    return p;
}

// Kahan-compensated running sum; trajectories feed log transforms, so the
// accumulated drift has to stay well below the 1e-9 batch-equivalence bound.
struct CompensatedSum {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

} // namespace detail

/// Constant-time, constant-memory block statistic accumulator supporting
/// expansion at either end. value() matches a from-scratch evaluation of the
/// current window to within 1e-9 relative error.
class IncrementalStatistic {
public:
    explicit IncrementalStatistic(Statistic stat) : stat_(stat) {}

    void init(double x) {
        count_ = 1;
        acc_ = {};
        acc_.add(term(x));
        min_ = max_ = x;
    }

    void extend_left(double x) { extend(x); }
    void extend_right(double x) { extend(x); }

    double value() const {
        if (count_ == 0) throw std::logic_error("IncrementalStatistic: empty");
        switch (stat_.kind) {
            case Statistic::Kind::sum_squares:
            case Statistic::Kind::abs_moment_sum:
                return acc_.sum;
            case Statistic::Kind::avg_squares:
            case Statistic::Kind::mean:
            case Statistic::Kind::abs_moment_avg:
                return acc_.sum / static_cast<double>(count_);
            case Statistic::Kind::maximum: return max_;
            case Statistic::Kind::minimum: return min_;
            case Statistic::Kind::range: return max_ - min_;
        }
        return std::numeric_limits<double>::quiet_NaN();
    }

    long long count() const { return count_; }

private:
    double term(double x) const {
        switch (stat_.kind) {
            case Statistic::Kind::sum_squares:
            case Statistic::Kind::avg_squares:
                return x * x;
            case Statistic::Kind::mean:
                return x;
            case Statistic::Kind::abs_moment_sum:
            case Statistic::Kind::abs_moment_avg:
                return detail::int_pow_abs(x, stat_.order);
            default:
                return 0.0;  // extrema tracked separately
        }
    }

    void extend(double x) {
        ++count_;
        acc_.add(term(x));
        min_ = std::min(min_, x);
        max_ = std::max(max_, x);
    }

    Statistic stat_;
    detail::CompensatedSum acc_;
    double min_ = 0.0, max_ = 0.0;
    long long count_ = 0;
};

/// Direct evaluation on a window, no incremental state.
inline double batch_value(std::span<const double> window, Statistic stat) {
    if (window.empty()) throw std::domain_error("batch_value: empty window");
    switch (stat.kind) {
        case Statistic::Kind::maximum:
            return *std::max_element(window.begin(), window.end());
        case Statistic::Kind::minimum:
            return *std::min_element(window.begin(), window.end());
        case Statistic::Kind::range:
            return *std::max_element(window.begin(), window.end()) -
                   *std::min_element(window.begin(), window.end());
        default: break;
    }
    detail::CompensatedSum acc;
    for (double x : window) {
        switch (stat.kind) {
            case Statistic::Kind::sum_squares:
            case Statistic::Kind::avg_squares:
                acc.add(x * x);
                break;
            case Statistic::Kind::mean:
                acc.add(x);
                break;
            default:
                acc.add(detail::int_pow_abs(x, stat.order));
                break;
        }
    }
    return stat.averaged() ? acc.sum / static_cast<double>(window.size()) : acc.sum;
}

/// The statistic's values along one scan: values[k-1] is the statistic on the
/// scan's block of size k.
struct Trajectory {
    Statistic stat;
    ScanPath scan;
    std::vector<double> values;

    int n() const { return scan.n(); }
};

/// Computes the whole trajectory in O(n) by expanding the singleton block one
/// element at a time along the scan.
inline Trajectory trajectory(const Series& series, const ScanPath& scan, Statistic stat) {
    const int n = scan.n();
    if (static_cast<int>(series.size()) != n)
        throw std::invalid_argument("trajectory: series length does not match scan");

    std::vector<double> values(static_cast<std::size_t>(n));
    IncrementalStatistic acc(stat);

    int lo = scan.start_index();  // 1-based current window [lo, hi]
    int hi = lo;
    acc.init(series[static_cast<std::size_t>(lo - 1)]);
    values[0] = acc.value();

    const auto& shrinks = scan.shrinks();
    for (int k = 2; k <= n; ++k) {
        // expansion k-2 is shrink n-k read backwards
        if (shrinks[static_cast<std::size_t>(n - k)] == Shrink::Left)
            acc.extend_left(series[static_cast<std::size_t>(--lo - 1)]);
        else
            acc.extend_right(series[static_cast<std::size_t>(++hi - 1)]);
        values[static_cast<std::size_t>(k - 1)] = acc.value();
    }
    return Trajectory{stat, scan, std::move(values)};
}

} // namespace scanrate
