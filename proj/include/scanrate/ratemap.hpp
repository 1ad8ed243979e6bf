#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

namespace scanrate {

/// An invertible, strictly monotone map g from the target parameter lambda to
/// the log-log regression slope, with its admissible domains and an optional
/// clip interval applied to inverted values.
struct RateMap {
    std::string id;
    std::function<double(double)> forward;   // lambda -> slope
    std::function<double(double)> inverse;   // slope -> lambda
    double lambda_lo = 0.0, lambda_hi = 0.0; // admissible lambda interval (closure)
    double slope_lo = 0.0, slope_hi = 0.0;   // forward image (closure), may be infinite
    std::optional<std::pair<double, double>> clip;  // applied after inversion

    RateMap with_clip(std::optional<std::pair<double, double>> c) const {
        RateMap m = *this;
        m.clip = std::move(c);
        return m;
    }
};

struct InvertedSlope {
    double lambda = 0.0;
    bool clipped = false;
};

/// Inverts a fitted slope through the map. Slopes outside the admissible
/// image are pulled to the nearest boundary before inversion; the result is
/// then clamped into the clip interval when one is configured. Either
/// adjustment marks the result as clipped. A map without a clip interval
/// refuses out-of-domain slopes instead.
inline InvertedSlope invert_slope(const RateMap& map, double slope) {
    InvertedSlope out;
    double s = slope;
    if (s < map.slope_lo || s > map.slope_hi) {
        if (!map.clip)
            throw std::domain_error("invert_slope: slope outside the image of " + map.id);
        s = std::clamp(s, map.slope_lo, map.slope_hi);
        out.clipped = true;
    }
    double lambda = map.inverse(s);
    if (map.clip) {
        const double lo = map.clip->first, hi = map.clip->second;
        if (lambda < lo || lambda > hi) {
            lambda = std::clamp(lambda, lo, hi);
            out.clipped = true;
        }
    }
    out.lambda = lambda;
    return out;
}

/// Max round-trip error |inverse(forward(l)) - l| over a grid.
inline double roundtrip_check(const RateMap& map, std::span<const double> grid) {
    double worst = 0.0;
    for (double l : grid) {
        if (l < map.lambda_lo || l > map.lambda_hi)
            throw std::domain_error("roundtrip_check: grid point outside lambda domain");
        worst = std::max(worst, std::fabs(map.inverse(map.forward(l)) - l));
    }
    return worst;
}

namespace rate_maps {

/// Heavy-tail map for the r-th absolute moment: slope r/alpha (sum form) or
/// r/alpha - 1 (averaged form), alpha in (0, min(r, 2)], clipped there.
inline RateMap tail_abs_moment(int r, bool sum_form) {
    if (r < 1) throw std::invalid_argument("tail_abs_moment: order must be >= 1");
    const double d = sum_form ? 0.0 : 1.0;
    const double rr = static_cast<double>(r);
    const double hi = std::min(rr, 2.0);
    RateMap m;
    m.id = "tail-" + std::to_string(r) + (sum_form ? "-sum" : "-avg");
    m.forward = [rr, d](double a) { return rr / a - d; };
    m.inverse = [rr, d](double g) { return rr / (g + d); };
    m.lambda_lo = 0.0;
    m.lambda_hi = hi;
    m.slope_lo = rr / hi - d;  // slope at the alpha upper end
    m.slope_hi = std::numeric_limits<double>::infinity();
    m.clip = std::pair{0.0, hi};
    return m;
}

/// Second-moment special case: slope 2/alpha or 2/alpha - 1, alpha in (0, 2].
inline RateMap tail_sum_squares(bool sum_form) { return tail_abs_moment(2, sum_form); }

/// Block-maximum map: slope 1/alpha, alpha in (0, 2].
inline RateMap tail_max() {
    RateMap m;
    m.id = "tail-max";
    m.forward = [](double a) { return 1.0 / a; };
    m.inverse = [](double g) { return 1.0 / g; };
    m.lambda_lo = 0.0;
    m.lambda_hi = 2.0;
    m.slope_lo = 0.5;
    m.slope_hi = std::numeric_limits<double>::infinity();
    m.clip = std::pair{0.0, 2.0};
    return m;
}

/// Long-memory mean map: the centered sample mean decays at rate
/// k^(-lambda/2) with lambda = q*beta, so slope = -lambda/2. Values above 1
/// indicate weak dependence; the admissible interval runs to 2 so that the
/// boundary stays visible.
inline RateMap lm_mean() {
    RateMap m;
    m.id = "lm-mean";
    m.forward = [](double l) { return -l / 2.0; };
    m.inverse = [](double g) { return -2.0 * g; };
    m.lambda_lo = 0.0;
    m.lambda_hi = 2.0;
    m.slope_lo = -1.0;
    m.slope_hi = 0.0;
    m.clip = std::pair{0.0, 2.0};
    return m;
}

/// Raw slope reporting.
inline RateMap identity() {
    RateMap m;
    m.id = "identity";
    m.forward = [](double l) { return l; };
    m.inverse = [](double g) { return g; };
    m.lambda_lo = -std::numeric_limits<double>::infinity();
    m.lambda_hi = std::numeric_limits<double>::infinity();
    m.slope_lo = -std::numeric_limits<double>::infinity();
    m.slope_hi = std::numeric_limits<double>::infinity();
    return m;
}

} // namespace rate_maps

} // namespace scanrate
