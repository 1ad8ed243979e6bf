#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <scanrate/regression.hpp>
#include <scanrate/rng.hpp>
#include <scanrate/scan.hpp>

using namespace scanrate;
using Catch::Approx;

namespace {

Trajectory make_traj(std::vector<double> values) {
    const int n = static_cast<int>(values.size());
    return Trajectory{Statistic::avg_squares(), direct_scan(n), std::move(values)};
}

LogLogSample sample_from_pairs(const std::vector<std::pair<int, double>>& kv) {
    LogLogSample s;
    s.first_k = kv.front().first;
    s.last_k = kv.back().first;
    for (auto [k, y] : kv) s.points.push_back({k, std::log(k), y});
    return s;
}

// Oracle: two-pass normal equations at extended precision.
std::pair<long double, long double> normal_equations(const LogLogSample& s) {
    long double mx = 0, my = 0;
    for (const auto& p : s.points) {
        mx += p.log_k;
        my += p.y;
    }
    mx /= s.points.size();
    my /= s.points.size();
    long double sxy = 0, sxx = 0;
    for (const auto& p : s.points) {
        sxy += (static_cast<long double>(p.log_k) - mx) * (static_cast<long double>(p.y) - my);
        sxx += (static_cast<long double>(p.log_k) - mx) * (static_cast<long double>(p.log_k) - mx);
    }
    const long double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

long double lad_objective(const LogLogSample& s, long double a, long double g) {
    long double obj = 0;
    for (const auto& p : s.points) obj += fabsl(p.y - a - g * p.log_k);
    return obj;
}

} // namespace

TEST_CASE("build_loglog_sample transforms and drops") {
    const Trajectory t = make_traj({1.0, std::exp(1.0), std::exp(2.0)});
    const LogLogSample s = build_loglog_sample(t, 1);
    REQUIRE(s.points.size() == 3);
    CHECK(s.points[0].y == Approx(0.0).margin(1e-15));
    CHECK(s.points[1].y == Approx(1.0));
    CHECK(s.points[2].y == Approx(2.0));

    const Trajectory c = make_traj({5.0, 4.0, 3.0});
    const LogLogSample sc = build_loglog_sample(c, 1, 3.0);
    REQUIRE(sc.points.size() == 2);
    CHECK(sc.points[0].y == Approx(std::log(2.0)));
    CHECK(sc.points[1].y == Approx(0.0).margin(1e-15));
    REQUIRE(sc.dropped.size() == 1);
    CHECK(sc.dropped[0].k == 3);
    CHECK(sc.dropped[0].reason == DropReason::center_tie);

    Trajectory z = make_traj({1.0, 2.0, 3.0, 4.0, 0.0, 6.0, 7.0});
    const LogLogSample sz = build_loglog_sample(z, 1);
    REQUIRE(sz.dropped.size() == 1);
    CHECK(sz.dropped[0].k == 5);
    CHECK(sz.dropped[0].reason == DropReason::nonpositive);

    // majority dropped is an error
    Trajectory bad = make_traj({-1.0, -1.0, -1.0, 1.0});
    CHECK_THROWS_AS(build_loglog_sample(bad, 1), std::runtime_error);
}

TEST_CASE("intercept fit recovers exact lines") {
    std::vector<std::pair<int, double>> kv;
    for (int k = 1; k <= 10; ++k) kv.push_back({k, 3.0 * std::log(k) + 5.0});
    const SlopeFit f = fit_ols_intercept(sample_from_pairs(kv));
    CHECK(f.slope == Approx(3.0).epsilon(1e-12));
    CHECK(*f.intercept == Approx(5.0).epsilon(1e-12));

    std::vector<std::pair<int, double>> flat;
    for (int k = 1; k <= 10; ++k) flat.push_back({k, 4.2});
    CHECK(fit_ols_intercept(sample_from_pairs(flat)).slope == Approx(0.0).margin(1e-15));

    // all k identical
    LogLogSample degenerate;
    degenerate.points = {{3, std::log(3), 1.0}, {3, std::log(3), 2.0}};
    CHECK_THROWS_AS(fit_ols_intercept(degenerate), std::runtime_error);
}

TEST_CASE("intercept fit tracks perturbed lines") {
    std::vector<std::pair<int, double>> kv;
    const double eps = 1e-3;
    for (int k = 1; k <= 50; ++k)
        kv.push_back({k, 3.0 * std::log(k) + 5.0 + ((k % 2) ? eps : -eps)});
    const LogLogSample s = sample_from_pairs(kv);
    const SlopeFit f = fit_ols_intercept(s);
    CHECK(std::fabs(f.slope - 3.0) < 10 * eps);

    const auto [oslope, ointercept] = normal_equations(s);
    CHECK(std::fabs(f.slope - static_cast<double>(oslope)) < 1e-10);
    CHECK(std::fabs(*f.intercept - static_cast<double>(ointercept)) < 1e-10);
}

TEST_CASE("origin fit follows its closed form") {
    std::vector<std::pair<int, double>> kv;
    for (int k = 1; k <= 50; ++k) kv.push_back({k, 2.0 * std::log(k)});
    CHECK(fit_ols_origin(sample_from_pairs(kv)).slope == Approx(2.0).epsilon(1e-12));

    // three points of an affine trajectory, evaluated by hand from the formula
    std::vector<std::pair<int, double>> three;
    long double num = 0, den = 0;
    for (int k = 1; k <= 3; ++k) {
        const double y = 3.0 * std::log(k) + 5.0;
        three.push_back({k, y});
        num += static_cast<long double>(y) * std::log(k);
        den += static_cast<long double>(std::log(k)) * std::log(k);
    }
    const SlopeFit f = fit_ols_origin(sample_from_pairs(three));
    CHECK(f.slope == Approx(static_cast<double>(num / den)).epsilon(1e-13));
    CHECK(f.slope == Approx(8.3092).epsilon(1e-4));
    CHECK_FALSE(f.intercept.has_value());

    // a single point at k = n gives Y_n / log n
    std::vector<std::pair<int, double>> one = {{100, 7.0}};
    CHECK(fit_ols_origin(sample_from_pairs(one)).slope ==
          Approx(7.0 / std::log(100.0)).epsilon(1e-13));

    // only k = 1 retained: log 1 = 0 carries no signal
    std::vector<std::pair<int, double>> k1 = {{1, 3.0}};
    CHECK_THROWS_AS(fit_ols_origin(sample_from_pairs(k1)), std::runtime_error);
}

TEST_CASE("LAD fit is exact on lines and robust to one outlier") {
    std::vector<std::pair<int, double>> kv;
    for (int k = 1; k <= 12; ++k) kv.push_back({k, 3.0 * std::log(k) + 5.0});
    CHECK(fit_lad_intercept(sample_from_pairs(kv)).slope == Approx(3.0).epsilon(1e-12));

    kv[5].second += 50.0;  // one gross outlier
    const SlopeFit f = fit_lad_intercept(sample_from_pairs(kv));
    CHECK(f.slope == Approx(3.0).epsilon(1e-12));
    CHECK(*f.intercept == Approx(5.0).epsilon(1e-12));
}

TEST_CASE("LAD objective beats every pair-interpolating candidate") {
    RandomStream stream(31);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<std::pair<int, double>> kv;
        for (int k = 1; k <= 20; ++k)
            kv.push_back({k, 1.5 * std::log(k) + 4.0 * (stream.next_unit() - 0.5)});
        const LogLogSample s = sample_from_pairs(kv);
        const SlopeFit f = fit_lad_intercept(s);
        const long double best = lad_objective(s, *f.intercept, f.slope);
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            for (std::size_t j = i + 1; j < s.points.size(); ++j) {
                const long double dx = s.points[j].log_k - s.points[i].log_k;
                if (dx == 0) continue;
                const long double g = (s.points[j].y - s.points[i].y) / dx;
                const long double a = s.points[i].y - g * s.points[i].log_k;
                CHECK(best <= lad_objective(s, a, g) + 1e-9);
            }
        }
    }
}

TEST_CASE("windowed fit") {
    std::vector<std::pair<int, double>> kv;
    for (int k = 1; k <= 1000; ++k) kv.push_back({k, 3.0 * std::log(k) + 5.0});
    const LogLogSample s = sample_from_pairs(kv);

    CHECK(fit_windowed(s, 5, 100).slope == Approx(3.0).epsilon(1e-12));
    CHECK(fit_windowed(s, 1, 999).slope ==
          Approx(fit_ols_intercept(s).slope).epsilon(1e-13));
    CHECK(fit_windowed(s, 1, 500).slope ==
          Approx(fit_windowed(s, 10, 491).slope).epsilon(1e-12));

    // an outlier beyond the window is invisible
    auto corrupted = kv;
    corrupted[900].second += 100.0;
    CHECK(fit_windowed(sample_from_pairs(corrupted), 10, 400).slope ==
          Approx(3.0).epsilon(1e-12));

    CHECK_THROWS_AS(fit_windowed(s, 0, 10), std::invalid_argument);
}

TEST_CASE("shift and rescale invariances") {
    RandomStream stream(12);
    std::vector<std::pair<int, double>> kv;
    for (int k = 1; k <= 100; ++k)
        kv.push_back({k, 2.0 * std::log(k) + stream.next_gaussian()});
    const LogLogSample s = sample_from_pairs(kv);

    const double c = 1.7;
    auto shifted = kv;
    for (auto& p : shifted) p.second += c;
    const LogLogSample sc = sample_from_pairs(shifted);

    const SlopeFit f0 = fit_ols_intercept(s);
    const SlopeFit f1 = fit_ols_intercept(sc);
    CHECK(f1.slope == Approx(f0.slope).epsilon(1e-12));
    CHECK(*f1.intercept == Approx(*f0.intercept + c).epsilon(1e-12));

    // the origin fit shifts by c * sum(log k) / sum(log^2 k)
    double slog = 0.0, slog2 = 0.0;
    for (const auto& p : s.points) {
        slog += p.log_k;
        slog2 += p.log_k * p.log_k;
    }
    CHECK(fit_ols_origin(sc).slope ==
          Approx(fit_ols_origin(s).slope + c * slog / slog2).epsilon(1e-10));

    // multiplying T_k by k^d shifts every fitted slope by exactly d
    const double d = 0.75;
    auto powered = kv;
    for (auto& p : powered) p.second += d * std::log(p.first);
    const LogLogSample sp = sample_from_pairs(powered);
    CHECK(fit_ols_intercept(sp).slope == Approx(f0.slope + d).epsilon(1e-10));
    CHECK(fit_lad_intercept(sp).slope ==
          Approx(fit_lad_intercept(s).slope + d).epsilon(1e-10));
}
