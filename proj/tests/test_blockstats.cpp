#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include <scanrate/blockstats.hpp>
#include <scanrate/rng.hpp>

using namespace scanrate;
using Catch::Approx;

namespace {

// Oracle: evaluate the statistic on the window from scratch, independently of
// the incremental machinery.
double naive_stat(const Series& x, const BlockWindow& w, Statistic stat) {
    double acc = 0.0;
    double mn = x[static_cast<std::size_t>(w.start - 1)];
    double mx = mn;
    for (int i = w.start; i < w.start + w.size; ++i) {
        const double v = x[static_cast<std::size_t>(i - 1)];
        mn = std::min(mn, v);
        mx = std::max(mx, v);
        switch (stat.kind) {
            case Statistic::Kind::sum_squares:
            case Statistic::Kind::avg_squares: acc += v * v; break;
            case Statistic::Kind::mean: acc += v; break;
            default: acc += std::pow(std::fabs(v), stat.order); break;
        }
    }
    switch (stat.kind) {
        case Statistic::Kind::maximum: return mx;
        case Statistic::Kind::minimum: return mn;
        case Statistic::Kind::range: return mx - mn;
        default: break;
    }
    return stat.averaged() ? acc / w.size : acc;
}

} // namespace

TEST_CASE("batch_value basics") {
    const Series v{-2.0, 2.0};
    CHECK(batch_value(v, Statistic::range()) == 4.0);
    const Series ones{1.0, 1.0, 1.0, 1.0};
    CHECK(batch_value(ones, Statistic::mean()) == 1.0);
    const Series w{1.0, -2.0, 3.0};
    CHECK(batch_value(w, Statistic::abs_moment_sum(3)) == Approx(36.0));
    CHECK_THROWS_AS(batch_value(Series{}, Statistic::mean()), std::domain_error);
}

TEST_CASE("trajectory examples") {
    const Series x{1.0, 2.0, 3.0};
    const Trajectory t = trajectory(x, direct_scan(3), Statistic::sum_squares());
    CHECK(t.values == std::vector<double>{1.0, 5.0, 14.0});

    const Series y{3.0, 1.0, 2.0};
    const Trajectory m = trajectory(y, reverse_scan(3), Statistic::maximum());
    CHECK(m.values == std::vector<double>{2.0, 2.0, 3.0});

    CHECK_THROWS_AS(trajectory(x, direct_scan(4), Statistic::mean()),
                    std::invalid_argument);
}

TEST_CASE("incremental equals batch along random scans") {
    RandomStream stream(2024);
    const int n = 500;
    const std::vector<Statistic> stats = {
        Statistic::sum_squares(), Statistic::avg_squares(), Statistic::mean(),
        Statistic::abs_moment_sum(3), Statistic::abs_moment_avg(4),
        Statistic::maximum(), Statistic::minimum(), Statistic::range()};

    for (int rep = 0; rep < 5; ++rep) {
        Series x(n);
        for (auto& v : x) v = 10.0 * (stream.next_unit() - 0.5);
        const ScanPath scan = uniform_random_scan(n, stream);
        for (const auto& stat : stats) {
            const Trajectory t = trajectory(x, scan, stat);
            for (int k = 1; k <= n; k += 7) {
                const double want = naive_stat(x, scan.block_of_size(k), stat);
                const double got = t.values[static_cast<std::size_t>(k - 1)];
                if (want == 0.0) CHECK(std::fabs(got) < 1e-12);
                else CHECK(std::fabs(got - want) / std::fabs(want) < 1e-9);
            }
        }
    }
}

TEST_CASE("prefix consistency of the direct scan") {
    RandomStream stream(5);
    Series x(100);
    for (auto& v : x) v = stream.next_gaussian();

    const Trajectory full = trajectory(x, direct_scan(100), Statistic::avg_squares());
    Series head(x.begin(), x.begin() + 40);
    const Trajectory part = trajectory(head, direct_scan(40), Statistic::avg_squares());
    for (int k = 1; k <= 40; ++k)
        CHECK(full.values[static_cast<std::size_t>(k - 1)] ==
              part.values[static_cast<std::size_t>(k - 1)]);
}

TEST_CASE("homogeneity in the data scale") {
    RandomStream stream(77);
    Series x(60);
    for (auto& v : x) v = stream.next_gaussian() + 2.5;  // keep values positive-ish
    Series pos(60);
    for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = std::fabs(x[i]) + 0.1;

    const double c = 3.0;
    Series cx(60), cpos(60);
    for (std::size_t i = 0; i < 60; ++i) {
        cx[i] = c * x[i];
        cpos[i] = c * pos[i];
    }
    const ScanPath scan = uniform_random_scan(60, stream);

    const auto ss = trajectory(x, scan, Statistic::sum_squares());
    const auto ssc = trajectory(cx, scan, Statistic::sum_squares());
    const auto mx = trajectory(pos, scan, Statistic::maximum());
    const auto mxc = trajectory(cpos, scan, Statistic::maximum());
    const auto m3 = trajectory(x, scan, Statistic::abs_moment_sum(3));
    const auto m3c = trajectory(cx, scan, Statistic::abs_moment_sum(3));
    for (int k = 0; k < 60; ++k) {
        CHECK(ssc.values[k] == Approx(c * c * ss.values[k]).epsilon(1e-12));
        CHECK(mxc.values[k] == Approx(c * mx.values[k]).epsilon(1e-12));
        CHECK(m3c.values[k] == Approx(c * c * c * m3.values[k]).epsilon(1e-12));
    }
}

TEST_CASE("monotone trajectories") {
    RandomStream stream(8);
    Series x(200);
    for (auto& v : x) v = stream.next_gaussian();
    const ScanPath scan = uniform_random_scan(200, stream);

    for (auto stat : {Statistic::maximum(), Statistic::sum_squares(),
                      Statistic::abs_moment_sum(3)}) {
        const Trajectory t = trajectory(x, scan, stat);
        for (int k = 1; k < 200; ++k)
            CHECK(t.values[static_cast<std::size_t>(k)] >=
                  t.values[static_cast<std::size_t>(k - 1)] - 1e-12);
    }
}
