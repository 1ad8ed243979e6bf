#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include <scanrate/io.hpp>

using namespace scanrate;
using Catch::Approx;

TEST_CASE("read_series accepts plain decimals and the value-header form") {
    std::istringstream plain("1.5\n-2\n3e-1\n");
    CHECK(read_series(plain) == Series{1.5, -2.0, 0.3});

    std::istringstream csv("value\n1\n2\n");
    CHECK(read_series(csv) == Series{1.0, 2.0});

    std::istringstream blank("1\n\n  \n2\n");
    CHECK(read_series(blank) == Series{1.0, 2.0});

    std::istringstream bad("1\n2\nabc\n");
    try {
        read_series(bad);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 3);
    }

    std::istringstream trailing("1\n2.5x\n");
    CHECK_THROWS_AS(read_series(trailing), parse_error);

    std::istringstream nan_line("1\nnan\n");
    CHECK_THROWS_AS(read_series(nan_line), parse_error);
}

TEST_CASE("estimate report JSON carries the spec echo and per-scan values") {
    Series x(64);
    RandomStream stream(3);
    for (auto& v : x) v = sample_stable(1.0, 0.0, stream);

    EstimatorSpec spec;
    spec.scan_policy = ScanPolicy::uniform;
    spec.scan_count = 7;
    spec.seed = 21;
    spec.aggregation = Aggregation::median;
    const EstimateReport rep = estimate(x, spec);

    const nlohmann::json j = to_json(rep);
    CHECK(j["point_estimate"].get<double>() == Approx(rep.point));
    CHECK(j["per_scan"].size() == 7);
    CHECK(j["spec"]["statistic"] == "avg-squares");
    CHECK(j["spec"]["map"] == "tail-2-avg");
    CHECK(j["spec"]["seed"] == 21);
    CHECK(j["spec"]["aggregation"] == "median");

    const std::string row = report_csv_row(rep);
    CHECK(row.rfind("avg-squares,tail-2-avg,ols-intercept,7,median,", 0) == 0);
}

TEST_CASE("trajectory and scatter CSV exports") {
    const Series x{1.0, 2.0, 3.0};
    const Trajectory t = trajectory(x, direct_scan(3), Statistic::sum_squares());
    const std::string csv = trajectory_csv(t);
    CHECK(csv == "k,block_start,T_k\n1,1,1\n2,1,5\n3,1,14\n");

    const LogLogSample s = build_loglog_sample(t, 1);
    const std::string scatter = loglog_csv(s);
    CHECK(scatter.rfind("k,log_k,Y_k,retained\n1,0,0,1\n", 0) == 0);
    CHECK(scatter.find(",1\n") != std::string::npos);

    // dropped rows appear with retained = 0
    Trajectory bad = t;
    bad.values[1] = 0.0;
    const std::string with_drop = loglog_csv(build_loglog_sample(bad, 1));
    CHECK(with_drop.find(",,0\n") != std::string::npos);
}

TEST_CASE("series round trip through a file") {
    const Series x{1.25, -3.5, 0.001953125, 12345.6789};
    const std::string path = "/tmp/scanrate_io_roundtrip.txt";
    write_series_file(path, x);
    const Series back = read_series_file(path);
    REQUIRE(back.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(back[i] == Approx(x[i]).epsilon(1e-11));
}
