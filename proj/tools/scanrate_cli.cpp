// Command-line front end: estimate rates on user data, simulate the supported
// models, reproduce the simulation tables, and export diagnostic scatters.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <scanrate/scanrate.hpp>

namespace {

using namespace scanrate;

constexpr int kExitOk = 0;
constexpr int kExitEstimator = 1;
constexpr int kExitParse = 2;

Statistic parse_statistic(const std::string& id) {
    if (id == "sum-squares") return Statistic::sum_squares();
    if (id == "avg-squares") return Statistic::avg_squares();
    if (id == "mean") return Statistic::mean();
    if (id == "max") return Statistic::maximum();
    if (id == "min") return Statistic::minimum();
    if (id == "range") return Statistic::range();
    const auto parse_order = [&](const std::string& prefix) -> std::optional<int> {
        if (id.rfind(prefix, 0) != 0) return std::nullopt;
        return std::stoi(id.substr(prefix.size()));
    };
    if (auto r = parse_order("abs-moment-sum-")) return Statistic::abs_moment_sum(*r);
    if (auto r = parse_order("abs-moment-avg-")) return Statistic::abs_moment_avg(*r);
    throw CLI::ValidationError("--stat", "unknown statistic id: " + id);
}

RateMap parse_map(const std::string& id, const Statistic& stat) {
    const bool sum_form = !stat.averaged();
    if (id == "tail-max") return rate_maps::tail_max();
    if (id == "lm-mean") return rate_maps::lm_mean();
    if (id == "identity") return rate_maps::identity();
    if (id.rfind("tail-", 0) == 0) {
        const int r = std::stoi(id.substr(5));
        return rate_maps::tail_abs_moment(r, sum_form);
    }
    throw CLI::ValidationError("--map", "unknown map id: " + id);
}

FitMethod parse_method(const std::string& id) {
    if (id == "ols-intercept") return FitMethod::ols_intercept;
    if (id == "ols-origin") return FitMethod::ols_origin;
    if (id == "lad-intercept") return FitMethod::lad_intercept;
    throw CLI::ValidationError("--method", "unknown method: " + id);
}

ScanPolicy parse_policy(const std::string& id) {
    if (id == "direct") return ScanPolicy::direct;
    if (id == "reverse") return ScanPolicy::reverse;
    if (id == "uniform") return ScanPolicy::uniform;
    throw CLI::ValidationError("--scan", "unknown scan policy: " + id);
}

Aggregation parse_aggregation(const std::string& id) {
    if (id == "none") return Aggregation::none;
    if (id == "mean") return Aggregation::mean;
    if (id == "median") return Aggregation::median;
    throw CLI::ValidationError("--agg", "unknown aggregation: " + id);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
}

struct EstimateArgs {
    std::string input;
    std::string stat_id = "avg-squares";
    std::string map_id = "tail-2";
    std::string method_id = "ols-intercept";
    std::string scan_id = "direct";
    std::string agg_id = "none";
    int scans = 1;
    int trim = 1;
    std::uint64_t seed = 0;
    bool centered = false;
    int centered_m = 10;
    int centered_b = 0;
    std::string json_path;
};

int run_estimate(const EstimateArgs& args) {
    const Series series = read_series_file(args.input);
    if (series.size() < 8)
        throw parse_error("need at least 8 observations, got " +
                              std::to_string(series.size()),
                          static_cast<int>(series.size()));

    EstimatorSpec spec;
    spec.stat = parse_statistic(args.stat_id);
    spec.map = parse_map(args.map_id, spec.stat);
    spec.method = parse_method(args.method_id);
    spec.trim_n0 = args.trim;
    spec.scan_policy = parse_policy(args.scan_id);
    spec.scan_count = args.scans;
    spec.seed = args.seed;
    spec.aggregation = parse_aggregation(args.agg_id);
    if (args.centered) spec.centered = CenteredWindow{args.centered_m, args.centered_b};

    const EstimateReport report = estimate(series, spec);

    std::vector<double> lambdas;
    for (const auto& e : report.per_scan) lambdas.push_back(e.lambda);
    std::sort(lambdas.begin(), lambdas.end());

    std::printf("point_estimate   %.12g\n", report.point);
    std::printf("scans            %zu\n", lambdas.size());
    std::printf("per_scan_min     %.12g\n", lambdas.front());
    std::printf("per_scan_median  %.12g\n", median_of(lambdas));
    std::printf("per_scan_max     %.12g\n", lambdas.back());
    std::printf("clipped_fraction %.12g\n", report.clipped_fraction());
    std::printf("dropped_points   %d\n", report.dropped_points);
    std::printf("failed_scans     %d\n", report.failed_scans);
    std::printf("spec             %s\n", to_json(report.spec).dump().c_str());

    if (!args.json_path.empty()) write_text_file(args.json_path, to_json(report).dump(2) + "\n");
    return kExitOk;
}

struct DiagnoseArgs {
    std::string input;
    std::string stat_id = "avg-squares";
    std::string scan_id = "direct";
    std::uint64_t seed = 0;
    int trim = 1;
    bool centered = false;
    std::string out_path;
    std::string traj_path;
};

int run_diagnose(const DiagnoseArgs& args) {
    const Series series = read_series_file(args.input);
    if (series.empty()) throw parse_error("empty input", 1);
    const Statistic stat = parse_statistic(args.stat_id);
    const int n = static_cast<int>(series.size());

    ScanPath scan = direct_scan(n);
    if (args.scan_id == "reverse") {
        scan = reverse_scan(n);
    } else if (args.scan_id == "uniform") {
        RandomStream stream(args.seed);
        scan = uniform_random_scan(n, stream);
    } else if (args.scan_id != "direct") {
        throw CLI::ValidationError("--scan", "unknown scan policy: " + args.scan_id);
    }

    const Trajectory traj = trajectory(series, scan, stat);
    std::optional<double> center;
    if (args.centered) center = batch_value(std::span<const double>(series), stat);
    const LogLogSample sample = build_loglog_sample(traj, args.trim, center);

    const std::string csv = loglog_csv(sample);
    if (args.out_path.empty()) std::fputs(csv.c_str(), stdout);
    else write_text_file(args.out_path, csv);
    if (!args.traj_path.empty()) write_text_file(args.traj_path, trajectory_csv(traj));
    return kExitOk;
}

struct SimulateArgs {
    std::string model_id = "iid";
    std::string innov_id = "gaussian";
    int n = 1000;
    std::uint64_t seed = 0;
    double rho = 0.1;
    double hurst = 0.9;
    double alpha = 1.5;
    double skew = 0.0;
    double zeta = 0.0;
    double pareto_a = 2.0, scale = 1.0;
    double burr_c = 2.0, burr_k = 0.5;
    std::string hermite_id = "identity";
    std::vector<double> fir;
    int burn_in = 1000;
    std::string out_path;
};

ModelSpec build_model(const SimulateArgs& args) {
    ModelSpec model;
    model.n = args.n;
    model.burn_in = args.burn_in;

    if (args.innov_id == "gaussian") model.innovation = InnovationSpec::gaussian();
    else if (args.innov_id == "cauchy") model.innovation = InnovationSpec::cauchy();
    else if (args.innov_id == "stable")
        model.innovation = InnovationSpec::stable(args.alpha, args.skew);
    else if (args.innov_id == "pareto")
        model.innovation = InnovationSpec::pareto(args.pareto_a, args.scale);
    else if (args.innov_id == "burr")
        model.innovation = InnovationSpec::burr(args.burr_c, args.scale, args.burr_k);
    else if (args.innov_id == "burr-logmod")
        model.innovation = InnovationSpec::burr_logmod(args.burr_c, args.scale, args.burr_k);
    else throw CLI::ValidationError("--innov", "unknown innovation: " + args.innov_id);

    const HermiteId h = args.hermite_id == "hermite2" ? HermiteId::hermite2
                                                      : HermiteId::identity;
    if (args.model_id == "iid") model.dependence = DependenceSpec::iid();
    else if (args.model_id == "ar1") model.dependence = DependenceSpec::ar1(args.rho);
    else if (args.model_id == "fir") model.dependence = DependenceSpec::fir(args.fir);
    else if (args.model_id == "gaussian-lm")
        model.dependence = DependenceSpec::gaussian_lm(args.hurst);
    else if (args.model_id == "subordinated")
        model.dependence = DependenceSpec::subordinated(h, args.hurst);
    else if (args.model_id == "product-lm")
        model.dependence = DependenceSpec::product_lm(args.alpha, args.zeta);
    else throw CLI::ValidationError("--model", "unknown model: " + args.model_id);
    return model;
}

int run_simulate(const SimulateArgs& args) {
    const ModelSpec model = build_model(args);
    RandomStream stream(args.seed);
    const Series series = generate(model, stream);

    if (args.out_path.empty()) {
        char buf[40];
        for (double x : series) {
            std::snprintf(buf, sizeof buf, "%.12g\n", x);
            std::fputs(buf, stdout);
        }
        return kExitOk;
    }
    write_series_file(args.out_path, series);
    nlohmann::json sidecar;
    sidecar["model"] = model.id();
    sidecar["n"] = model.n;
    sidecar["seed"] = args.seed;
    sidecar["burn_in"] = model.burn_in;
    write_text_file(args.out_path + ".json", sidecar.dump(2) + "\n");
    return kExitOk;
}

struct TableArgs {
    std::string panel = "a";
    std::vector<std::string> rows = {"i", "ii", "iii", "iv", "v", "vi", "vii"};
    int reps = 100;
    std::uint64_t seed = 0;
    int n = 1000;
    int threads = 1;
    std::string out_path;
    std::string json_path;
    // table1
    std::vector<int> scans = {20, 100, 200};
    int trim = 10;
    // table2
    std::vector<int> q_list = {100, 200, 300, 400};
    std::string hill_sign = "positive";
    double divergence_threshold = 2.0;
};

int run_table1(const TableArgs& args) {
    Table1Options opt;
    opt.panel = args.panel.at(0);
    opt.rows = args.rows;
    opt.scan_counts = args.scans;
    opt.replicates = args.reps;
    opt.n = args.n;
    opt.seed = args.seed;
    opt.trim = args.trim;
    opt.threads = args.threads;
    const TableResult table = table1(opt);
    const std::string csv = to_csv(table);
    if (args.out_path.empty()) std::fputs(csv.c_str(), stdout);
    else write_text_file(args.out_path, csv);
    if (!args.json_path.empty()) write_text_file(args.json_path, to_json(table).dump(2) + "\n");
    return kExitOk;
}

int run_table2(const TableArgs& args) {
    Table2Options opt;
    opt.panel = args.panel.at(0);
    opt.rows = args.rows;
    opt.q_list = args.q_list;
    opt.replicates = args.reps;
    opt.n = args.n;
    opt.seed = args.seed;
    opt.sign = args.hill_sign == "absolute" ? HillSign::absolute : HillSign::positive;
    opt.divergence_threshold = args.divergence_threshold;
    opt.threads = args.threads;
    const auto rows = table2(opt);
    const std::string csv = to_csv(rows, opt.panel, opt.seed);
    if (args.out_path.empty()) std::fputs(csv.c_str(), stdout);
    else write_text_file(args.out_path, csv);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rate estimation for block statistics along nested-block scans"};
    app.require_subcommand(1);

    EstimateArgs est;
    auto* cmd_est = app.add_subcommand("estimate", "estimate a rate from a series file");
    cmd_est->set_config("--config", "", "flat key=value config file; flags override");
    cmd_est->add_option("--input", est.input, "newline-delimited decimals or CSV with header 'value'")
        ->required();
    cmd_est->add_option("--stat", est.stat_id, "statistic id");
    cmd_est->add_option("--map", est.map_id, "rate map id (tail-R, tail-max, lm-mean, identity)");
    cmd_est->add_option("--method", est.method_id, "ols-intercept | ols-origin | lad-intercept");
    cmd_est->add_option("--scan", est.scan_id, "direct | reverse | uniform");
    cmd_est->add_option("--scans", est.scans, "number of scans when --scan uniform");
    cmd_est->add_option("--agg", est.agg_id, "none | mean | median");
    cmd_est->add_option("--trim", est.trim, "first block size used in the regression");
    cmd_est->add_option("--seed", est.seed, "scan draw seed");
    cmd_est->add_flag("--centered", est.centered, "regress log|T_k - T_n| on a window");
    cmd_est->add_option("--centered-m", est.centered_m, "window start m");
    cmd_est->add_option("--centered-b", est.centered_b, "window width b (0 = floor(n^(2/3)))");
    cmd_est->add_option("--json", est.json_path, "write the full report as JSON");

    DiagnoseArgs diag;
    auto* cmd_diag = app.add_subcommand("diagnose", "export the log-log scatter for a scan");
    cmd_diag->set_config("--config", "", "flat key=value config file; flags override");
    cmd_diag->add_option("--input", diag.input)->required();
    cmd_diag->add_option("--stat", diag.stat_id);
    cmd_diag->add_option("--scan", diag.scan_id, "direct | reverse | uniform");
    cmd_diag->add_option("--seed", diag.seed);
    cmd_diag->add_option("--trim", diag.trim);
    cmd_diag->add_flag("--centered", diag.centered);
    cmd_diag->add_option("--out", diag.out_path, "scatter CSV path (default stdout)");
    cmd_diag->add_option("--traj-out", diag.traj_path, "also write the raw trajectory CSV");

    SimulateArgs sim;
    auto* cmd_sim = app.add_subcommand("simulate", "generate a series from a model");
    cmd_sim->set_config("--config", "", "flat key=value config file; flags override");
    cmd_sim->add_option("--model", sim.model_id,
                        "iid | ar1 | fir | gaussian-lm | subordinated | product-lm");
    cmd_sim->add_option("--innov", sim.innov_id,
                        "gaussian | cauchy | stable | pareto | burr | burr-logmod");
    cmd_sim->add_option("--n", sim.n)->required();
    cmd_sim->add_option("--seed", sim.seed);
    cmd_sim->add_option("--rho", sim.rho, "ar1 coefficient");
    cmd_sim->add_option("--hurst", sim.hurst, "Hurst parameter for the Gaussian models");
    cmd_sim->add_option("--alpha", sim.alpha, "stable index / product-model tail index");
    cmd_sim->add_option("--skew", sim.skew, "stable skewness");
    cmd_sim->add_option("--zeta", sim.zeta, "product-model memory exponent in [0, 1)");
    cmd_sim->add_option("--pareto-a", sim.pareto_a);
    cmd_sim->add_option("--scale", sim.scale);
    cmd_sim->add_option("--burr-c", sim.burr_c);
    cmd_sim->add_option("--burr-k", sim.burr_k);
    cmd_sim->add_option("--hermite", sim.hermite_id, "identity | hermite2");
    cmd_sim->add_option("--fir", sim.fir, "moving-average coefficients")->delimiter(',');
    cmd_sim->add_option("--burn-in", sim.burn_in);
    cmd_sim->add_option("--out", sim.out_path, "series path (default stdout); adds .json sidecar");

    TableArgs t1;
    auto* cmd_t1 = app.add_subcommand("table1", "tail-index estimator MSE grid");
    cmd_t1->set_config("--config", "", "flat key=value config file; flags override");
    cmd_t1->add_option("--panel", t1.panel, "a (rho=0.1) | b (rho=0.7) | c (rho=-0.5)");
    cmd_t1->add_option("--rows", t1.rows, "subset of i..vii")->delimiter(',');
    cmd_t1->add_option("--reps", t1.reps);
    cmd_t1->add_option("--scans", t1.scans, "N values for the aggregated estimators")
        ->delimiter(',');
    cmd_t1->add_option("--seed", t1.seed);
    cmd_t1->add_option("--n", t1.n);
    cmd_t1->add_option("--trim", t1.trim);
    cmd_t1->add_option("--threads", t1.threads);
    cmd_t1->add_option("--out", t1.out_path, "CSV path (default stdout)");
    cmd_t1->add_option("--json", t1.json_path);

    TableArgs t2;
    auto* cmd_t2 = app.add_subcommand("table2", "Hill benchmark MSE grid");
    cmd_t2->set_config("--config", "", "flat key=value config file; flags override");
    cmd_t2->add_option("--panel", t2.panel);
    cmd_t2->add_option("--rows", t2.rows)->delimiter(',');
    cmd_t2->add_option("--reps", t2.reps);
    cmd_t2->add_option("--q", t2.q_list, "order-statistic counts")->delimiter(',');
    cmd_t2->add_option("--seed", t2.seed);
    cmd_t2->add_option("--n", t2.n);
    cmd_t2->add_option("--hill-sign", t2.hill_sign, "positive | absolute");
    cmd_t2->add_option("--divergence-threshold", t2.divergence_threshold);
    cmd_t2->add_option("--threads", t2.threads);
    cmd_t2->add_option("--out", t2.out_path, "CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_est->parsed()) return run_estimate(est);
        if (cmd_diag->parsed()) return run_diagnose(diag);
        if (cmd_sim->parsed()) return run_simulate(sim);
        if (cmd_t1->parsed()) return run_table1(t1);
        if (cmd_t2->parsed()) return run_table2(t2);
    } catch (const scanrate::parse_error& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitParse;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitEstimator;
    }
    return kExitOk;
}
