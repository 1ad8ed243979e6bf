#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "scanrate/estimators.hpp"
#include "scanrate/rng.hpp"
#include "scanrate/simulate.hpp"

namespace scanrate {

/// One Monte Carlo cell: a data model, a target value known by construction,
/// and the replication plan. The estimator itself is passed in as a callable
/// so harness behavior can be tested with injected estimators.
struct CellSpec {
    ModelSpec model;
    int replicates = 100;
    double true_lambda = 1.0;
    std::uint64_t master_seed = 0;
    std::string cell_id = "cell";
};

struct McResult {
    double mse = 0.0;
    double bias = 0.0;
    double variance = 0.0;
    int replicates = 0;
    int failed = 0;
    std::vector<double> estimates;
    double wall_seconds = 0.0;
};

/// Estimator under test: receives the generated series plus the replicate's
/// stream (already advanced past generation) for any internal randomness.
using EstimateFn = std::function<double(const Series&, RandomStream&)>;

namespace detail {

inline void parallel_for(int count, int threads, const std::function<void(int)>& body) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const int workers = std::min(threads, count);
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int i = w; i < count; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

inline McResult summarize(std::vector<double> estimates, int failed, double true_lambda,
                          double wall_seconds) {
    McResult r;
    r.failed = failed;
    r.replicates = static_cast<int>(estimates.size());
    r.wall_seconds = wall_seconds;
    if (!estimates.empty()) {
        double mean = 0.0, mse = 0.0;
        for (double e : estimates) {
            mean += e;
            mse += (e - true_lambda) * (e - true_lambda);
        }
        mean /= static_cast<double>(estimates.size());
        mse /= static_cast<double>(estimates.size());
        double var = 0.0;
        for (double e : estimates) var += (e - mean) * (e - mean);
        var /= static_cast<double>(estimates.size());  // population form
        r.mse = mse;
        r.bias = mean - true_lambda;
        r.variance = var;
    }
    r.estimates = std::move(estimates);
    return r;
}

} // namespace detail

/// Runs one cell: replicate r draws its series and any estimator randomness
/// from the stream derived from (master_seed, hash(cell_id), r), so results
/// do not depend on execution order or worker count. Fails when more than 10%
/// of replicates fail.
inline McResult run_cell(const CellSpec& cell, const EstimateFn& estimator, int threads = 1) {
    if (cell.replicates < 1) throw std::invalid_argument("run_cell: replicates must be >= 1");
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t id_hash = fnv1a64(cell.cell_id);

    std::vector<std::optional<double>> slots(static_cast<std::size_t>(cell.replicates));
    detail::parallel_for(cell.replicates, threads, [&](int r) {
        RandomStream stream = RandomStream::derive(cell.master_seed, id_hash,
                                                   static_cast<std::uint64_t>(r));
        try {
            const Series series = generate(cell.model, stream);
            slots[static_cast<std::size_t>(r)] = estimator(series, stream);
        } catch (const std::exception&) {
            // recorded as a failed replicate
        }
    });

    std::vector<double> estimates;
    estimates.reserve(slots.size());
    int failed = 0;
    for (const auto& s : slots) {
        if (s) estimates.push_back(*s);
        else ++failed;
    }
    if (failed * 10 > cell.replicates)
        throw std::runtime_error("run_cell: more than 10% of replicates failed in " +
                                 cell.cell_id);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return detail::summarize(std::move(estimates), failed, cell.true_lambda, secs);
}

// ---------------------------------------------------------------------------
// Reproduction harness for the heavy-tail simulation grids
// ---------------------------------------------------------------------------

struct SimRow {
    std::string label;
    InnovationSpec innovation;
    double true_alpha;
};

/// The seven innovation distributions of the simulation grid, labelled
/// i..vii. Pareto(2, 1) reads as survival (1+z)^-2 and Burr(2, 1, 0.5) as
/// survival (1+z^2)^-1/2 (tail index 1).
inline const std::vector<SimRow>& simulation_rows() {
    static const std::vector<SimRow> rows = {
        {"i", InnovationSpec::cauchy(), 1.0},
        {"ii", InnovationSpec::stable(1.5, 0.0), 1.5},
        {"iii", InnovationSpec::stable(1.9, 0.0), 1.9},
        {"iv", InnovationSpec::gaussian(), 2.0},
        {"v", InnovationSpec::pareto(2.0, 1.0), 2.0},
        {"vi", InnovationSpec::burr(2.0, 1.0, 0.5), 1.0},
        {"vii", InnovationSpec::burr_logmod(2.0, 1.0, 0.5), 1.0},
    };
    return rows;
}

inline double panel_rho(char panel) {
    switch (panel) {
        case 'a': return 0.1;
        case 'b': return 0.7;
        case 'c': return -0.5;
    }
    throw std::invalid_argument("panel must be one of a, b, c");
}

struct TableCell {
    char panel = 'a';
    std::string row;
    std::string estimator;  // alpha-hat | alpha-star | alpha-star-star | hill
    int scan_count = 0;     // N, 0 where not applicable
    int q = 0;              // Hill order count, 0 where not applicable
    bool inapplicable = false;
    McResult result;
};

struct TableResult {
    std::vector<TableCell> cells;
    std::uint64_t seed = 0;
    int replicates = 0;
    std::string notes;  // harness choices worth echoing (nested scans, trim, ...)
};

struct Table1Options {
    char panel = 'a';
    std::vector<std::string> rows = {"i", "ii", "iii", "iv", "v", "vi", "vii"};
    std::vector<int> scan_counts = {20, 100, 200};
    int replicates = 100;
    int n = 1000;
    std::uint64_t seed = 0;
    int trim = 10;  // regression start; early ks carry little tail signal
    int threads = 1;
};

/// Empirical MSE grid for the plain, mean-aggregated and median-aggregated
/// tail index estimators. Within a replicate the scan-based columns reuse one
/// nested scan set: the N values share the first scans drawn, so N1 < N2
/// means the N1 scans are a prefix of the N2 scans.
inline TableResult table1(const Table1Options& opt) {
    const double rho = panel_rho(opt.panel);
    const int n_max = opt.scan_counts.empty()
                          ? 0
                          : *std::max_element(opt.scan_counts.begin(), opt.scan_counts.end());

    TableResult table;
    table.seed = opt.seed;
    table.replicates = opt.replicates;
    table.notes = "nested-scan-sets;trim=" + std::to_string(opt.trim);

    for (const auto& row_label : opt.rows) {
        const auto& rows = simulation_rows();
        const auto it = std::find_if(rows.begin(), rows.end(),
                                     [&](const SimRow& r) { return r.label == row_label; });
        if (it == rows.end())
            throw std::invalid_argument("table1: unknown row " + row_label);
        const SimRow& row = *it;

        ModelSpec model;
        model.innovation = row.innovation;
        model.dependence = DependenceSpec::ar1(rho);
        model.n = opt.n;

        EstimatorSpec base;
        base.stat = Statistic::avg_squares();
        base.map = rate_maps::tail_sum_squares(/*sum_form=*/false);
        base.trim_n0 = opt.trim;

        const std::string cell_id =
            std::string("table1/") + opt.panel + "/" + row.label;
        const std::uint64_t id_hash = fnv1a64(cell_id);

        struct RepOut {
            double plain = 0.0;
            std::vector<double> star, star_star;  // per N
            bool ok = false;
        };
        std::vector<RepOut> reps(static_cast<std::size_t>(opt.replicates));

        detail::parallel_for(opt.replicates, opt.threads, [&](int r) {
            RandomStream stream = RandomStream::derive(opt.seed, id_hash,
                                                       static_cast<std::uint64_t>(r));
            RepOut& out = reps[static_cast<std::size_t>(r)];
            try {
                const Series series = generate(model, stream);

                EstimatorSpec plain = base;
                plain.scan_policy = ScanPolicy::direct;
                out.plain = estimate_uncentered_single(series, plain).point;

                std::vector<double> per_scan;
                per_scan.reserve(static_cast<std::size_t>(n_max));
                EstimatorSpec scan_spec = base;
                for (int i = 0; i < n_max; ++i) {
                    const ScanPath scan = uniform_random_scan(opt.n, stream);
                    per_scan.push_back(
                        detail::estimate_on_scan(series, scan, scan_spec, std::nullopt, i)
                            .estimate.lambda);
                }
                for (int N : opt.scan_counts) {
                    std::vector<double> prefix(per_scan.begin(), per_scan.begin() + N);
                    out.star.push_back(mean_of(prefix));
                    out.star_star.push_back(median_of(std::move(prefix)));
                }
                out.ok = true;
            } catch (const std::exception&) {
                // failed replicate
            }
        });

        auto collect = [&](const std::function<double(const RepOut&)>& pick) {
            std::vector<double> v;
            int failed = 0;
            for (const auto& rep : reps) {
                if (rep.ok) v.push_back(pick(rep));
                else ++failed;
            }
            if (failed * 10 > opt.replicates)
                throw std::runtime_error("table1: more than 10% replicates failed in " +
                                         cell_id);
            return detail::summarize(std::move(v), failed, row.true_alpha, 0.0);
        };

        table.cells.push_back(
            {opt.panel, row.label, "alpha-hat", 0, 0, false,
             collect([](const RepOut& r) { return r.plain; })});
        for (std::size_t j = 0; j < opt.scan_counts.size(); ++j) {
            table.cells.push_back(
                {opt.panel, row.label, "alpha-star", opt.scan_counts[j], 0, false,
                 collect([j](const RepOut& r) { return r.star[j]; })});
            table.cells.push_back(
                {opt.panel, row.label, "alpha-star-star", opt.scan_counts[j], 0, false,
                 collect([j](const RepOut& r) { return r.star_star[j]; })});
        }
    }
    return table;
}

struct Table2Options {
    char panel = 'a';
    std::vector<std::string> rows = {"i", "ii", "iii", "iv", "v", "vi", "vii"};
    std::vector<int> q_list = {100, 200, 300, 400};
    int replicates = 100;
    int n = 1000;
    std::uint64_t seed = 0;
    HillSign sign = HillSign::positive;
    std::vector<int> qopt_grid = {};  // empty = 20, 40, ..., 400
    double divergence_threshold = 2.0;
    int threads = 1;
};

struct Table2RowResult {
    std::string row;
    std::vector<std::pair<int, McResult>> per_q;
    int q_opt = 0;
    double q_opt_mse = 0.0;
    bool inapplicable = false;
};

/// Hill benchmark grid plus the empirically optimal q per row. A row whose
/// worst requested-q MSE exceeds the divergence threshold is reported as
/// inapplicable (the estimator drifts off without stabilizing there).
inline std::vector<Table2RowResult> table2(const Table2Options& opt) {
    std::vector<int> qopt_grid = opt.qopt_grid;
    if (qopt_grid.empty())
        for (int q = 20; q <= 400; q += 20) qopt_grid.push_back(q);

    std::vector<int> all_q = opt.q_list;
    all_q.insert(all_q.end(), qopt_grid.begin(), qopt_grid.end());
    std::sort(all_q.begin(), all_q.end());
    all_q.erase(std::unique(all_q.begin(), all_q.end()), all_q.end());

    const double rho = panel_rho(opt.panel);
    std::vector<Table2RowResult> out;

    for (const auto& row_label : opt.rows) {
        const auto& rows = simulation_rows();
        const auto it = std::find_if(rows.begin(), rows.end(),
                                     [&](const SimRow& r) { return r.label == row_label; });
        if (it == rows.end())
            throw std::invalid_argument("table2: unknown row " + row_label);
        const SimRow& row = *it;

        ModelSpec model;
        model.innovation = row.innovation;
        model.dependence = DependenceSpec::ar1(rho);
        model.n = opt.n;

        const std::string cell_id =
            std::string("table2/") + opt.panel + "/" + row.label;
        const std::uint64_t id_hash = fnv1a64(cell_id);

        std::vector<std::vector<std::optional<double>>> est(
            all_q.size(),
            std::vector<std::optional<double>>(static_cast<std::size_t>(opt.replicates)));
        detail::parallel_for(opt.replicates, opt.threads, [&](int r) {
            RandomStream stream = RandomStream::derive(opt.seed, id_hash,
                                                       static_cast<std::uint64_t>(r));
            const Series series = generate(model, stream);
            for (std::size_t qi = 0; qi < all_q.size(); ++qi) {
                try {
                    const double a = hill_estimate(series, all_q[qi], opt.sign);
                    if (std::isfinite(a)) est[qi][static_cast<std::size_t>(r)] = a;
                } catch (const std::exception&) {
                }
            }
        });

        auto result_for = [&](std::size_t qi) {
            std::vector<double> v;
            int failed = 0;
            for (const auto& s : est[qi]) {
                if (s) v.push_back(*s);
                else ++failed;
            }
            return detail::summarize(std::move(v), failed, row.true_alpha, 0.0);
        };

        Table2RowResult rr;
        rr.row = row.label;
        for (std::size_t qi = 0; qi < all_q.size(); ++qi) {
            const int q = all_q[qi];
            const McResult res = result_for(qi);
            if (std::find(opt.q_list.begin(), opt.q_list.end(), q) != opt.q_list.end())
                rr.per_q.emplace_back(q, res);
            const bool on_grid =
                std::find(qopt_grid.begin(), qopt_grid.end(), q) != qopt_grid.end();
            if (on_grid && (rr.q_opt == 0 || res.mse < rr.q_opt_mse)) {
                // ties broken toward smaller q by strict comparison on a sorted grid
                rr.q_opt = q;
                rr.q_opt_mse = res.mse;
            }
        }
        for (const auto& [q, res] : rr.per_q)
            if (res.mse > opt.divergence_threshold) rr.inapplicable = true;
        out.push_back(std::move(rr));
    }
    return out;
}

/// Empirically optimal q over a grid for a given model; ties go to smaller q.
inline std::pair<int, double> hill_qopt_search(const ModelSpec& model, double true_alpha,
                                               const std::vector<int>& q_grid,
                                               int replicates, std::uint64_t seed,
                                               HillSign sign = HillSign::positive,
                                               int threads = 1) {
    if (q_grid.empty()) throw std::invalid_argument("hill_qopt_search: empty grid");
    std::vector<int> grid = q_grid;
    std::sort(grid.begin(), grid.end());

    const std::uint64_t id_hash = fnv1a64("qopt/" + model.id());
    std::vector<std::vector<double>> est(grid.size());
    for (auto& v : est) v.assign(static_cast<std::size_t>(replicates), 0.0);
    detail::parallel_for(replicates, threads, [&](int r) {
        RandomStream stream =
            RandomStream::derive(seed, id_hash, static_cast<std::uint64_t>(r));
        const Series series = generate(model, stream);
        for (std::size_t qi = 0; qi < grid.size(); ++qi)
            est[qi][static_cast<std::size_t>(r)] = hill_estimate(series, grid[qi], sign);
    });

    int best_q = grid.front();
    double best_mse = std::numeric_limits<double>::infinity();
    for (std::size_t qi = 0; qi < grid.size(); ++qi) {
        double mse = 0.0;
        for (double e : est[qi]) mse += (e - true_alpha) * (e - true_alpha);
        mse /= static_cast<double>(replicates);
        if (mse < best_mse) {
            best_mse = mse;
            best_q = grid[qi];
        }
    }
    return {best_q, best_mse};
}

/// Median absolute error of an estimator along a growing-n grid; the
/// workhorse behind the empirical consistency checks.
inline std::vector<double> consistency_sweep(ModelSpec model, const EstimateFn& estimator,
                                             double true_lambda,
                                             const std::vector<int>& n_grid, int replicates,
                                             std::uint64_t seed, int threads = 1) {
    std::vector<double> medians;
    for (int n : n_grid) {
        CellSpec cell;
        cell.model = model;
        cell.model.n = n;
        cell.replicates = replicates;
        cell.true_lambda = true_lambda;
        cell.master_seed = seed;
        cell.cell_id = "consistency/" + model.id() + "/n=" + std::to_string(n);
        const McResult res = run_cell(cell, estimator, threads);
        std::vector<double> abs_err;
        abs_err.reserve(res.estimates.size());
        for (double e : res.estimates) abs_err.push_back(std::fabs(e - true_lambda));
        medians.push_back(median_of(std::move(abs_err)));
    }
    return medians;
}

// ---------------------------------------------------------------------------
// CSV output (fixed schema)
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_g12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

} // namespace detail

inline std::string csv_header() {
    return "panel,row,estimator,N,q,replicates,mse,bias,variance,failed,seed";
}

inline std::string to_csv_row(const TableCell& cell, std::uint64_t seed) {
    std::string s;
    s += cell.panel;
    s += ',' + cell.row + ',' + cell.estimator + ',' + std::to_string(cell.scan_count) +
         ',' + std::to_string(cell.q) + ',' + std::to_string(cell.result.replicates);
    if (cell.inapplicable) {
        s += ",na,na,na";
    } else {
        s += ',' + detail::format_g12(cell.result.mse) + ',' +
             detail::format_g12(cell.result.bias) + ',' +
             detail::format_g12(cell.result.variance);
    }
    s += ',' + std::to_string(cell.result.failed) + ',' + std::to_string(seed);
    return s;
}

inline std::string to_csv(const TableResult& table) {
    std::string out = csv_header() + '\n';
    for (const auto& cell : table.cells) out += to_csv_row(cell, table.seed) + '\n';
    return out;
}

inline std::string to_csv(const std::vector<Table2RowResult>& rows, char panel,
                          std::uint64_t seed) {
    std::string out = csv_header() + '\n';
    for (const auto& row : rows) {
        for (const auto& [q, res] : row.per_q) {
            TableCell cell{panel, row.row, "hill", 0, q, row.inapplicable, res};
            out += to_csv_row(cell, seed) + '\n';
        }
        TableCell opt_cell{panel, row.row, "hill-qopt", 0, row.q_opt, row.inapplicable, {}};
        opt_cell.result.mse = row.q_opt_mse;
        opt_cell.result.replicates = row.per_q.empty() ? 0 : row.per_q.front().second.replicates;
        out += to_csv_row(opt_cell, seed) + '\n';
    }
    return out;
}

} // namespace scanrate
