// Batch front door: ingest tabular data, configure the operator and penalty,
// run fits, and emit plot-ready curves, diagnostics and kernel dumps.

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>

#include "lspline/gp.hpp"
#include "lspline/io.hpp"

namespace {

using lspline::Interval;
using lspline::io::ConfigError;
using lspline::io::DataError;
using lspline::io::JobConfig;

int fail(int code, const std::string& kind, const std::string& msg) {
    std::cerr << "error kind=" << kind << " message=\"" << msg << "\"\n";
    return code;
}

struct SortedData {
    std::vector<double> t;
    Eigen::VectorXd y;
    Eigen::VectorXd w;  // size 0 when unweighted
    std::vector<long> rows;
};

SortedData sort_by_t(const lspline::io::Table& table) {
    const int n = static_cast<int>(table.t.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return table.t[i] < table.t[j]; });
    SortedData d;
    d.t.resize(n);
    d.rows.resize(n);
    const bool has_y = !table.y.empty();
    if (has_y) d.y.resize(n);
    if (!table.w.empty()) d.w.resize(n);
    for (int i = 0; i < n; ++i) {
        d.t[i] = table.t[order[i]];
        d.rows[i] = table.data_rows[order[i]];
        if (has_y) d.y(i) = table.y[order[i]];
        if (!table.w.empty()) d.w(i) = table.w[order[i]];
    }
    return d;
}

Interval resolve_interval(const JobConfig& cfg, const SortedData& d) {
    if (cfg.interval) {
        for (std::size_t i = 0; i < d.t.size(); ++i)
            if (!cfg.interval->contains(d.t[i]))
                throw DataError("design point at input row " + std::to_string(d.rows[i]) +
                                " lies outside the configured interval");
        return *cfg.interval;
    }
    const double lo = d.t.front(), hi = d.t.back();
    const double pad = hi > lo ? 0.05 * (hi - lo) : 0.5;
    return Interval{lo - pad, hi + pad};
}

void require_strictly_increasing(const SortedData& d) {
    for (std::size_t i = 1; i < d.t.size(); ++i)
        if (!(d.t[i - 1] < d.t[i]))
            throw DataError("banded path needs strictly increasing design points; input rows " +
                            std::to_string(d.rows[i - 1]) + " and " + std::to_string(d.rows[i]) +
                            " share t = " + lspline::io::format_double(d.t[i]));
}

std::vector<double> query_grid(Interval domain, int size) {
    std::vector<double> ts(size);
    for (int k = 0; k < size; ++k)
        ts[k] = domain.a + domain.length() * k / (size - 1);
    return ts;
}

void report_dropped(const lspline::io::Table& table) {
    if (table.dropped > 0)
        std::cerr << "warning: dropped " << table.dropped
                  << " rows with missing or unparseable values\n";
}

int run_fit(const JobConfig& cfg, bool scan_only) {
    const auto table = lspline::io::read_table(cfg.input, cfg.t_col, cfg.y_col, cfg.weight_col);
    report_dropped(table);
    const SortedData data = sort_by_t(table);
    const Interval domain = resolve_interval(cfg, data);

    lspline::QuadratureOptions quad;
    quad.abs_tol = cfg.quad_tol;
    const lspline::PenaltyModel model =
        lspline::io::build_model(cfg.operator_spec, cfg.gamma, cfg.omega, domain, quad);

    lspline::FitProblem problem = lspline::make_point_problem(
        model, data.t, data.y, cfg.lambda, data.w.size() ? data.w : Eigen::VectorXd());

    lspline::SolvePath path = lspline::SolvePath::Auto;
    if (cfg.path == "dense") path = lspline::SolvePath::Dense;
    if (cfg.path == "banded") {
        if (!(cfg.lambda > 0.0) && cfg.lambda_grid.empty())
            throw ConfigError("banded path requires lambda > 0");
        require_strictly_increasing(data);
        if (!(domain.a < data.t.front()) || !(data.t.back() < domain.b))
            throw DataError("banded path needs a < t_1 and t_n < b; widen the interval");
        path = lspline::SolvePath::Banded;
    }

    if (!cfg.lambda_grid.empty() || scan_only) {
        const auto grid = cfg.lambda_grid.empty() ? std::vector<double>{cfg.lambda}
                                                  : cfg.lambda_grid;
        const lspline::LambdaSelection sel = lspline::select_lambda(problem, grid);
        lspline::io::write_scores_csv(cfg.out_scores, sel.table);
        std::cout << "wrote " << cfg.out_scores << "\n";
        std::cout << "best_lambda=" << lspline::io::format_double(sel.best) << "\n";
        if (scan_only) return 0;
        problem.lambda = sel.best;
    }

    const lspline::FitResult result = lspline::solve(problem, path);

    const auto ts = query_grid(domain, cfg.grid_size);
    Eigen::VectorXd mu(cfg.grid_size);
    for (int k = 0; k < cfg.grid_size; ++k) mu(k) = result.evaluator(ts[k]);
    lspline::io::write_curve_csv(cfg.out_curve, "mu_hat", ts, mu);
    std::cout << "wrote " << cfg.out_curve << "\n";

    lspline::io::write_json(cfg.out_json, lspline::io::result_to_json(result, problem.lambda));
    std::cout << "wrote " << cfg.out_json << "\n";

    if (!cfg.out_alpha.empty()) {
        lspline::io::write_alpha_csv(cfg.out_alpha, result.alpha);
        std::cout << "wrote " << cfg.out_alpha << "\n";
    }
    return 0;
}

int run_kernel_dump(const JobConfig& cfg) {
    const auto table = lspline::io::read_points(cfg.input, cfg.t_col);
    report_dropped(table);
    const SortedData data = sort_by_t(table);
    const Interval domain = resolve_interval(cfg, data);

    lspline::QuadratureOptions quad;
    quad.abs_tol = cfg.quad_tol;
    const lspline::PenaltyModel model =
        lspline::io::build_model(cfg.operator_spec, cfg.gamma, cfg.omega, domain, quad);

    lspline::io::write_matrix_csv(cfg.out_r1, model.kernel->r1_gram(data.t));
    std::cout << "wrote " << cfg.out_r1 << "\n";

    if (!cfg.out_r0.empty()) {
        const int n = static_cast<int>(data.t.size());
        Eigen::MatrixXd r0(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r0(i, j) = model.kernel->r0(data.t[i], data.t[j]);
        lspline::io::write_matrix_csv(cfg.out_r0, r0);
        std::cout << "wrote " << cfg.out_r0 << "\n";
    }
    return 0;
}

int run_gp(const JobConfig& cfg, const std::string& cov, double sigma2) {
    const auto table = lspline::io::read_table(cfg.input, cfg.t_col, cfg.y_col, "");
    report_dropped(table);
    const SortedData data = sort_by_t(table);
    const Interval domain = resolve_interval(cfg, data);

    lspline::GPModel gp;
    if (cov == "brownian") gp = lspline::GPModel::brownian(sigma2, domain.a);
    else if (cov == "cubic") gp = lspline::GPModel::cubic(sigma2, domain.a);
    else throw ConfigError("covariance must be brownian or cubic");

    const auto ts = query_grid(domain, cfg.grid_size);
    const Eigen::VectorXd mean = lspline::posterior_mean(gp, data.t, data.y, ts);
    lspline::io::write_curve_csv(cfg.out_curve, "posterior_mean", ts, mean);
    std::cout << "wrote " << cfg.out_curve << "\n";
    return 0;
}

void add_common_options(CLI::App* cmd, JobConfig& flags, std::string& config_path,
                        std::string& op_text, std::vector<double>& interval_flag) {
    cmd->add_option("--config", config_path, "JSON job file; explicit flags override it");
    cmd->add_option("--input", flags.input, "input CSV path");
    cmd->add_option("--t-col", flags.t_col, "design-point column name");
    cmd->add_option("--y-col", flags.y_col, "observation column name");
    cmd->add_option("--weight-col", flags.weight_col, "weight column name");
    cmd->add_option("--operator", op_text,
                    "preset (cubic|exp_gamma|harmonic_omega|first_derivative) or inline JSON");
    cmd->add_option("--gamma", flags.gamma, "gamma for the exp_gamma preset");
    cmd->add_option("--omega", flags.omega, "omega for the harmonic_omega preset");
    cmd->add_option("--lambda", flags.lambda, "smoothing parameter");
    cmd->add_option("--lambda-grid", flags.lambda_grid, "comma-separated GCV grid")
        ->delimiter(',');
    cmd->add_option("--path", flags.path, "auto|dense|banded")
        ->check(CLI::IsMember({"auto", "dense", "banded"}));
    cmd->add_option("--interval", interval_flag, "a,b")->delimiter(',')->expected(2);
    cmd->add_option("--grid-size", flags.grid_size, "query grid size");
    cmd->add_option("--quad-tol", flags.quad_tol, "quadrature absolute tolerance");
    cmd->add_option("--out-curve", flags.out_curve, "fitted curve CSV path");
    cmd->add_option("--out-json", flags.out_json, "fit result JSON path");
    cmd->add_option("--out-scores", flags.out_scores, "lambda score table CSV path");
    cmd->add_option("--out-alpha", flags.out_alpha, "alpha coefficient CSV path");
    cmd->add_option("--out-r1", flags.out_r1, "kernel Gram CSV path");
    cmd->add_option("--out-r0", flags.out_r0, "null-space kernel Gram CSV path");
}

JobConfig merge_config(const CLI::App* cmd, const JobConfig& flags,
                       const std::string& config_path, const std::string& op_text,
                       const std::vector<double>& interval_flag) {
    JobConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot open config file: " + config_path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        cfg = lspline::io::config_from_json(j);
    }

    auto passed = [&](const std::string& name) { return cmd->count(name) > 0; };
    if (passed("--input")) cfg.input = flags.input;
    if (passed("--t-col")) cfg.t_col = flags.t_col;
    if (passed("--y-col")) cfg.y_col = flags.y_col;
    if (passed("--weight-col")) cfg.weight_col = flags.weight_col;
    if (passed("--gamma")) cfg.gamma = flags.gamma;
    if (passed("--omega")) cfg.omega = flags.omega;
    if (passed("--lambda")) cfg.lambda = flags.lambda;
    if (passed("--lambda-grid")) cfg.lambda_grid = flags.lambda_grid;
    if (passed("--path")) cfg.path = flags.path;
    if (passed("--grid-size")) cfg.grid_size = flags.grid_size;
    if (passed("--quad-tol")) cfg.quad_tol = flags.quad_tol;
    if (passed("--out-curve")) cfg.out_curve = flags.out_curve;
    if (passed("--out-json")) cfg.out_json = flags.out_json;
    if (passed("--out-scores")) cfg.out_scores = flags.out_scores;
    if (passed("--out-alpha")) cfg.out_alpha = flags.out_alpha;
    if (passed("--out-r1")) cfg.out_r1 = flags.out_r1;
    if (passed("--out-r0")) cfg.out_r0 = flags.out_r0;
    if (passed("--interval")) {
        if (!(interval_flag[0] < interval_flag[1]))
            throw ConfigError("--interval needs a < b");
        cfg.interval = Interval{interval_flag[0], interval_flag[1]};
    }
    if (passed("--operator")) {
        if (!op_text.empty() && op_text.front() == '{') {
            try {
                cfg.operator_spec = nlohmann::json::parse(op_text);
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError(std::string("bad inline operator JSON: ") + e.what());
            }
        } else {
            cfg.operator_spec = op_text;
        }
    }
    if (cfg.input.empty()) throw ConfigError("no input file configured");
    if (cfg.grid_size < 2) throw ConfigError("grid_size must be >= 2");
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"L-spline penalized regression"};
    app.require_subcommand(1);

    JobConfig flags;
    std::string config_path, op_text;
    std::vector<double> interval_flag;
    std::string gp_cov = "brownian";
    double gp_sigma2 = 1.0;

    CLI::App* fit = app.add_subcommand("fit", "fit a penalized curve");
    CLI::App* kernel = app.add_subcommand("kernel", "dump kernel Gram matrices");
    CLI::App* gp = app.add_subcommand("gp", "Gaussian-process posterior mean");
    CLI::App* scan = app.add_subcommand("lambda-scan", "GCV score table over a lambda grid");

    for (CLI::App* cmd : {fit, kernel, gp, scan})
        add_common_options(cmd, flags, config_path, op_text, interval_flag);
    gp->add_option("--cov", gp_cov, "covariance: brownian|cubic")
        ->check(CLI::IsMember({"brownian", "cubic"}));
    gp->add_option("--sigma2", gp_sigma2, "observation noise variance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(2, "config", e.what());
    }

    CLI::App* active = fit->parsed() ? fit : kernel->parsed() ? kernel
                       : gp->parsed() ? gp : scan;
    try {
        const JobConfig cfg = merge_config(active, flags, config_path, op_text, interval_flag);
        if (fit->parsed()) return run_fit(cfg, /*scan_only=*/false);
        if (scan->parsed()) return run_fit(cfg, /*scan_only=*/true);
        if (kernel->parsed()) return run_kernel_dump(cfg);
        return run_gp(cfg, gp_cov, gp_sigma2);
    } catch (const ConfigError& e) {
        return fail(2, "config", e.what());
    } catch (const DataError& e) {
        return fail(3, "data", e.what());
    } catch (const lspline::Error& e) {
        return fail(4, "solver", e.what());
    } catch (const std::exception& e) {
        return fail(4, "solver", e.what());
    }
}
