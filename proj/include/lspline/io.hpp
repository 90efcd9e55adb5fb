#pragma once

#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lspline/greens.hpp"
#include "lspline/solver.hpp"

namespace lspline::io {

/// Bad job description (unknown keys, malformed operator spec, ...). Exit 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad input data (unreadable file, missing columns, duplicate points on the
/// banded path, ...). Exit 3.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Operator descriptors

/// JSON descriptor for a constant-coefficient operator:
///   {"m": 2, "coeffs": [0.0, 0.0]}
/// or a basis-defined one, each basis function a sum of built-in terms
/// scale * t^power * exp(rate t) * {1, cos(freq t), sin(freq t)}:
///   {"m": 2, "basis": [[{"scale": 1}], [{"rate": -1, "trig": "sin", "freq": 1}]]}
nlohmann::json operator_to_json(const LinearOperator& op);

/// Builds the model for a descriptor (object form above) or a named preset
/// ("cubic", "exp_gamma", "harmonic_omega", "first_derivative"); gamma/omega
/// feed the presets that need them. Throws ConfigError.
PenaltyModel build_model(const nlohmann::json& spec, double gamma, double omega,
                         Interval domain, QuadratureOptions quad);

// ---------------------------------------------------------------------------
// Job configuration

struct JobConfig {
    std::string input;
    std::string t_col = "t";
    std::string y_col = "y";
    std::string weight_col;
    std::optional<Interval> interval;  // default: data range padded by 5%
    nlohmann::json operator_spec = "cubic";
    double gamma = 1.0;
    double omega = 1.0;
    double lambda = 1.0;
    std::vector<double> lambda_grid;  // nonempty: GCV scan
    std::string path = "auto";        // auto | dense | banded
    int grid_size = 401;
    double quad_tol = 1e-10;
    std::string out_curve = "fit_curve.csv";
    std::string out_json = "fit_result.json";
    std::string out_scores = "lambda_scores.csv";
    std::string out_alpha;  // optional "alpha_index,value" dump
    std::string out_r1 = "kernel_r1.csv";
    std::string out_r0;  // optional
};

/// Strict parse: unknown keys are ConfigError; round-trips with
/// config_to_json unchanged.
JobConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const JobConfig& c);

// ---------------------------------------------------------------------------
// Tabular input

struct Table {
    std::vector<double> t;
    std::vector<double> y;
    std::vector<double> w;        // empty when no weight column requested
    std::vector<long> data_rows;  // 1-based input row per kept observation
    long dropped = 0;             // rows skipped for missing/unparseable values
};

/// Reads a UTF-8 CSV with a header row, '.' decimal separator. Rows with a
/// missing or unparseable value in a requested column are dropped and
/// counted. Throws DataError.
Table read_table(const std::string& path, const std::string& t_col,
                 const std::string& y_col, const std::string& weight_col);

/// Design points only (for kernel dumps); same dialect and dropping rules.
Table read_points(const std::string& path, const std::string& t_col);

// ---------------------------------------------------------------------------
// Outputs (all numeric text via shortest round-trip formatting, so repeated
// runs are byte-identical)

std::string format_double(double v);

void write_curve_csv(const std::string& path, const std::string& value_header,
                     const std::vector<double>& ts, const Eigen::VectorXd& values);
void write_alpha_csv(const std::string& path, const Eigen::VectorXd& alpha);
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);
void write_scores_csv(const std::string& path, const std::vector<LambdaScore>& table);
void write_json(const std::string& path, const nlohmann::json& j);

nlohmann::json result_to_json(const FitResult& r, double lambda);

}  // namespace lspline::io
