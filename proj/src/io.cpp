#include "lspline/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lspline::io {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Operator descriptors

namespace {

ExpPolyTerm term_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("basis term must be a JSON object");
    ExpPolyTerm term;
    for (const auto& [key, value] : j.items()) {
        if (key == "scale") term.scale = value.get<double>();
        else if (key == "power") term.power = value.get<int>();
        else if (key == "rate") term.rate = value.get<double>();
        else if (key == "freq") term.freq = value.get<double>();
        else if (key == "trig") {
            const std::string s = value.get<std::string>();
            if (s == "none") term.trig = Trig::None;
            else if (s == "cos") term.trig = Trig::Cos;
            else if (s == "sin") term.trig = Trig::Sin;
            else throw ConfigError("trig must be one of none|cos|sin");
        } else {
            throw ConfigError("unknown basis term key: " + key);
        }
    }
    if (term.power < 0) throw ConfigError("term power must be >= 0");
    if (term.freq < 0) throw ConfigError("term freq must be >= 0");
    return term;
}

json term_to_json(const ExpPolyTerm& t) {
    json j;
    j["scale"] = t.scale;
    j["power"] = t.power;
    j["rate"] = t.rate;
    j["trig"] = t.trig == Trig::None ? "none" : (t.trig == Trig::Cos ? "cos" : "sin");
    j["freq"] = t.freq;
    return j;
}

PenaltyModel model_from_descriptor(const json& spec, Interval domain, QuadratureOptions quad) {
    if (!spec.contains("m")) throw ConfigError("operator descriptor needs \"m\"");
    const int m = spec.at("m").get<int>();
    if (m < 1) throw ConfigError("operator order must be >= 1");

    if (spec.contains("coeffs")) {
        const auto coeffs = spec.at("coeffs").get<std::vector<double>>();
        if (static_cast<int>(coeffs.size()) != m)
            throw ConfigError("operator needs exactly m coefficients");
        return make_model(LinearOperator::constant(coeffs), domain, quad);
    }
    if (spec.contains("basis")) {
        const auto& basis_json = spec.at("basis");
        if (!basis_json.is_array() || static_cast<int>(basis_json.size()) != m)
            throw ConfigError("basis-defined operator needs exactly m basis functions");
        std::vector<SmoothFunction> funcs;
        for (const auto& fn_json : basis_json) {
            if (!fn_json.is_array() || fn_json.empty())
                throw ConfigError("each basis function is a nonempty array of terms");
            std::vector<ExpPolyTerm> terms;
            for (const auto& tj : fn_json) terms.push_back(term_from_json(tj));
            funcs.emplace_back(ExpPolySum(std::move(terms)), m);
        }
        auto basis = std::make_shared<NullSpaceBasis>(std::move(funcs), domain);
        return make_model(basis, quad);
    }
    throw ConfigError("operator descriptor needs \"coeffs\" or \"basis\"");
}

}  // namespace

json operator_to_json(const LinearOperator& op) {
    json j;
    j["m"] = op.order();
    if (op.is_constant()) {
        j["coeffs"] = op.constant_coeffs();
        return j;
    }
    if (const auto basis = op.defining_basis()) {
        json fns = json::array();
        for (int i = 0; i < basis->size(); ++i) {
            const auto& f = basis->function(i);
            if (!f.is_exp_poly())
                throw ConfigError("cannot serialise a basis built from opaque handles");
            json terms = json::array();
            for (const auto& t : f.exp_poly().terms()) terms.push_back(term_to_json(t));
            fns.push_back(terms);
        }
        j["basis"] = fns;
        return j;
    }
    throw ConfigError("cannot serialise an operator with opaque coefficient functions");
}

PenaltyModel build_model(const json& spec, double gamma, double omega, Interval domain,
                         QuadratureOptions quad) {
    try {
        if (spec.is_string()) {
            const std::string name = spec.get<std::string>();
            if (name == "cubic")
                return make_model(LinearOperator::constant({0.0, 0.0}), domain, quad);
            if (name == "first_derivative")
                return make_model(LinearOperator::constant({0.0}), domain, quad);
            if (name == "exp_gamma") {
                if (gamma == 0.0) throw ConfigError("exp_gamma preset requires gamma != 0");
                return make_model(LinearOperator::constant({0.0, gamma}), domain, quad);
            }
            if (name == "harmonic_omega") {
                if (!(omega > 0.0)) throw ConfigError("harmonic_omega preset requires omega > 0");
                return make_model(LinearOperator::constant({0.0, 0.0, omega * omega, 0.0}),
                                  domain, quad);
            }
            throw ConfigError("unknown operator preset: " + name);
        }
        if (spec.is_object()) return model_from_descriptor(spec, domain, quad);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad operator descriptor: ") + e.what());
    }
    throw ConfigError("operator spec must be a preset name or a JSON object");
}

// ---------------------------------------------------------------------------
// JobConfig

JobConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    JobConfig c;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "input") c.input = value.get<std::string>();
            else if (key == "t_col") c.t_col = value.get<std::string>();
            else if (key == "y_col") c.y_col = value.get<std::string>();
            else if (key == "weight_col") c.weight_col = value.get<std::string>();
            else if (key == "interval") {
                if (value.is_null()) {
                    c.interval.reset();
                } else {
                    const auto v = value.get<std::vector<double>>();
                    if (v.size() != 2 || !(v[0] < v[1]))
                        throw ConfigError("interval must be [a, b] with a < b");
                    c.interval = Interval{v[0], v[1]};
                }
            } else if (key == "operator") c.operator_spec = value;
            else if (key == "gamma") c.gamma = value.get<double>();
            else if (key == "omega") c.omega = value.get<double>();
            else if (key == "lambda") c.lambda = value.get<double>();
            else if (key == "lambda_grid") c.lambda_grid = value.get<std::vector<double>>();
            else if (key == "path") c.path = value.get<std::string>();
            else if (key == "grid_size") c.grid_size = value.get<int>();
            else if (key == "quad_tol") c.quad_tol = value.get<double>();
            else if (key == "out_curve") c.out_curve = value.get<std::string>();
            else if (key == "out_json") c.out_json = value.get<std::string>();
            else if (key == "out_scores") c.out_scores = value.get<std::string>();
            else if (key == "out_alpha") c.out_alpha = value.get<std::string>();
            else if (key == "out_r1") c.out_r1 = value.get<std::string>();
            else if (key == "out_r0") c.out_r0 = value.get<std::string>();
            else throw ConfigError("unknown config key: " + key);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    if (c.path != "auto" && c.path != "dense" && c.path != "banded")
        throw ConfigError("path must be one of auto|dense|banded");
    if (c.grid_size < 2) throw ConfigError("grid_size must be >= 2");
    return c;
}

json config_to_json(const JobConfig& c) {
    json j;
    j["input"] = c.input;
    j["t_col"] = c.t_col;
    j["y_col"] = c.y_col;
    j["weight_col"] = c.weight_col;
    if (c.interval) j["interval"] = {c.interval->a, c.interval->b};
    else j["interval"] = nullptr;
    j["operator"] = c.operator_spec;
    j["gamma"] = c.gamma;
    j["omega"] = c.omega;
    j["lambda"] = c.lambda;
    j["lambda_grid"] = c.lambda_grid;
    j["path"] = c.path;
    j["grid_size"] = c.grid_size;
    j["quad_tol"] = c.quad_tol;
    j["out_curve"] = c.out_curve;
    j["out_json"] = c.out_json;
    j["out_scores"] = c.out_scores;
    j["out_alpha"] = c.out_alpha;
    j["out_r1"] = c.out_r1;
    j["out_r0"] = c.out_r0;
    return j;
}

// ---------------------------------------------------------------------------
// CSV input

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim surrounding whitespace
        const auto first = cell.find_first_not_of(" \t\r");
        const auto last = cell.find_last_not_of(" \t\r");
        cells.push_back(first == std::string::npos ? "" : cell.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(out);
}

}  // namespace

namespace {

Table read_csv(const std::string& path, const std::string& t_col, const std::string* y_col,
               const std::string* weight_col) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file: " + path);

    std::string header;
    if (!std::getline(in, header)) throw DataError("input file is empty: " + path);
    const auto columns = split_csv_line(header);
    auto index_of = [&](const std::string& name) -> int {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        return -1;
    };
    const int ti = index_of(t_col);
    if (ti < 0) throw DataError("column not found: " + t_col);
    int yi = -1;
    if (y_col) {
        yi = index_of(*y_col);
        if (yi < 0) throw DataError("column not found: " + *y_col);
    }
    int wi = -1;
    if (weight_col && !weight_col->empty()) {
        wi = index_of(*weight_col);
        if (wi < 0) throw DataError("column not found: " + *weight_col);
    }

    Table table;
    std::string line;
    long row = 1;  // header is row 1
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        double t = 0.0, y = 0.0, w = 1.0;
        const int ncell = static_cast<int>(cells.size());
        const bool ok = ti < ncell && parse_double(cells[ti], t) &&
                        (yi < 0 || (yi < ncell && parse_double(cells[yi], y))) &&
                        (wi < 0 || (wi < ncell && parse_double(cells[wi], w)));
        if (!ok) {
            ++table.dropped;
            continue;
        }
        table.t.push_back(t);
        if (yi >= 0) table.y.push_back(y);
        if (wi >= 0) table.w.push_back(w);
        table.data_rows.push_back(row);
    }
    if (table.t.empty()) throw DataError("no usable data rows in " + path);
    return table;
}

}  // namespace

Table read_table(const std::string& path, const std::string& t_col, const std::string& y_col,
                 const std::string& weight_col) {
    return read_csv(path, t_col, &y_col, &weight_col);
}

Table read_points(const std::string& path, const std::string& t_col) {
    return read_csv(path, t_col, nullptr, nullptr);
}

// ---------------------------------------------------------------------------
// Outputs

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open output file: " + path);
    return out;
}

}  // namespace

void write_curve_csv(const std::string& path, const std::string& value_header,
                     const std::vector<double>& ts, const Eigen::VectorXd& values) {
    auto out = open_out(path);
    out << "t," << value_header << "\n";
    for (std::size_t i = 0; i < ts.size(); ++i)
        out << format_double(ts[i]) << "," << format_double(values(static_cast<int>(i))) << "\n";
}

void write_alpha_csv(const std::string& path, const Eigen::VectorXd& alpha) {
    auto out = open_out(path);
    out << "alpha_index,value\n";
    for (int i = 0; i < alpha.size(); ++i)
        out << i + 1 << "," << format_double(alpha(i)) << "\n";
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
    auto out = open_out(path);
    out << "i,j,value\n";
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            out << i + 1 << "," << j + 1 << "," << format_double(m(i, j)) << "\n";
}

void write_scores_csv(const std::string& path, const std::vector<LambdaScore>& table) {
    auto out = open_out(path);
    out << "lambda,gcv,df,rss\n";
    for (const auto& s : table)
        out << format_double(s.lambda) << "," << format_double(s.gcv) << ","
            << format_double(s.edf) << "," << format_double(s.rss) << "\n";
}

void write_json(const std::string& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

json result_to_json(const FitResult& r, double lambda) {
    json j;
    j["alpha"] = std::vector<double>(r.alpha.data(), r.alpha.data() + r.alpha.size());
    j["beta"] = std::vector<double>(r.beta.data(), r.beta.data() + r.beta.size());
    j["fitted"] = std::vector<double>(r.fitted.data(), r.fitted.data() + r.fitted.size());
    j["lambda"] = lambda;
    j["df"] = r.diagnostics.edf;  // null when the path does not compute it
    j["objective"] = r.diagnostics.objective;
    return j;
}

}  // namespace lspline::io
