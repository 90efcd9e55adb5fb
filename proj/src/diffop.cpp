#include "lspline/diffop.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "lspline/errors.hpp"

namespace lspline {

namespace {

std::string format_point(double t) {
    std::ostringstream os;
    os << t;
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// SmoothFunction

SmoothFunction::SmoothFunction(ExpPolySum sum, int max_order)
    : max_order_(max_order) {
    if (max_order < 0) throw std::invalid_argument("max_order must be >= 0");
    chain_.reserve(max_order + 1);
    chain_.push_back(std::move(sum));
    for (int j = 0; j < max_order; ++j) chain_.push_back(chain_.back().derivative());
}

SmoothFunction::SmoothFunction(Evaluator handle, int max_order)
    : handle_(std::move(handle)), max_order_(max_order) {
    if (!handle_) throw std::invalid_argument("null evaluator handle");
    if (max_order < 0) throw std::invalid_argument("max_order must be >= 0");
}

double SmoothFunction::eval(double t, int order) const {
    if (order < 0) throw std::invalid_argument("derivative order must be >= 0");
    if (!chain_.empty()) {
        if (order < static_cast<int>(chain_.size())) return chain_[order](t);
        // Exponential-polynomial sums differentiate exactly to any order.
        ExpPolySum d = chain_.back();
        for (int j = static_cast<int>(chain_.size()) - 1; j < order; ++j)
            d = d.derivative();
        return d(t);
    }
    if (order > max_order_)
        throw std::out_of_range("derivative order exceeds what the handle supplies");
    return handle_(t, order);
}

// ---------------------------------------------------------------------------
// NullSpaceBasis

NullSpaceBasis::NullSpaceBasis(std::vector<SmoothFunction> functions, Interval domain)
    : funcs_(std::move(functions)), domain_(domain) {
    if (funcs_.empty()) throw std::invalid_argument("basis needs at least one function");
    if (!(domain_.a < domain_.b) || !std::isfinite(domain_.a) || !std::isfinite(domain_.b))
        throw std::invalid_argument("interval must satisfy a < b and be finite");
    const int m = size();
    for (const auto& f : funcs_)
        if (f.max_order() < m)
            throw std::invalid_argument(
                "each basis function must supply derivatives up to the basis size");
    // The left endpoint matters for every kernel construction; check it now.
    wronskian_inverse_last_row(domain_.a);
}

Eigen::MatrixXd NullSpaceBasis::wronskian(double t) const {
    const int m = size();
    Eigen::MatrixXd w(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) w(i, j) = funcs_[i].eval(t, j);
    return w;
}

Eigen::VectorXd NullSpaceBasis::values(double t) const {
    const int m = size();
    Eigen::VectorXd v(m);
    for (int i = 0; i < m; ++i) v(i) = funcs_[i].eval(t, 0);
    return v;
}

Eigen::VectorXd NullSpaceBasis::wronskian_inverse_last_row(double t) const {
    const int m = size();
    const Eigen::MatrixXd w = wronskian(t);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(w);
    if (!w.allFinite() || !(lu.rcond() >= kWronskianRcondFloor))
        throw SingularWronskian("Wronskian numerically singular at t = " + format_point(t));
    // Last row of W^{-1}: solve W' x = e_m.
    Eigen::VectorXd em = Eigen::VectorXd::Zero(m);
    em(m - 1) = 1.0;
    return lu.transpose().solve(em);
}

Eigen::MatrixXd NullSpaceBasis::value_matrix(const std::vector<double>& pts) const {
    const int m = size();
    Eigen::MatrixXd t(static_cast<int>(pts.size()), m);
    for (int i = 0; i < static_cast<int>(pts.size()); ++i)
        for (int j = 0; j < m; ++j) t(i, j) = funcs_[j].eval(pts[i], 0);
    return t;
}

void NullSpaceBasis::require_invertible_wronskian(int samples) const {
    if (samples < 2) samples = 2;
    for (int k = 0; k < samples; ++k) {
        const double t =
            domain_.a + (domain_.b - domain_.a) * static_cast<double>(k) / (samples - 1);
        wronskian_inverse_last_row(t);
    }
}

// ---------------------------------------------------------------------------
// LinearOperator

LinearOperator LinearOperator::constant(std::vector<double> coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("operator order must be >= 1");
    for (double c : coeffs)
        if (!std::isfinite(c)) throw std::invalid_argument("operator coefficients must be finite");
    LinearOperator op;
    op.order_ = static_cast<int>(coeffs.size());
    op.coeffs_ = std::move(coeffs);
    return op;
}

LinearOperator LinearOperator::variable(std::vector<Coefficient> coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("operator order must be >= 1");
    for (const auto& c : coeffs)
        if (!c) throw std::invalid_argument("null coefficient function");
    LinearOperator op;
    op.order_ = static_cast<int>(coeffs.size());
    op.coeffs_ = std::move(coeffs);
    return op;
}

LinearOperator LinearOperator::from_basis(std::shared_ptr<const NullSpaceBasis> basis) {
    if (!basis) throw std::invalid_argument("null basis");
    LinearOperator op;
    op.order_ = basis->size();
    op.coeffs_ = std::move(basis);
    return op;
}

bool LinearOperator::is_constant() const {
    return std::holds_alternative<std::vector<double>>(coeffs_);
}

const std::vector<double>& LinearOperator::constant_coeffs() const {
    if (!is_constant()) throw std::logic_error("operator does not have constant coefficients");
    return std::get<std::vector<double>>(coeffs_);
}

std::shared_ptr<const NullSpaceBasis> LinearOperator::defining_basis() const {
    if (const auto* b = std::get_if<std::shared_ptr<const NullSpaceBasis>>(&coeffs_)) return *b;
    return nullptr;
}

namespace {

Eigen::VectorXd basis_coefficient_vector(const NullSpaceBasis& basis, double t) {
    const int m = basis.size();
    const Eigen::MatrixXd w = basis.wronskian(t);
    Eigen::VectorXd rhs(m);
    for (int i = 0; i < m; ++i) rhs(i) = -basis.function(i).eval(t, m);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(w);
    if (!w.allFinite() || !(lu.rcond() >= kWronskianRcondFloor))
        throw SingularWronskian("Wronskian numerically singular at t = " + format_point(t));
    return lu.solve(rhs);
}

}  // namespace

double LinearOperator::coefficient(int j, double t) const {
    if (j < 0 || j >= order_) throw std::out_of_range("coefficient index");
    if (const auto* c = std::get_if<std::vector<double>>(&coeffs_)) return (*c)[j];
    if (const auto* c = std::get_if<std::vector<Coefficient>>(&coeffs_)) {
        const double v = (*c)[j](t);
        if (!std::isfinite(v))
            throw std::domain_error("coefficient function not finite at t = " + format_point(t));
        return v;
    }
    const auto& basis = *std::get<std::shared_ptr<const NullSpaceBasis>>(coeffs_);
    return basis_coefficient_vector(basis, t)(j);
}

double LinearOperator::apply(const SmoothFunction& f, double t) const {
    double v = f.eval(t, order_);
    if (const auto* basis_ptr = std::get_if<std::shared_ptr<const NullSpaceBasis>>(&coeffs_)) {
        const Eigen::VectorXd w = basis_coefficient_vector(**basis_ptr, t);
        for (int j = 0; j < order_; ++j) v += w(j) * f.eval(t, j);
        return v;
    }
    for (int j = 0; j < order_; ++j) {
        const double wj = coefficient(j, t);
        if (wj != 0.0) v += wj * f.eval(t, j);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Characteristic roots

namespace detail {

namespace {

using Complex = std::complex<double>;

/// Horner evaluation of the monic polynomial and its derivative.
std::pair<Complex, Complex> eval_poly(const std::vector<double>& coeffs, Complex z) {
    const int m = static_cast<int>(coeffs.size());
    Complex p(1.0, 0.0), dp(0.0, 0.0);
    for (int j = m - 1; j >= 0; --j) {
        dp = dp * z + p;
        p = p * z + coeffs[j];
    }
    return {p, dp};
}

double poly_scale(const std::vector<double>& coeffs, Complex z) {
    const double az = std::max(1.0, std::abs(z));
    double scale = 1.0, pw = 1.0;
    for (double c : coeffs) {
        scale += std::abs(c) * pw;
        pw *= az;
    }
    scale += pw;  // leading monic term
    return scale;
}

Complex refine_root(const std::vector<double>& coeffs, Complex z) {
    Complex best = z;
    double best_abs = std::abs(eval_poly(coeffs, z).first);
    for (int iter = 0; iter < 30; ++iter) {
        auto [p, dp] = eval_poly(coeffs, z);
        if (std::abs(p) == 0.0) return z;
        if (std::abs(dp) == 0.0) break;
        const Complex step = p / dp;
        z -= step;
        const double pz = std::abs(eval_poly(coeffs, z).first);
        if (pz < best_abs) {
            best_abs = pz;
            best = z;
        }
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
    }
    return best;
}

}  // namespace

std::vector<Root> characteristic_roots(const std::vector<double>& coeffs) {
    const int m = static_cast<int>(coeffs.size());
    if (m < 1) throw std::invalid_argument("operator order must be >= 1");

    std::vector<Complex> raw;
    raw.reserve(m);
    if (m == 1) {
        raw.emplace_back(-coeffs[0], 0.0);
    } else {
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
        for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
        for (int i = 0; i < m; ++i) companion(i, m - 1) = -coeffs[i];
        Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
        if (es.info() != Eigen::Success)
            throw RootFindingFailure("companion eigenvalue iteration failed");
        for (int i = 0; i < m; ++i) raw.push_back(es.eigenvalues()(i));
    }

    for (auto& z : raw) {
        z = refine_root(coeffs, z);
        const double residual = std::abs(eval_poly(coeffs, z).first);
        if (!(residual <= 1e-6 * poly_scale(coeffs, z)))
            throw RootFindingFailure("characteristic root refinement did not converge");
    }

    // Merge roots within 1e-7 relative distance into one root with summed
    // multiplicity; floating point never reproduces exact multiplicities.
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            const double dist = std::abs(raw[i] - raw[j]);
            const double tol = 1e-7 * (1.0 + std::max(std::abs(raw[i]), std::abs(raw[j])));
            if (dist <= tol) parent[find(i)] = find(j);
        }

    std::vector<Root> clusters;
    for (int rep = 0; rep < m; ++rep) {
        if (find(rep) != rep) continue;
        Complex sum(0.0, 0.0);
        int count = 0;
        for (int i = 0; i < m; ++i)
            if (find(i) == rep) {
                sum += raw[i];
                ++count;
            }
        Root r;
        r.value = sum / static_cast<double>(count);
        r.multiplicity = count;
        r.real = std::abs(r.value.imag()) <= 1e-9 * (1.0 + std::abs(r.value));
        if (r.real) r.value = Complex(r.value.real(), 0.0);
        clusters.push_back(r);
    }

    // Match conjugate pairs and symmetrise them.
    std::vector<Root> out;
    std::vector<bool> used(clusters.size(), false);
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        if (used[i] || !clusters[i].real) continue;
        used[i] = true;
        out.push_back(clusters[i]);
    }
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        if (used[i] || clusters[i].value.imag() <= 0.0) continue;
        const Complex want = std::conj(clusters[i].value);
        std::size_t match = clusters.size();
        for (std::size_t j = 0; j < clusters.size(); ++j) {
            if (used[j] || j == i || clusters[j].real) continue;
            if (std::abs(clusters[j].value - want) <= 1e-7 * (1.0 + std::abs(want)) &&
                clusters[j].multiplicity == clusters[i].multiplicity) {
                match = j;
                break;
            }
        }
        if (match == clusters.size())
            throw RootFindingFailure("unpaired complex characteristic root");
        used[i] = used[match] = true;
        const double re = 0.5 * (clusters[i].value.real() + clusters[match].value.real());
        const double im = 0.5 * (std::abs(clusters[i].value.imag()) +
                                 std::abs(clusters[match].value.imag()));
        Root plus = clusters[i], minus = clusters[match];
        plus.value = Complex(re, im);
        minus.value = Complex(re, -im);
        out.push_back(plus);
        out.push_back(minus);
    }
    for (std::size_t i = 0; i < clusters.size(); ++i)
        if (!used[i]) throw RootFindingFailure("unpaired complex characteristic root");

    std::sort(out.begin(), out.end(), [](const Root& x, const Root& y) {
        if (x.real != y.real) return x.real;
        if (x.value.real() != y.value.real()) return x.value.real() > y.value.real();
        return x.value.imag() > y.value.imag();
    });
    return out;
}

}  // namespace detail

NullSpaceBasis null_basis_constant(const LinearOperator& op, Interval domain) {
    if (!op.is_constant())
        throw std::invalid_argument("null_basis_constant requires constant coefficients");
    const int m = op.order();
    const auto roots = detail::characteristic_roots(op.constant_coeffs());

    std::vector<SmoothFunction> funcs;
    funcs.reserve(m);
    for (const auto& root : roots) {
        if (root.real) {
            for (int l = 0; l < root.multiplicity; ++l) {
                ExpPolyTerm term;
                term.power = l;
                term.rate = root.value.real();
                funcs.emplace_back(ExpPolySum{term}, m);
            }
        } else if (root.value.imag() > 0.0) {
            for (int l = 0; l < root.multiplicity; ++l) {
                ExpPolyTerm c;
                c.power = l;
                c.rate = root.value.real();
                c.trig = Trig::Cos;
                c.freq = root.value.imag();
                funcs.emplace_back(ExpPolySum{c}, m);
                ExpPolyTerm s = c;
                s.trig = Trig::Sin;
                funcs.emplace_back(ExpPolySum{s}, m);
            }
        }
    }
    if (static_cast<int>(funcs.size()) != m)
        throw RootFindingFailure("root multiplicities do not account for the operator order");
    return NullSpaceBasis(std::move(funcs), domain);
}

}  // namespace lspline
