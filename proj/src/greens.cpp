#include "lspline/greens.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lspline/parallel.hpp"

namespace lspline {

// ---------------------------------------------------------------------------
// GreensFunction

GreensFunction::GreensFunction(std::shared_ptr<const NullSpaceBasis> basis)
    : basis_(std::move(basis)) {
    if (!basis_) throw std::invalid_argument("null basis");
}

double GreensFunction::operator()(double t, double u) const {
    if (u > t) return 0.0;
    const Eigen::VectorXd star = basis_->wronskian_inverse_last_row(u);
    return basis_->values(t).dot(star);
}

// ---------------------------------------------------------------------------
// Green's identity check

double verify_greens_identity(const GreensFunction& g, const LinearOperator& op,
                              const SmoothFunction& f, int grid_size,
                              const QuadratureOptions& quad) {
    const Interval domain = g.basis().domain();
    const int m = op.order();

    double fscale = 0.0;
    for (int k = 0; k <= 4; ++k) {
        const double t = domain.a + domain.length() * k / 4.0;
        fscale = std::max(fscale, std::abs(f(t)));
    }
    for (int j = 0; j < m; ++j)
        if (std::abs(f.eval(domain.a, j)) > 1e-8 * (1.0 + fscale))
            throw BoundaryViolation("test function violates f^(" + std::to_string(j) +
                                    ")(a) = 0");

    if (grid_size < 2) grid_size = 2;
    double residual = 0.0;
    for (int k = 0; k < grid_size; ++k) {
        const double t = domain.a + domain.length() * k / (grid_size - 1);
        const Eigen::VectorXd vt = g.basis().values(t);
        const double integral = integrate(
            [&](double u) {
                const Eigen::VectorXd star = g.basis().wronskian_inverse_last_row(u);
                return vt.dot(star) * op.apply(f, u);
            },
            domain.a, t, quad);
        residual = std::max(residual, std::abs(f(t) - integral));
    }
    return residual;
}

// ---------------------------------------------------------------------------
// KernelPair

KernelPair::KernelPair(std::shared_ptr<const NullSpaceBasis> basis,
                       std::optional<ClosedFormKernel> closed, QuadratureOptions quad)
    : basis_(std::move(basis)),
      greens_(basis_),
      closed_(std::move(closed)),
      quad_(quad) {
    const int m = basis_->size();
    const Eigen::MatrixXd wa = basis_->wronskian(basis_->domain().a);
    const Eigen::MatrixXd gram = wa * wa.transpose();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(gram);
    if (!gram.allFinite() || !(lu.rcond() >= kWronskianRcondFloor))
        throw SingularWronskian("W(a) W(a)' numerically singular");
    c_ = lu.solve(Eigen::MatrixXd::Identity(m, m));
}

double KernelPair::r0(double s, double t) const {
    const Eigen::VectorXd vs = basis_->values(s);
    const Eigen::VectorXd vt = basis_->values(t);
    return vs.dot(c_ * vt);
}

double KernelPair::r1(double s, double t) const {
    if (closed_) return closed_->r1(s, t);
    return r1_quadrature(s, t);
}

double KernelPair::r1_quadrature(double s, double t) const {
    const double a = basis_->domain().a;
    const double x = std::min(s, t);
    if (x <= a) return 0.0;
    const Eigen::VectorXd vs = basis_->values(s);
    const Eigen::VectorXd vt = basis_->values(t);
    return integrate(
        [&](double u) {
            const Eigen::VectorXd star = basis_->wronskian_inverse_last_row(u);
            return vs.dot(star) * vt.dot(star);
        },
        a, x, quad_);
}

std::vector<Eigen::MatrixXd> KernelPair::star_integral_prefix(
    const std::vector<double>& sorted) const {
    std::vector<Eigen::MatrixXd> prefix;
    prefix.reserve(sorted.size());

    if (closed_) {
        for (double x : sorted) prefix.push_back(closed_->star_integral(x));
        return prefix;
    }

    const int m = basis_->size();
    const double a = basis_->domain().a;
    const double total = basis_->domain().length();
    auto integrand = [&](double u) -> Eigen::MatrixXd {
        const Eigen::VectorXd star = basis_->wronskian_inverse_last_row(u);
        return star * star.transpose();
    };
    auto norm = [](const Eigen::MatrixXd& e) { return e.cwiseAbs().maxCoeff(); };

    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m, m);
    double prev = a;
    for (double x : sorted) {
        if (x > prev) {
            // Spread the tolerance over segments so the accumulated error
            // stays within the configured absolute tolerance.
            QuadratureOptions seg = quad_;
            seg.abs_tol = std::max(quad_.abs_tol * (x - prev) / total, 1e-15);
            acc += detail::adaptive_gl15(integrand, prev, x, seg, norm);
            prev = x;
        }
        prefix.push_back(acc);
    }
    return prefix;
}

Eigen::MatrixXd KernelPair::r1_gram(const std::vector<double>& pts) const {
    const int n = static_cast<int>(pts.size());
    Eigen::MatrixXd gram(n, n);
    if (n == 0) return gram;

    if (closed_) {
        detail::parallel_for(n, [&](int lo, int hi) {
            for (int i = lo; i < hi; ++i)
                for (int j = i; j < n; ++j) gram(i, j) = closed_->r1(pts[i], pts[j]);
        });
    } else {
        std::vector<double> sorted = pts;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        const auto prefix = star_integral_prefix(sorted);
        std::vector<int> rank(n);
        for (int i = 0; i < n; ++i)
            rank[i] = static_cast<int>(
                std::lower_bound(sorted.begin(), sorted.end(), pts[i]) - sorted.begin());
        std::vector<Eigen::VectorXd> vals(n);
        for (int i = 0; i < n; ++i) vals[i] = basis_->values(pts[i]);
        detail::parallel_for(n, [&](int lo, int hi) {
            for (int i = lo; i < hi; ++i)
                for (int j = i; j < n; ++j) {
                    const Eigen::MatrixXd& phi = prefix[std::min(rank[i], rank[j])];
                    gram(i, j) = vals[i].dot(phi * vals[j]);
                }
        });
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) gram(i, j) = gram(j, i);
    return gram;
}

Eigen::MatrixXd KernelPair::r1_band(const std::vector<double>& pts, int bandwidth) const {
    const int n = static_cast<int>(pts.size());
    for (int i = 1; i < n; ++i)
        if (!(pts[i - 1] < pts[i]))
            throw std::invalid_argument("band assembly requires strictly increasing points");
    Eigen::MatrixXd band = Eigen::MatrixXd::Zero(bandwidth + 1, n);

    if (closed_) {
        detail::parallel_for(n, [&](int lo, int hi) {
            for (int j = lo; j < hi; ++j)
                for (int d = 0; d <= bandwidth && j + d < n; ++d)
                    band(d, j) = closed_->r1(pts[j + d], pts[j]);
        });
        return band;
    }

    const auto prefix = star_integral_prefix(pts);
    std::vector<Eigen::VectorXd> vals(n);
    for (int j = 0; j < n; ++j) vals[j] = basis_->values(pts[j]);
    detail::parallel_for(n, [&](int lo, int hi) {
        for (int j = lo; j < hi; ++j) {
            const Eigen::VectorXd w = prefix[j] * vals[j];
            for (int d = 0; d <= bandwidth && j + d < n; ++d)
                band(d, j) = vals[j + d].dot(w);
        }
    });
    return band;
}

// ---------------------------------------------------------------------------
// Closed-form registry

namespace {

bool near(double x, double y) { return std::abs(x - y) <= 1e-12; }

}  // namespace

std::optional<ClosedFormKernel> closed_form_kernel(const LinearOperator& op, Interval domain) {
    if (!op.is_constant()) return std::nullopt;
    const auto& c = op.constant_coeffs();
    const double a = domain.a;

    if (op.order() == 1 && near(c[0], 0.0)) {
        // L = f': u* = 1, G(t,u) = 1 on u <= t, r1(s,t) = min(s,t) - a.
        ClosedFormKernel k;
        k.r1 = [a](double s, double t) { return std::min(s, t) - a; };
        k.star_integral = [a](double x) {
            Eigen::MatrixXd phi(1, 1);
            phi(0, 0) = x - a;
            return phi;
        };
        return k;
    }
    if (op.order() == 2 && near(c[0], 0.0) && near(c[1], 0.0)) {
        // L = f'': u* = (-u, 1), G(t,u) = t - u,
        // r1(s,t) = int_a^min (s-u)(t-u) du.
        ClosedFormKernel k;
        k.r1 = [a](double s, double t) {
            const double x = std::min(s, t);
            return s * t * (x - a) - 0.5 * (s + t) * (x * x - a * a) +
                   (x * x * x - a * a * a) / 3.0;
        };
        k.star_integral = [a](double x) {
            Eigen::MatrixXd phi(2, 2);
            phi(0, 0) = (x * x * x - a * a * a) / 3.0;
            phi(0, 1) = phi(1, 0) = -0.5 * (x * x - a * a);
            phi(1, 1) = x - a;
            return phi;
        };
        return k;
    }
    if (op.order() == 2 && near(c[0], 0.0) && std::abs(c[1]) > 1e-12) {
        // L = f'' + gamma f': u* = (1/gamma, -e^{gamma u}/gamma),
        // G(t,u) = (1 - e^{-gamma (t-u)})/gamma.
        const double g = c[1];
        ClosedFormKernel k;
        k.r1 = [a, g](double s, double t) {
            const double lo = std::min(s, t) - a;
            const double hi = std::max(s, t) - a;
            const double g3 = g * g * g;
            return -1.0 / g3 + lo / (g * g) + std::exp(-g * lo) / g3 +
                   std::exp(-g * hi) / g3 - 0.5 * std::exp(-g * (hi - lo)) / g3 -
                   0.5 * std::exp(-g * (hi + lo)) / g3;
        };
        k.star_integral = [a, g](double x) {
            Eigen::MatrixXd phi(2, 2);
            const double g2 = g * g;
            phi(0, 0) = (x - a) / g2;
            phi(0, 1) = phi(1, 0) = -(std::exp(g * x) - std::exp(g * a)) / (g2 * g);
            phi(1, 1) = (std::exp(2 * g * x) - std::exp(2 * g * a)) / (2 * g2 * g);
            return phi;
        };
        return k;
    }
    return std::nullopt;
}

PenaltyModel make_model(const LinearOperator& op, Interval domain, QuadratureOptions quad) {
    PenaltyModel model{op, nullptr, nullptr};
    if (op.is_constant()) {
        model.basis = std::make_shared<NullSpaceBasis>(null_basis_constant(op, domain));
    } else {
        throw std::invalid_argument(
            "variable-coefficient operators need a user basis; use the basis overload");
    }
    model.kernel =
        std::make_shared<KernelPair>(model.basis, closed_form_kernel(op, domain), quad);
    return model;
}

PenaltyModel make_model(std::shared_ptr<const NullSpaceBasis> basis, QuadratureOptions quad) {
    if (!basis) throw std::invalid_argument("null basis");
    PenaltyModel model{LinearOperator::from_basis(basis), basis, nullptr};
    model.kernel = std::make_shared<KernelPair>(basis, std::nullopt, quad);
    return model;
}

}  // namespace lspline
