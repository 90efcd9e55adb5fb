#include "lspline/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lspline/parallel.hpp"

namespace lspline {

Functional Functional::point(double t0) {
    if (!std::isfinite(t0)) throw std::invalid_argument("evaluation point must be finite");
    Functional f;
    f.form_ = t0;
    return f;
}

Functional Functional::integral(Weight w, std::optional<Interval> support) {
    if (!w) throw std::invalid_argument("null weight function");
    if (support && !(support->a < support->b))
        throw std::invalid_argument("support must satisfy a < b");
    Functional f;
    f.form_ = std::move(w);
    f.support_ = support;
    return f;
}

double Functional::location() const {
    if (!is_point()) throw std::logic_error("not a point-evaluation functional");
    return std::get<double>(form_);
}

const Functional::Weight& Functional::weight() const {
    if (is_point()) throw std::logic_error("not an integral functional");
    return std::get<Weight>(form_);
}

namespace {

Interval clip(Interval domain, const std::optional<Interval>& support) {
    if (!support) return domain;
    return Interval{std::max(domain.a, support->a), std::min(domain.b, support->b)};
}

}  // namespace

double Functional::operator()(const std::function<double(double)>& f, Interval domain,
                              const QuadratureOptions& quad) const {
    if (is_point()) return f(std::get<double>(form_));
    const auto& w = std::get<Weight>(form_);
    const Interval range = clip(domain, support_);
    if (!(range.a < range.b)) return 0.0;
    return integrate([&](double s) { return w(s) * f(s); }, range.a, range.b, quad);
}

Functionals point_functionals(const std::vector<double>& pts) {
    Functionals fs;
    fs.reserve(pts.size());
    for (double t : pts) fs.push_back(Functional::point(t));
    return fs;
}

bool all_point_eval(const Functionals& fs) {
    for (const auto& f : fs)
        if (!f.is_point()) return false;
    return true;
}

namespace {

/// int w(s) r1(s, t) ds over the functional's support with the range split
/// at s = t, where r1(., t) has a derivative kink.
double integral_representer_at(const Functional& fj, const KernelPair& kernel, double t,
                               const QuadratureOptions& quad) {
    const Interval range = clip(kernel.basis().domain(), fj.support());
    if (!(range.a < range.b)) return 0.0;
    const auto& w = fj.weight();
    auto f = [&](double s) { return w(s) * kernel.r1(s, t); };
    double v = 0.0;
    if (t > range.a) v += integrate(f, range.a, std::min(t, range.b), quad);
    if (t < range.b) v += integrate(f, std::max(t, range.a), range.b, quad);
    return v;
}

}  // namespace

std::function<double(double)> representer(const Functional& f,
                                          std::shared_ptr<const KernelPair> kernel) {
    if (!kernel) throw std::invalid_argument("null kernel");
    if (f.is_point()) {
        const double t0 = f.location();
        return [t0, kernel](double t) { return kernel->r1(t0, t); };
    }
    const QuadratureOptions quad = kernel->quadrature_options();
    return [f, quad, kernel](double t) {
        return integral_representer_at(f, *kernel, t, quad);
    };
}

std::function<double(double)> representer(const Functional& f, const KernelPair& kernel) {
    return representer(
        f, std::shared_ptr<const KernelPair>(std::shared_ptr<const void>(), &kernel));
}

KMatrix assemble_k(const Functionals& fs, const KernelPair& kernel) {
    const int n = static_cast<int>(fs.size());
    if (n < 1) throw std::invalid_argument("need at least one functional");

    KMatrix k;
    k.functionals = fs;

    if (all_point_eval(fs)) {
        std::vector<double> pts(n);
        for (int j = 0; j < n; ++j) pts[j] = fs[j].location();
        k.entries = kernel.r1_gram(pts);
    } else {
        const Interval domain = kernel.basis().domain();
        const QuadratureOptions inner = kernel.quadrature_options();
        // Iterated double integrals get twice the panel budget.
        QuadratureOptions outer = inner;
        outer.max_panels *= 2;
        k.entries.resize(n, n);
        detail::parallel_for(n, [&](int lo, int hi) {
            for (int j = lo; j < hi; ++j) {
                auto eta_j = [&](double t) {
                    if (fs[j].is_point()) return kernel.r1(fs[j].location(), t);
                    return integral_representer_at(fs[j], kernel, t, inner);
                };
                for (int l = 0; l < n; ++l) k.entries(j, l) = fs[l](eta_j, domain, outer);
            }
        });
    }
    k.entries = 0.5 * (k.entries + k.entries.transpose()).eval();
    return k;
}

Eigen::MatrixXd design_matrix(const Functionals& fs, const NullSpaceBasis& basis,
                              const QuadratureOptions& quad) {
    const int n = static_cast<int>(fs.size());
    const int m = basis.size();
    Eigen::MatrixXd t_matrix(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            const auto& u = basis.function(j);
            t_matrix(i, j) = fs[i]([&u](double t) { return u(t); }, basis.domain(), quad);
        }
    return t_matrix;
}

}  // namespace lspline
