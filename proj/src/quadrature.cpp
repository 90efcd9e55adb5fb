#include "lspline/quadrature.hpp"

namespace lspline {

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureOptions& opt) {
    if (lo == hi) return 0.0;
    const double sign = lo <= hi ? 1.0 : -1.0;
    if (sign < 0) std::swap(lo, hi);
    return sign * detail::adaptive_gl15([&](double x) { return f(x); }, lo, hi, opt,
                                        [](double e) { return std::abs(e); });
}

}  // namespace lspline
