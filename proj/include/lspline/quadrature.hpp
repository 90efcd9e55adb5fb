#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <type_traits>
#include <utility>

#include "lspline/errors.hpp"

namespace lspline {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    int max_panels = 1 << 14;
};

namespace detail {

/// 15-point Gauss-Legendre nodes and weights on [-1, 1].
inline constexpr std::array<double, 15> kGL15Nodes = {
    -0.98799251802048542849, -0.93727339240070590431, -0.84820658341042721620,
    -0.72441773136017004742, -0.57097217260853884754, -0.39415134707756336990,
    -0.20119409399743452230, 0.0,
    0.20119409399743452230,  0.39415134707756336990,  0.57097217260853884754,
    0.72441773136017004742,  0.84820658341042721620,  0.93727339240070590431,
    0.98799251802048542849};

inline constexpr std::array<double, 15> kGL15Weights = {
    0.030753241996117268355, 0.070366047488108124709, 0.10715922046717193501,
    0.13957067792615431445,  0.16626920581699393355,  0.18616100001556221103,
    0.19843148532711157646,  0.20257824192556127288,  0.19843148532711157646,
    0.18616100001556221103,  0.16626920581699393355,  0.13957067792615431445,
    0.10715922046717193501,  0.070366047488108124709, 0.030753241996117268355};

template <class F>
auto gl15(F&& f, double lo, double hi) {
    using T = std::decay_t<decltype(f(lo))>;
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    T acc = f(mid + half * kGL15Nodes[0]) * (half * kGL15Weights[0]);
    for (int k = 1; k < 15; ++k)
        acc += f(mid + half * kGL15Nodes[k]) * (half * kGL15Weights[k]);
    return acc;
}

/// Adaptive composite Gauss-Legendre with recursive bisection. `T` is the
/// integrand value type (double or a fixed-size Eigen matrix); `norm` maps a
/// T to the scalar magnitude the tolerance applies to.
template <class F, class Norm>
auto adaptive_gl15(F&& f, double lo, double hi, const QuadratureOptions& opt, Norm&& norm)
    -> std::decay_t<decltype(f(lo))> {
    using T = std::decay_t<decltype(f(lo))>;
    if (lo == hi) return T(f(lo) * 0.0);
    int panels = 1;
    T whole = gl15(f, lo, hi);

    std::function<T(double, double, const T&, double)> recurse =
        [&](double x0, double x1, const T& coarse, double tol) -> T {
        const double mid = 0.5 * (x0 + x1);
        T left = gl15(f, x0, mid);
        T right = gl15(f, mid, x1);
        T fine = left + right;
        if (norm(fine - coarse) <= tol || (x1 - x0) <= 1e-15 * (std::abs(x0) + std::abs(x1) + 1.0))
            return fine;
        panels += 2;
        if (panels > opt.max_panels)
            throw QuadratureFailure("adaptive quadrature exceeded its panel budget");
        return recurse(x0, mid, left, 0.5 * tol) + recurse(mid, x1, right, 0.5 * tol);
    };
    return recurse(lo, hi, whole, opt.abs_tol);
}

}  // namespace detail

/// Integral of f over [lo, hi] to absolute tolerance opt.abs_tol.
/// Throws QuadratureFailure when the panel budget is exhausted.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureOptions& opt = {});

}  // namespace lspline
