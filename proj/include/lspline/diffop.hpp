#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "lspline/exppoly.hpp"

namespace lspline {

/// Closed interval [a, b] on which bases, kernels and fits live.
struct Interval {
    double a = 0.0;
    double b = 1.0;

    double length() const { return b - a; }
    bool contains(double t) const { return t >= a && t <= b; }
};

/// Reciprocal-condition threshold below which a Wronskian counts as singular.
inline constexpr double kWronskianRcondFloor = 1e-12;

/// Relative tolerance for declaring a basis function annihilated by an operator.
inline constexpr double kNullResidualTol = 1e-8;

/// A scalar function exposing analytic derivatives up to a fixed order.
///
/// Either backed by an exponential-polynomial sum (derivatives exact, any
/// order) or by a user handle `f(t, order)` supplying analytic derivatives.
/// Finite-difference fallbacks are deliberately not offered.
class SmoothFunction {
public:
    using Evaluator = std::function<double(double t, int order)>;

    SmoothFunction(ExpPolySum sum, int max_order);
    SmoothFunction(Evaluator handle, int max_order);

    double operator()(double t) const { return eval(t, 0); }
    double eval(double t, int order) const;

    /// Largest derivative order the function promises to supply.
    int max_order() const { return max_order_; }
    bool is_exp_poly() const { return !chain_.empty(); }
    const ExpPolySum& exp_poly() const { return chain_.front(); }

private:
    std::vector<ExpPolySum> chain_;  // derivative chain, closed-form case
    Evaluator handle_;
    int max_order_;
};

/// Basis u_1..u_m for the null space of an order-m operator on [a, b].
class NullSpaceBasis {
public:
    NullSpaceBasis(std::vector<SmoothFunction> functions, Interval domain);

    int size() const { return static_cast<int>(funcs_.size()); }
    const Interval& domain() const { return domain_; }
    const SmoothFunction& function(int i) const { return funcs_.at(i); }

    /// W(t): rows index basis functions, columns derivative orders 0..m-1.
    Eigen::MatrixXd wronskian(double t) const;

    /// Basis values (u_1(t), ..., u_m(t)).
    Eigen::VectorXd values(double t) const;

    /// Last row of W(t)^{-1}. Throws SingularWronskian when the reciprocal
    /// condition estimate falls below kWronskianRcondFloor.
    Eigen::VectorXd wronskian_inverse_last_row(double t) const;

    /// T[i][j] = u_j(pts[i]).
    Eigen::MatrixXd value_matrix(const std::vector<double>& pts) const;

    /// Checks invertibility of W on `samples` equispaced points of [a, b];
    /// throws SingularWronskian naming the first failing point.
    void require_invertible_wronskian(int samples) const;

private:
    std::vector<SmoothFunction> funcs_;
    Interval domain_;
};

/// m-th order linear differential operator
/// (L f)(t) = f^(m)(t) + sum_{j<m} w_j(t) f^(j)(t).
class LinearOperator {
public:
    using Coefficient = std::function<double(double)>;

    /// Constant coefficients w_0..w_{m-1}; m = coeffs.size().
    static LinearOperator constant(std::vector<double> coeffs);

    /// Continuous coefficient functions w_j(t).
    static LinearOperator variable(std::vector<Coefficient> coeffs);

    /// Operator annihilating every function of `basis`:
    /// (w_0(t),...,w_{m-1}(t))' = -W(t)^{-1} (u_1^(m)(t),...,u_m^(m)(t))'.
    static LinearOperator from_basis(std::shared_ptr<const NullSpaceBasis> basis);

    int order() const { return order_; }
    bool is_constant() const;
    const std::vector<double>& constant_coeffs() const;

    /// The defining basis for basis-defined operators, nullptr otherwise.
    std::shared_ptr<const NullSpaceBasis> defining_basis() const;

    /// w_j(t) for 0 <= j < m.
    double coefficient(int j, double t) const;

    /// (L f)(t); f must supply derivatives up to order m at t.
    double apply(const SmoothFunction& f, double t) const;

private:
    LinearOperator() = default;

    int order_ = 0;
    std::variant<std::vector<double>, std::vector<Coefficient>,
                 std::shared_ptr<const NullSpaceBasis>>
        coeffs_;
};

/// Basis for the null space of a constant-coefficient operator on `domain`,
/// built from the roots of the characteristic polynomial: a real root r of
/// multiplicity k contributes t^l e^{rt}, l < k; a complex pair a +- ib
/// contributes t^l e^{at} cos(bt) and t^l e^{at} sin(bt).
NullSpaceBasis null_basis_constant(const LinearOperator& op, Interval domain);

namespace detail {

/// One distinct characteristic root after clustering.
struct Root {
    std::complex<double> value;
    int multiplicity = 1;
    bool real = false;
};

/// Companion-matrix eigenvalues with Newton refinement and multiplicity
/// clustering. coeffs are w_0..w_{m-1} of the monic polynomial
/// x^m + sum w_j x^j. Throws RootFindingFailure.
std::vector<Root> characteristic_roots(const std::vector<double>& coeffs);

}  // namespace detail

}  // namespace lspline
