#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "lspline/diffop.hpp"
#include "lspline/quadrature.hpp"

namespace lspline {

/// Causal Green's function of L under the initial conditions at a:
/// G(t, u) = sum_i u_i(t) u*_i(u) for u <= t, 0 otherwise, where u* is the
/// last row of the inverse Wronskian.
class GreensFunction {
public:
    explicit GreensFunction(std::shared_ptr<const NullSpaceBasis> basis);

    double operator()(double t, double u) const;
    const NullSpaceBasis& basis() const { return *basis_; }

private:
    std::shared_ptr<const NullSpaceBasis> basis_;
};

/// Max over a test grid of |f(t) - int_a^t G(t,u) (Lf)(u) du|.
/// f must satisfy f^(j)(a) = 0 for j < order(op); throws BoundaryViolation
/// when it misses by more than 1e-8 (relative to the size of f).
double verify_greens_identity(const GreensFunction& g, const LinearOperator& op,
                              const SmoothFunction& f, int grid_size = 21,
                              const QuadratureOptions& quad = {});

using KernelFormula = std::function<double(double s, double t)>;

/// Hand-coded kernel pieces for a registered operator: r1 itself plus the
/// cumulative star product Phi(x) = int_a^x u*(u) u*(u)' du, which makes the
/// banded fast path O(n).
struct ClosedFormKernel {
    KernelFormula r1;
    std::function<Eigen::MatrixXd(double)> star_integral;
};

/// Reproducing kernel pair of the order-m problem: r0 spans the null space,
/// r1 its orthogonal complement (functions vanishing to order m at a).
class KernelPair {
public:
    enum class Backend { ClosedForm, Quadrature };

    KernelPair(std::shared_ptr<const NullSpaceBasis> basis,
               std::optional<ClosedFormKernel> closed = std::nullopt,
               QuadratureOptions quad = {});

    /// r0(s,t) = sum_ij C_ij u_i(s) u_j(t), C = (W(a) W(a)')^{-1}.
    double r0(double s, double t) const;

    /// r1(s,t) = int_a^{min(s,t)} G(s,u) G(t,u) du; closed form when the
    /// operator ships one, adaptive Gauss-Legendre otherwise.
    double r1(double s, double t) const;

    Backend backend() const {
        return closed_ ? Backend::ClosedForm : Backend::Quadrature;
    }
    const Eigen::MatrixXd& c_matrix() const { return c_; }
    const GreensFunction& greens() const { return greens_; }
    const NullSpaceBasis& basis() const { return *basis_; }
    const QuadratureOptions& quadrature_options() const { return quad_; }

    /// Gram matrix [r1(p_i, p_j)]. Assembly may run on several threads
    /// (LSPLINE_THREADS); entries never depend on the schedule.
    Eigen::MatrixXd r1_gram(const std::vector<double>& pts) const;

    /// Lower diagonals of the Gram matrix on strictly increasing points:
    /// band(d, j) = r1(p_{j+d}, p_j), 0 <= d <= bandwidth. O(n) work.
    Eigen::MatrixXd r1_band(const std::vector<double>& pts, int bandwidth) const;

    /// Cumulative star products Phi(x) = int_a^x u*(u) u*(u)' du at each of
    /// the given increasing points; r1(s,t) = v(s)' Phi(min(s,t)) v(t).
    /// Closed form when registered, cumulative quadrature otherwise.
    std::vector<Eigen::MatrixXd> star_integral_prefix(const std::vector<double>& sorted) const;

private:
    double r1_quadrature(double s, double t) const;

    std::shared_ptr<const NullSpaceBasis> basis_;
    GreensFunction greens_;
    Eigen::MatrixXd c_;
    std::optional<ClosedFormKernel> closed_;
    QuadratureOptions quad_;
};

/// Hand-coded kernels for the operators shipped with closed forms
/// (f', f'' and f'' + gamma f'); nullopt for anything else.
/// Coefficient patterns are matched to 1e-12.
std::optional<ClosedFormKernel> closed_form_kernel(const LinearOperator& op, Interval domain);

/// Operator + null-space basis + kernel pair, ready for fitting.
struct PenaltyModel {
    LinearOperator op;
    std::shared_ptr<const NullSpaceBasis> basis;
    std::shared_ptr<const KernelPair> kernel;
};

/// Model for a constant-coefficient operator; uses the closed-form kernel
/// registry when the operator matches, quadrature otherwise.
PenaltyModel make_model(const LinearOperator& op, Interval domain,
                        QuadratureOptions quad = {});

/// Model defined by a user basis (the operator is derived from it).
PenaltyModel make_model(std::shared_ptr<const NullSpaceBasis> basis,
                        QuadratureOptions quad = {});

}  // namespace lspline
