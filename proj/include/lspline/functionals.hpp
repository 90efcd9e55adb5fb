#pragma once

#include <Eigen/Dense>
#include <functional>
#include <variant>
#include <vector>

#include "lspline/greens.hpp"

namespace lspline {

/// Continuous linear functional on the fitting space: point evaluation
/// F(f) = f(t0) or integration against a weight, F(f) = int w(s) f(s) ds over
/// the weight's support (the whole interval when no support is declared).
class Functional {
public:
    using Weight = std::function<double(double)>;

    static Functional point(double t0);
    static Functional integral(Weight w, std::optional<Interval> support = std::nullopt);

    bool is_point() const { return std::holds_alternative<double>(form_); }
    double location() const;
    const Weight& weight() const;
    const std::optional<Interval>& support() const { return support_; }

    /// F applied to an arbitrary integrand.
    double operator()(const std::function<double(double)>& f, Interval domain,
                      const QuadratureOptions& quad = {}) const;

private:
    Functional() = default;
    std::variant<double, Weight> form_;
    std::optional<Interval> support_;
};

using Functionals = std::vector<Functional>;

Functionals point_functionals(const std::vector<double>& pts);

bool all_point_eval(const Functionals& fs);

/// Representer of F in the penalised subspace: eta(t) = F(r1(., t)).
/// Point evaluation at t0 gives t -> r1(t0, t); integral functionals are
/// evaluated by quadrature split at the kernel's diagonal kink.
std::function<double(double)> representer(const Functional& f,
                                          std::shared_ptr<const KernelPair> kernel);

/// Non-owning variant; the kernel must outlive the returned closure.
std::function<double(double)> representer(const Functional& f, const KernelPair& kernel);

/// Gram matrix of the representers, K[j,k] = F_k(eta_j); symmetrised as
/// (K + K')/2 after assembly.
struct KMatrix {
    Eigen::MatrixXd entries;
    Functionals functionals;

    int size() const { return static_cast<int>(entries.rows()); }
};

KMatrix assemble_k(const Functionals& fs, const KernelPair& kernel);

/// Design matrix T[i][j] = F_i(u_j) over the null-space basis.
Eigen::MatrixXd design_matrix(const Functionals& fs, const NullSpaceBasis& basis,
                              const QuadratureOptions& quad = {});

}  // namespace lspline
