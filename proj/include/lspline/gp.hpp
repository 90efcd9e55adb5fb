#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace lspline {

/// Gaussian-process regression model: mean-zero prior with covariance S and
/// independent observation noise of variance sigma^2.
struct GPModel {
    std::function<double(double, double)> covariance;
    double noise_variance = 0.0;

    /// Brownian-motion covariance min(s, t) - a.
    static GPModel brownian(double noise_variance, double a = 0.0);

    /// Covariance of the twice-integrated process matching the cubic penalty
    /// on [a, b]: st(min-a) - (s+t)(min^2-a^2)/2 + (min^3-a^3)/3.
    static GPModel cubic(double noise_variance, double a = 0.0);
};

/// Gram matrix [S(t_i, t_j)] of the covariance on the design.
Eigen::MatrixXd covariance_gram(const GPModel& gp, const std::vector<double>& design);

/// Posterior mean E(mu(t) | Y) = s(t)' (sigma^2 I + S)^{-1} Y, one query.
double posterior_mean(const GPModel& gp, const std::vector<double>& design,
                      const Eigen::VectorXd& obs, double query);

/// Posterior mean over a query grid; factors sigma^2 I + S once.
/// Throws SingularGram when sigma^2 = 0 and the Gram matrix is singular.
Eigen::VectorXd posterior_mean(const GPModel& gp, const std::vector<double>& design,
                               const Eigen::VectorXd& obs,
                               const std::vector<double>& query);

/// Solves the penalty-form problem min ||Y - S beta||^2 + sigma^2 beta'S beta
/// (the order-zero representer problem with kernel S and lambda = sigma^2),
/// evaluates sum_j beta_j S(t_j, .) on the query grid and returns the max
/// absolute gap to posterior_mean. The two routes share one linear system;
/// the contract is a gap <= 1e-8.
double verify_bayes_equivalence(const GPModel& gp, const std::vector<double>& design,
                                const Eigen::VectorXd& obs,
                                const std::vector<double>& query);

/// The minimising coefficients of the penalty-form problem,
/// beta = (sigma^2 I + S)^{-1} Y.
Eigen::VectorXd penalized_coefficients(const GPModel& gp, const std::vector<double>& design,
                                       const Eigen::VectorXd& obs);

}  // namespace lspline
