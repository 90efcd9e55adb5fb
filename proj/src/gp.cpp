#include "lspline/gp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lspline/errors.hpp"

namespace lspline {

GPModel GPModel::brownian(double noise_variance, double a) {
    GPModel gp;
    gp.covariance = [a](double s, double t) { return std::min(s, t) - a; };
    gp.noise_variance = noise_variance;
    return gp;
}

GPModel GPModel::cubic(double noise_variance, double a) {
    GPModel gp;
    gp.covariance = [a](double s, double t) {
        const double x = std::min(s, t);
        return s * t * (x - a) - 0.5 * (s + t) * (x * x - a * a) +
               (x * x * x - a * a * a) / 3.0;
    };
    gp.noise_variance = noise_variance;
    return gp;
}

Eigen::MatrixXd covariance_gram(const GPModel& gp, const std::vector<double>& design) {
    const int n = static_cast<int>(design.size());
    Eigen::MatrixXd s(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) s(i, j) = s(j, i) = gp.covariance(design[i], design[j]);
    return s;
}

namespace {

Eigen::VectorXd gram_solve(const GPModel& gp, const std::vector<double>& design,
                           const Eigen::VectorXd& rhs) {
    if (!gp.covariance) throw std::invalid_argument("model has no covariance function");
    if (!(gp.noise_variance >= 0.0)) throw std::invalid_argument("noise variance must be >= 0");
    if (static_cast<int>(design.size()) != rhs.size())
        throw std::invalid_argument("design and observations disagree in length");
    Eigen::MatrixXd a = covariance_gram(gp, design);
    a.diagonal().array() += gp.noise_variance;
    Eigen::LDLT<Eigen::MatrixXd> fact(a);
    const Eigen::VectorXd x = fact.solve(rhs);
    const bool bad = fact.info() != Eigen::Success || !x.allFinite() ||
                     (a * x - rhs).norm() > 1e-8 * (1.0 + rhs.norm());
    if (bad) {
        if (gp.noise_variance == 0.0)
            throw SingularGram("covariance Gram matrix singular with zero noise");
        throw SingularGram("sigma^2 I + S could not be solved accurately");
    }
    return x;
}

}  // namespace

Eigen::VectorXd penalized_coefficients(const GPModel& gp, const std::vector<double>& design,
                                       const Eigen::VectorXd& obs) {
    return gram_solve(gp, design, obs);
}

double posterior_mean(const GPModel& gp, const std::vector<double>& design,
                      const Eigen::VectorXd& obs, double query) {
    const Eigen::VectorXd w = gram_solve(gp, design, obs);
    double v = 0.0;
    for (int j = 0; j < w.size(); ++j) v += gp.covariance(query, design[j]) * w(j);
    return v;
}

Eigen::VectorXd posterior_mean(const GPModel& gp, const std::vector<double>& design,
                               const Eigen::VectorXd& obs, const std::vector<double>& query) {
    const Eigen::VectorXd w = gram_solve(gp, design, obs);
    Eigen::VectorXd out(static_cast<int>(query.size()));
    for (int q = 0; q < out.size(); ++q) {
        double v = 0.0;
        for (int j = 0; j < w.size(); ++j) v += gp.covariance(query[q], design[j]) * w(j);
        out(q) = v;
    }
    return out;
}

double verify_bayes_equivalence(const GPModel& gp, const std::vector<double>& design,
                                const Eigen::VectorXd& obs, const std::vector<double>& query) {
    const Eigen::VectorXd beta = penalized_coefficients(gp, design, obs);
    const Eigen::VectorXd bayes = posterior_mean(gp, design, obs, query);
    double gap = 0.0;
    for (int q = 0; q < static_cast<int>(query.size()); ++q) {
        double fit = 0.0;
        for (int j = 0; j < beta.size(); ++j) fit += beta(j) * gp.covariance(design[j], query[q]);
        gap = std::max(gap, std::abs(fit - bayes(q)));
    }
    return gap;
}

}  // namespace lspline
