#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <memory>
#include <random>

#include "lspline/greens.hpp"

using namespace lspline;

namespace {

PenaltyModel first_derivative_model(Interval domain = {0.0, 1.0}) {
    return make_model(LinearOperator::constant({0.0}), domain);
}

PenaltyModel cubic_model(Interval domain = {0.0, 1.0}) {
    return make_model(LinearOperator::constant({0.0, 0.0}), domain);
}

PenaltyModel exp_gamma_model(double gamma, Interval domain = {0.0, 1.0}) {
    return make_model(LinearOperator::constant({0.0, gamma}), domain);
}

PenaltyModel harmonic_model(double omega, Interval domain = {0.0, 1.0}) {
    return make_model(LinearOperator::constant({0.0, 0.0, omega * omega, 0.0}), domain);
}

/// Quadrature-backed twin of a model's kernel (closed form disabled).
KernelPair quadrature_kernel(const PenaltyModel& model) {
    return KernelPair(model.basis, std::nullopt, model.kernel->quadrature_options());
}

// Six-term expression for the f'' + gamma f' kernel, s <= t, a = 0.
double exp_gamma_r1_reference(double s, double t, double g) {
    const double g3 = g * g * g;
    return -1.0 / g3 + s / (g * g) + std::exp(-g * s) / g3 + std::exp(-g * t) / g3 -
           0.5 * std::exp(-g * (t - s)) / g3 - 0.5 * std::exp(-g * (s + t)) / g3;
}

}  // namespace

TEST_CASE("Green's function values") {
    SUBCASE("first derivative: indicator of u <= t") {
        const auto model = first_derivative_model();
        const GreensFunction& g = model.kernel->greens();
        CHECK(g(0.7, 0.2) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(g(0.7, 0.7) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(g(0.2, 0.7) == 0.0);
    }
    SUBCASE("f'' + gamma f': (1 - e^{-gamma(t-u)})/gamma") {
        const double gamma = 1.8;
        const auto model = exp_gamma_model(gamma);
        const GreensFunction& g = model.kernel->greens();
        for (double t : {0.5, 0.9})
            for (double u : {0.1, 0.4}) {
                const double expected = (1.0 - std::exp(-gamma * (t - u))) / gamma;
                CHECK(g(t, u) == doctest::Approx(expected).epsilon(1e-12));
            }
    }
    SUBCASE("upper-triangular support for any operator") {
        const auto model = harmonic_model(2.0);
        const GreensFunction& g = model.kernel->greens();
        CHECK(g(0.3, 0.31) == 0.0);
        CHECK(g(0.0, 1.0) == 0.0);
    }
}

TEST_CASE("null-space kernel r0") {
    SUBCASE("cubic: 1 + (s-a)(t-a) on a shifted interval") {
        const auto model = cubic_model({0.2, 1.2});
        for (double s : {0.3, 0.8})
            for (double t : {0.5, 1.1})
                CHECK(model.kernel->r0(s, t) ==
                      doctest::Approx(1.0 + (s - 0.2) * (t - 0.2)).epsilon(1e-12));
    }
    SUBCASE("first derivative on [0,1]: identically 1") {
        const auto model = first_derivative_model();
        CHECK(model.kernel->r0(0.25, 0.9) == doctest::Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("exp-gamma: explicit C matrix and kernel values") {
        const double gamma = 1.3, a = 0.3;
        const auto model = exp_gamma_model(gamma, {a, 1.5});
        const double g2 = gamma * gamma;
        Eigen::MatrixXd expected_c(2, 2);
        expected_c << 1.0 + 1.0 / g2, -std::exp(gamma * a) / g2, -std::exp(gamma * a) / g2,
            std::exp(2 * gamma * a) / g2;
        CHECK((model.kernel->c_matrix() - expected_c).cwiseAbs().maxCoeff() <= 1e-10);

        for (double s : {0.4, 0.9})
            for (double t : {0.6, 1.2}) {
                const double ss = s - a, tt = t - a;
                const double expected = 1.0 + 1.0 / g2 - std::exp(-gamma * tt) / g2 -
                                        std::exp(-gamma * ss) / g2 +
                                        std::exp(-gamma * (ss + tt)) / g2;
                CHECK(model.kernel->r0(s, t) == doctest::Approx(expected).epsilon(1e-12));
            }
    }
}

TEST_CASE("penalty kernel r1") {
    SUBCASE("first derivative on [0,1]: min(s,t)") {
        const auto model = first_derivative_model();
        CHECK(model.kernel->r1(0.3, 0.8) == doctest::Approx(0.3).epsilon(1e-13));
        CHECK(model.kernel->r1(0.8, 0.3) == doctest::Approx(0.3).epsilon(1e-13));
    }
    SUBCASE("cubic closed form equals the direct integral of (s-u)(t-u)") {
        const auto model = cubic_model({0.1, 1.1});
        for (double s : {0.3, 0.9})
            for (double t : {0.4, 1.0}) {
                const double direct = integrate(
                    [&](double u) { return (s - u) * (t - u); }, 0.1, std::min(s, t));
                CHECK(model.kernel->r1(s, t) == doctest::Approx(direct).epsilon(1e-11));
            }
    }
    SUBCASE("exp-gamma matches the six-term expression") {
        const double gamma = 2.0;
        const auto model = exp_gamma_model(gamma);
        const double s = 0.3, t = 0.7;
        CHECK(model.kernel->r1(s, t) ==
              doctest::Approx(exp_gamma_r1_reference(s, t, gamma)).epsilon(1e-13));
        CHECK(model.kernel->r1(t, s) ==
              doctest::Approx(exp_gamma_r1_reference(s, t, gamma)).epsilon(1e-13));
    }
    SUBCASE("r1(a, t) vanishes for every operator") {
        for (const auto& model :
             {first_derivative_model(), cubic_model(), exp_gamma_model(1.1),
              harmonic_model(2.5)}) {
            CHECK(std::abs(model.kernel->r1(model.basis->domain().a, 0.6)) <= 1e-12);
            CHECK(std::abs(model.kernel->r1(0.6, model.basis->domain().a)) <= 1e-12);
        }
    }
}

TEST_CASE("closed-form and quadrature backends agree to 1e-8") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& model :
         {first_derivative_model(), cubic_model(), exp_gamma_model(0.7)}) {
        REQUIRE(model.kernel->backend() == KernelPair::Backend::ClosedForm);
        const KernelPair quad = quadrature_kernel(model);
        REQUIRE(quad.backend() == KernelPair::Backend::Quadrature);
        for (int k = 0; k < 100; ++k) {
            const double s = u(rng), t = u(rng);
            CHECK(std::abs(model.kernel->r1(s, t) - quad.r1(s, t)) <= 1e-8);
        }
    }
}

TEST_CASE("kernel symmetry on random pairs") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto model = exp_gamma_model(1.4);
    const auto harmonic = harmonic_model(2.2);
    for (int k = 0; k < 100; ++k) {
        const double s = u(rng), t = u(rng);
        const double r1 = model.kernel->r1(s, t);
        CHECK(std::abs(r1 - model.kernel->r1(t, s)) <= 1e-12 * (1.0 + std::abs(r1)));
        const double r0 = model.kernel->r0(s, t);
        CHECK(std::abs(r0 - model.kernel->r0(t, s)) <= 1e-12 * (1.0 + std::abs(r0)));
        const double hr1 = harmonic.kernel->r1(s, t);
        CHECK(std::abs(hr1 - harmonic.kernel->r1(t, s)) <= 1e-12 * (1.0 + std::abs(hr1)));
    }
}

TEST_CASE("r0 reproduces every null-space basis function") {
    for (const auto& model : {exp_gamma_model(1.9), harmonic_model(1.5), cubic_model()}) {
        const auto& basis = *model.basis;
        const int m = basis.size();
        const Eigen::MatrixXd wa = basis.wronskian(basis.domain().a);
        const Eigen::MatrixXd gram = wa * wa.transpose();
        const Eigen::MatrixXd& c = model.kernel->c_matrix();
        for (int l = 0; l < m; ++l) {
            for (double t : {0.15, 0.55, 0.95}) {
                double lhs = 0.0;
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j)
                        lhs += c(i, j) * basis.function(j)(t) * gram(l, i);
                CHECK(std::abs(lhs - basis.function(l)(t)) <= 1e-10);
            }
        }
    }
}

TEST_CASE("r1 reproduces functions vanishing to order m at a") {
    // <r1(., t), f> = int (L_s r1(s,t)) (Lf)(s) ds with L_s r1(s,t) = G(t,s).
    SUBCASE("cubic with f = t^2") {
        const auto model = cubic_model();
        const GreensFunction& g = model.kernel->greens();
        SmoothFunction f(ExpPolySum{ExpPolyTerm{.power = 2}}, 2);
        for (double t : {0.3, 0.8}) {
            const double inner = integrate(
                [&](double s) { return g(t, s) * model.op.apply(f, s); }, 0.0, 1.0);
            CHECK(std::abs(inner - f(t)) <= 1e-6);
        }
    }
    SUBCASE("harmonic with f = t^4") {
        const double omega = 1.4;
        const auto model = harmonic_model(omega);
        const GreensFunction& g = model.kernel->greens();
        SmoothFunction f(ExpPolySum{ExpPolyTerm{.power = 4}}, 4);
        for (double t : {0.45, 0.9}) {
            const double inner = integrate(
                [&](double s) { return g(t, s) * model.op.apply(f, s); }, 0.0, 1.0);
            CHECK(std::abs(inner - f(t)) <= 1e-6);
        }
    }
}

TEST_CASE("Green's identity residuals") {
    SUBCASE("cubic with f = t^2") {
        const auto model = cubic_model();
        SmoothFunction f(ExpPolySum{ExpPolyTerm{.power = 2}}, 2);
        CHECK(verify_greens_identity(model.kernel->greens(), model.op, f) <= 1e-8);
    }
    SUBCASE("first derivative with f = t") {
        const auto model = first_derivative_model();
        SmoothFunction f(ExpPolySum{ExpPolyTerm{.power = 1}}, 1);
        CHECK(verify_greens_identity(model.kernel->greens(), model.op, f) <= 1e-10);
    }
    SUBCASE("zero function has zero residual") {
        const auto model = cubic_model();
        SmoothFunction f(ExpPolySum{}, 2);
        CHECK(verify_greens_identity(model.kernel->greens(), model.op, f) == 0.0);
    }
    SUBCASE("boundary violation raises") {
        const auto model = cubic_model();
        SmoothFunction f(ExpPolySum{ExpPolyTerm{}}, 2);  // f = 1, f(a) != 0
        CHECK_THROWS_AS(verify_greens_identity(model.kernel->greens(), model.op, f),
                        BoundaryViolation);
    }
}

TEST_CASE("r1 Gram matrices are positive semi-definite") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> pts(20);
    for (auto& p : pts) p = u(rng);
    for (const auto& model : {cubic_model(), exp_gamma_model(2.3), harmonic_model(1.8)}) {
        const Eigen::MatrixXd gram = model.kernel->r1_gram(pts);
        CHECK((gram - gram.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
        const double lo = es.eigenvalues().minCoeff();
        const double hi = es.eigenvalues().maxCoeff();
        CHECK(lo >= -1e-9 * std::max(hi, 1.0));
    }
}

TEST_CASE("band assembly matches pointwise kernel values") {
    std::vector<double> pts;
    for (int i = 1; i <= 12; ++i) pts.push_back(i / 13.0);
    SUBCASE("closed form") {
        const auto model = exp_gamma_model(1.1);
        const Eigen::MatrixXd band = model.kernel->r1_band(pts, 4);
        for (int j = 0; j < 12; ++j)
            for (int d = 0; d <= 4 && j + d < 12; ++d)
                CHECK(band(d, j) ==
                      doctest::Approx(model.kernel->r1(pts[j + d], pts[j])).epsilon(1e-12));
    }
    SUBCASE("quadrature path (harmonic operator)") {
        const auto model = harmonic_model(2.0);
        const Eigen::MatrixXd band = model.kernel->r1_band(pts, 8);
        for (int j = 0; j < 12; ++j)
            for (int d = 0; d <= 8 && j + d < 12; ++d)
                CHECK(std::abs(band(d, j) - model.kernel->r1(pts[j + d], pts[j])) <= 1e-8);
    }
    SUBCASE("prefix route and closed form agree for a registered operator") {
        const auto model = cubic_model();
        const KernelPair quad = quadrature_kernel(model);
        const Eigen::MatrixXd band = quad.r1_band(pts, 4);
        for (int j = 0; j < 12; ++j)
            for (int d = 0; d <= 4 && j + d < 12; ++d)
                CHECK(std::abs(band(d, j) - model.kernel->r1(pts[j + d], pts[j])) <= 1e-8);
    }
}

TEST_CASE("Gram assembly is identical across thread counts") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> pts(40);
    for (auto& p : pts) p = u(rng);
    const auto model = cubic_model();

    setenv("LSPLINE_THREADS", "1", 1);
    const Eigen::MatrixXd one = model.kernel->r1_gram(pts);
    setenv("LSPLINE_THREADS", "4", 1);
    const Eigen::MatrixXd four = model.kernel->r1_gram(pts);
    unsetenv("LSPLINE_THREADS");
    CHECK((one - four).cwiseAbs().maxCoeff() == 0.0);
}
