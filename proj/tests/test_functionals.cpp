#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lspline/functionals.hpp"

using namespace lspline;

namespace {

PenaltyModel first_derivative_model() {
    return make_model(LinearOperator::constant({0.0}), Interval{0.0, 1.0});
}

PenaltyModel cubic_model() {
    return make_model(LinearOperator::constant({0.0, 0.0}), Interval{0.0, 1.0});
}

}  // namespace

TEST_CASE("point-evaluation representers") {
    const auto model = first_derivative_model();
    SUBCASE("eta(t) = min(t_j, t)") {
        const auto eta = representer(Functional::point(0.4), *model.kernel);
        CHECK(eta(0.7) == doctest::Approx(0.4).epsilon(1e-13));
        CHECK(eta(0.2) == doctest::Approx(0.2).epsilon(1e-13));
    }
    SUBCASE("evaluation at the left endpoint is the zero representer") {
        const auto eta = representer(Functional::point(0.0), *model.kernel);
        for (double t : {0.0, 0.5, 1.0}) CHECK(std::abs(eta(t)) <= 1e-13);
    }
}

TEST_CASE("integral representer for the first-derivative kernel") {
    // eta(t) = int_0^t s f(s) ds + t int_t^1 f(s) ds; with f = 1 this is
    // t - t^2/2.
    const auto model = first_derivative_model();
    const auto eta = representer(Functional::integral([](double) { return 1.0; }),
                                 *model.kernel);
    for (double t : {0.2, 0.5, 0.9})
        CHECK(eta(t) == doctest::Approx(t - 0.5 * t * t).epsilon(1e-9));
}

TEST_CASE("K assembly for point evaluation") {
    SUBCASE("hand matrix for min(s,t) on {1/4, 1/2, 3/4}") {
        const auto model = first_derivative_model();
        const auto k = assemble_k(point_functionals({0.25, 0.5, 0.75}), *model.kernel);
        Eigen::MatrixXd expected(3, 3);
        expected << 0.25, 0.25, 0.25, 0.25, 0.5, 0.5, 0.25, 0.5, 0.75;
        CHECK((k.entries - expected).cwiseAbs().maxCoeff() <= 1e-13);
    }
    SUBCASE("single functional at the left endpoint gives [0]") {
        const auto model = cubic_model();
        const auto k = assemble_k(point_functionals({0.0}), *model.kernel);
        CHECK(k.size() == 1);
        CHECK(std::abs(k.entries(0, 0)) <= 1e-14);
    }
    SUBCASE("equals the r1 Gram matrix entrywise") {
        const auto model = cubic_model();
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<double> pts(8);
        for (auto& p : pts) p = u(rng);
        const auto k = assemble_k(point_functionals(pts), *model.kernel);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j)
                CHECK(std::abs(k.entries(i, j) - model.kernel->r1(pts[i], pts[j])) <= 1e-12);
    }
}

TEST_CASE("K assembly for integral functionals") {
    const auto model = first_derivative_model();
    SUBCASE("unit weights: double integral of min(s,t) is 1/3") {
        Functionals fs{Functional::integral([](double) { return 1.0; })};
        const auto k = assemble_k(fs, *model.kernel);
        CHECK(k.entries(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
    }
    SUBCASE("symmetry after mixed assembly") {
        Functionals fs{Functional::point(0.3),
                       Functional::integral([](double s) { return s; })};
        const auto k = assemble_k(fs, *model.kernel);
        CHECK(k.entries(0, 1) == doctest::Approx(k.entries(1, 0)).epsilon(1e-14));
        // F_2(eta_1) = int_0^1 s min(0.3, s) ds
        //            = int_0^0.3 s^2 ds + 0.3 int_0.3^1 s ds.
        const double expected = 0.027 / 3.0 + 0.3 * 0.5 * (1.0 - 0.09);
        CHECK(k.entries(0, 1) == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("narrow bumps converge to point evaluation") {
    const auto model = first_derivative_model();
    const double w = 1e-3;
    const std::vector<double> centers{0.3, 0.6};
    Functionals bumps, points;
    for (double c : centers) {
        bumps.push_back(Functional::integral([w](double) { return 1.0 / w; },
                                             Interval{c - w / 2, c + w / 2}));
        points.push_back(Functional::point(c));
    }
    const auto kb = assemble_k(bumps, *model.kernel);
    const auto kp = assemble_k(points, *model.kernel);
    CHECK((kb.entries - kp.entries).cwiseAbs().maxCoeff() <= 1e-2);
}

TEST_CASE("representer inner products reproduce K") {
    // <eta_j, eta_k> = int (L eta_j)(L eta_k) with L eta_j(s) = G(t_j, s).
    const auto model = cubic_model();
    const std::vector<double> pts{0.3, 0.7};
    const auto k = assemble_k(point_functionals(pts), *model.kernel);
    const GreensFunction& g = model.kernel->greens();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double inner = integrate(
                [&](double s) { return g(pts[i], s) * g(pts[j], s); }, 0.0, 1.0);
            CHECK(std::abs(inner - k.entries(i, j)) <= 1e-6);
        }
}

TEST_CASE("design matrices") {
    const auto model = cubic_model();
    SUBCASE("point evaluation fills basis values") {
        const auto t = design_matrix(point_functionals({0.2, 0.9}), *model.basis);
        CHECK(t(0, 0) == doctest::Approx(1.0));
        CHECK(t(0, 1) == doctest::Approx(0.2));
        CHECK(t(1, 1) == doctest::Approx(0.9));
    }
    SUBCASE("integral functionals integrate the basis") {
        Functionals fs{Functional::integral([](double) { return 1.0; })};
        const auto t = design_matrix(fs, *model.basis);
        CHECK(t(0, 0) == doctest::Approx(1.0).epsilon(1e-10));   // int_0^1 1
        CHECK(t(0, 1) == doctest::Approx(0.5).epsilon(1e-10));   // int_0^1 t
    }
}

TEST_CASE("functional validation") {
    CHECK_THROWS_AS(Functional::point(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(Functional::integral(nullptr), std::invalid_argument);
    CHECK_THROWS_AS(Functional::integral([](double) { return 1.0; }, Interval{0.5, 0.2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Functional::point(0.5).weight(), std::logic_error);
}
