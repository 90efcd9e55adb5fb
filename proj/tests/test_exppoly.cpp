#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lspline/exppoly.hpp"

using namespace lspline;

namespace {

double eval_sum(const ExpPolySum& s, double t) { return s(t); }

// 5-point central difference of the derivative chain.
double central_diff(const ExpPolySum& s, double t, double h) {
    return (-eval_sum(s, t + 2 * h) + 8 * eval_sum(s, t + h) - 8 * eval_sum(s, t - h) +
            eval_sum(s, t - 2 * h)) /
           (12 * h);
}

}  // namespace

TEST_CASE("term evaluation matches direct formulas") {
    ExpPolyTerm term;
    term.power = 2;
    term.rate = -1.0;
    term.trig = Trig::Cos;
    term.freq = 2.0;
    term.scale = 3.0;
    const double t = 0.7;
    CHECK(term(t) == doctest::Approx(3.0 * t * t * std::exp(-t) * std::cos(2 * t))
                         .epsilon(1e-14));

    ExpPolyTerm plain;  // defaults: the constant 1
    CHECK(plain(0.3) == 1.0);
}

TEST_CASE("derivatives agree with 5-point central differences at random points") {
    ExpPolySum f{ExpPolyTerm{.power = 2, .rate = -0.8, .trig = Trig::Sin, .freq = 3.0, .scale = 1.5},
                 ExpPolyTerm{.power = 1, .rate = 0.4, .trig = Trig::None, .freq = 0.0, .scale = -2.0},
                 ExpPolyTerm{.power = 0, .rate = 0.0, .trig = Trig::Cos, .freq = 1.0, .scale = 0.7}};
    const ExpPolySum df = f.derivative();

    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double h = 1e-4;
    for (int k = 0; k < 50; ++k) {
        const double t = u(rng);
        const double exact = df(t);
        const double approx = central_diff(f, t, h);
        CHECK(std::abs(exact - approx) <= 1e-6 * (1.0 + std::abs(exact)));
    }
}

TEST_CASE("second derivatives stay in the family") {
    // f = t e^t: f' = e^t + t e^t, f'' = 2 e^t + t e^t.
    ExpPolySum f{ExpPolyTerm{.power = 1, .rate = 1.0}};
    const ExpPolySum d2 = f.derivative().derivative();
    for (double t : {-0.5, 0.0, 0.9}) {
        CHECK(d2(t) == doctest::Approx((2.0 + t) * std::exp(t)).epsilon(1e-13));
    }
}

TEST_CASE("like terms merge and zero terms vanish") {
    ExpPolySum s{ExpPolyTerm{.scale = 1.0}, ExpPolyTerm{.scale = 2.0},
                 ExpPolyTerm{.power = 1, .scale = 0.0}};
    CHECK(s.terms().size() == 1);
    CHECK(s.terms()[0].scale == 3.0);

    // cos' picks up a sign; (cos + sin)' = cos - sin collapses to two terms.
    ExpPolySum trig{ExpPolyTerm{.trig = Trig::Cos, .freq = 2.0},
                    ExpPolyTerm{.trig = Trig::Sin, .freq = 2.0}};
    const ExpPolySum dtrig = trig.derivative();
    CHECK(dtrig.terms().size() == 2);
    CHECK(dtrig(0.25) == doctest::Approx(2 * std::cos(0.5) - 2 * std::sin(0.5)).epsilon(1e-14));
}

TEST_CASE("derivative of the constant is empty") {
    ExpPolySum one{ExpPolyTerm{}};
    CHECK(one.derivative().empty());
    CHECK(one.derivative()(3.0) == 0.0);
}
