#include "doctest.h"

#include <cmath>

#include "qfc/bessel.hpp"
#include "qfc/errors.hpp"

using namespace qfc;

TEST_CASE("J_0(0) = 1") { CHECK(bessel_j(0.0, 0.0) == doctest::Approx(1.0)); }

TEST_CASE("half-integer closed form") {
    // J_{1/2}(x) = sqrt(2/(pi x)) sin x
    for (double x : {0.5, 1.0, 3.0, 10.0, 25.0, 300.0}) {
        const double exact = std::sqrt(2.0 / (M_PI * x)) * std::sin(x);
        CHECK(bessel_j(0.5, x) == doctest::Approx(exact).epsilon(1e-12));
    }
    CHECK(bessel_j(0.5, 1.0) == doctest::Approx(0.6713967071418031).epsilon(1e-12));
}

TEST_CASE("series vs recurrence agree in the overlap") {
    // the branch switches at x = max(12, 2 nu); values straddling it must match
    for (double nu : {0.0, 1.0, 2.5, 5.0, 7.5}) {
        const double xc = std::max(12.0, 2.0 * nu);
        const double below = bessel_j(nu, xc);           // series branch
        const double above = bessel_j(nu, xc + 1e-12);   // recurrence branch
        CHECK(std::abs(below - above) <= 1e-10);
    }
}

TEST_CASE("known values") {
    CHECK(bessel_j(0.0, 1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-12));
    CHECK(bessel_j(1.0, 1.0) == doctest::Approx(0.4400505857449335).epsilon(1e-12));
    CHECK(bessel_j(0.0, 20.0) == doctest::Approx(0.1670246643405832).epsilon(1e-10));
    CHECK(bessel_j(5.0, 20.0) == doctest::Approx(0.1511697679823950).epsilon(1e-9));
    CHECK(bessel_j(2.5, 10.0) == doctest::Approx(0.1966584835818184).epsilon(1e-9));
    CHECK(bessel_j(7.5, 15.0) == doctest::Approx(-0.08121294510330085).epsilon(1e-9));
    CHECK(bessel_j(7.5, 40.0) == doctest::Approx(-0.1260587778710217).epsilon(1e-9));
    CHECK(bessel_j(2.5, 300.0) == doctest::Approx(0.04606328299369345).epsilon(1e-8));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(bessel_j(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_j(61.0, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_j(1.0, -1.0), DomainError);
    CHECK_THROWS_AS(bessel_j(1.0, 2e6), DomainError);
}
