#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <numbers>

#include "symmetra/hurwitz.hpp"

using namespace symmetra;

namespace {

/// N terms summed smallest-first plus the Euler-Maclaurin tail with two corrections.
double summation_oracle(double s, double a, long N = 1'000'000)
{
    double sum = 0.0;
    for (long k = N - 1; k >= 0; --k) sum += std::pow(static_cast<double>(k) + a, -s);
    double x = static_cast<double>(N) + a;
    double tail = std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s) + s / 12.0 * std::pow(x, -s - 1.0);
    return sum + tail;
}

}  // namespace

TEST_SUITE("hurwitz")
{
    TEST_CASE("Riemann values")
    {
        CHECK(hurwitz_zeta(2.0, 1.0) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0).epsilon(1e-15));
        CHECK(hurwitz_zeta(4.0, 1.0) == doctest::Approx(std::pow(std::numbers::pi, 4) / 90.0).epsilon(1e-15));
        // zeta(s, 1/2) = (2^s - 1) zeta(s)
        CHECK(hurwitz_zeta(2.0, 0.5) == doctest::Approx(3.0 * std::numbers::pi * std::numbers::pi / 6.0).epsilon(1e-15));
    }

    TEST_CASE("defining recurrence")
    {
        for (double s : {8.0 / 3.0, 4.0 / 3.0, 2.0, 1.1, 7.5})
            for (double a : {0.3, 1e-4, 0.999, 2.5, 40.0}) {
                double lhs = hurwitz_zeta(s, a);
                double rhs = std::pow(a, -s) + hurwitz_zeta(s, a + 1.0);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
            }
    }

    TEST_CASE("direct summation oracle")
    {
        for (double a : {0.5, 0.3, 1.0, 3.7}) {
            ZetaValue z = hurwitz_zeta_bounded(8.0 / 3.0, a);
            CHECK(std::abs(z.value - summation_oracle(8.0 / 3.0, a)) <= 1e-12 * std::max(1.0, z.value));
            CHECK(z.remainder <= 1e-14);
        }
        ZetaValue z = hurwitz_zeta_bounded(8.0 / 3.0, 1e-3);
        CHECK(std::abs(z.value - summation_oracle(8.0 / 3.0, 1e-3)) <= 1e-12 * z.value);
    }

    TEST_CASE("domain errors")
    {
        CHECK_THROWS_AS(hurwitz_zeta(1.0, 0.5), std::domain_error);
        CHECK_THROWS_AS(hurwitz_zeta(2.0, 0.0), std::domain_error);
        CHECK_THROWS_AS(hurwitz_zeta(2.0, -1.0), std::domain_error);
    }
}
