#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "symmetra/hurwitz.hpp"
#include "symmetra/kernel_optimize.hpp"
#include "symmetra/kernels.hpp"

using namespace symmetra;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double p43 = 4.0 / 3.0;

using boost::math::quadrature::gauss_kronrod;

/// Khat(j) = 2 int_0^{1/2} K(u) cos(2 pi j u) du, integrated piece by piece.
double coefficient_oracle(const std::function<double(double)>& k, const std::vector<double>& breaks, std::int64_t j)
{
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        auto f = [&](double u) { return k(u) * std::cos(2.0 * pi * static_cast<double>(j) * u); };
        total += gauss_kronrod<double, 61>::integrate(f, breaks[i], breaks[i + 1], 12, 1e-11);
    }
    return 2.0 * total;
}

std::vector<double> pl_breaks(const KernelPL& k)
{
    std::vector<double> b{0.0};
    for (std::int64_t t = 0; t <= k.T; ++t) b.push_back(0.25 + static_cast<double>(t) / (4.0 * static_cast<double>(k.T)));
    return b;
}

KernelPL random_pl(std::mt19937_64& rng, std::int64_t T)
{
    std::uniform_real_distribution<double> u(-0.5, 1.5);
    std::vector<double> y(static_cast<std::size_t>(T + 1));
    y[0] = 1.0;
    for (std::size_t t = 1; t < y.size(); ++t) y[t] = u(rng);
    return make_kernel_pl(y);
}

KernelStep random_step(std::mt19937_64& rng, std::int64_t Q)
{
    std::uniform_real_distribution<double> u(-0.5, 1.5);
    std::vector<double> v(static_cast<std::size_t>(Q / 4));
    for (auto& x : v) x = u(rng);
    return make_kernel_step(Q, v);
}

/// ||K||_2^2 on the circle; Simpson is exact on each linear piece squared.
double l2sq_exact(const KernelPL& k)
{
    auto b = pl_breaks(k);
    double total = 0.25;
    for (std::size_t i = 1; i + 1 < b.size(); ++i) {
        double a = k(b[i]), c = k(b[i + 1]), m = k(0.5 * (b[i] + b[i + 1]));
        total += (b[i + 1] - b[i]) / 6.0 * (a * a + 4.0 * m * m + c * c);
    }
    return 2.0 * total;
}

}  // namespace

TEST_SUITE("kernels")
{
    TEST_CASE("constant kernel")
    {
        KernelPL one = make_kernel_pl(std::vector<double>(6, 1.0));
        CHECK(pl_fourier_coeff(one, 0) == doctest::Approx(1.0).epsilon(1e-15));
        for (std::int64_t j = 1; j < 30; ++j) CHECK(std::abs(pl_fourier_coeff(one, j)) < 1e-15);
        CHECK(pl_tail_norm(one, 1, p43).value == 0.0);
        CHECK(pl_tail_norm(one, 3, 2.0).value == 0.0);
        CHECK(pl_norm(one, p43).value == doctest::Approx(1.0).epsilon(1e-14));

        KernelStep flat = make_kernel_step(8, {1.0, 1.0});
        CHECK(step_tail_norm(flat, 1, p43).value < 1e-14);
        for (std::int64_t j = 1; j < 30; ++j) CHECK(std::abs(step_fourier_coeff(flat, j)) < 1e-15);
    }

    TEST_CASE("validation")
    {
        CHECK_THROWS(make_kernel_pl({0.5, 1.0}));
        CHECK_THROWS(make_kernel_pl({1.0}));
        CHECK_THROWS(make_kernel_step(6, {1.0}));
        CHECK_THROWS(make_kernel_step(8, {1.0}));
        CHECK_THROWS(validate(ClosedFormKernel{Family::power, {-1.0, 0.5}}));
        CHECK_THROWS(validate(ClosedFormKernel{Family::power, {1.0}}));
        CHECK(family_from_name(family_name(Family::arctan)) == Family::arctan);
        CHECK_THROWS(family_from_name("nope"));
    }

    TEST_CASE("C(j) has period 4T and the transform matches the direct sum")
    {
        std::mt19937_64 rng(1);
        for (std::int64_t T : {1, 3, 7, 20}) {
            KernelPL k = random_pl(rng, T);
            auto period = pl_c_period(k);
            REQUIRE(period.size() == static_cast<std::size_t>(4 * T));
            for (std::int64_t j = 0; j < 4 * T; ++j) {
                CHECK(period[static_cast<std::size_t>(j)] == doctest::Approx(pl_c_value(k, j)).epsilon(1e-11));
                std::int64_t shift = j + 4 * T * (1 + static_cast<std::int64_t>(rng() % 50));
                CHECK(pl_c_value(k, shift) == doctest::Approx(pl_c_value(k, j)).scale(1.0).epsilon(1e-9));
            }
        }
    }

    TEST_CASE("piecewise linear coefficients match adaptive quadrature")
    {
        std::mt19937_64 rng(2);
        for (std::int64_t T : {2, 5, 9}) {
            KernelPL k = random_pl(rng, T);
            auto b = pl_breaks(k);
            for (std::int64_t j = 0; j <= 100; ++j) {
                double expect = coefficient_oracle([&](double u) { return k(u); }, b, j);
                CHECK(std::abs(pl_fourier_coeff(k, j) - expect) < 1e-9);
                CHECK(pl_fourier_coeff(k, -j) == pl_fourier_coeff(k, j));
            }
        }
    }

    TEST_CASE("step coefficients match adaptive quadrature")
    {
        std::mt19937_64 rng(3);
        for (std::int64_t Q : {4, 8, 20}) {
            KernelStep k = random_step(rng, Q);
            std::vector<double> b{0.0};
            for (std::int64_t i = 0; i <= Q / 4; ++i) b.push_back(0.25 + static_cast<double>(i) / static_cast<double>(Q));
            for (std::int64_t j = 0; j <= 100; ++j) {
                double expect = coefficient_oracle([&](double u) { return k(u); }, b, j);
                CHECK(std::abs(step_fourier_coeff(k, j) - expect) < 1e-9);
            }
        }
    }

    TEST_CASE("two-level step coefficients")
    {
        for (double v : {0.0, 0.3, 0.86, 1.0}) {
            KernelStep k = make_kernel_step(4, {v});
            for (std::int64_t j = 1; j <= 40; ++j) {
                double expect = (1.0 - v) * std::sin(pi * static_cast<double>(j) / 2.0) / (pi * static_cast<double>(j));
                CHECK(std::abs(step_fourier_coeff(k, j) - expect) < 1e-14);
            }
        }
    }

    TEST_CASE("tail norms agree with truncated direct sums")
    {
        std::mt19937_64 rng(4);
        KernelPL k = random_pl(rng, 6);
        // p = 2 decays like j^-4, so 2e5 terms leave < 1e-15.
        for (std::int64_t m : {1, 2, 5}) {
            double direct = 0.0;
            for (std::int64_t j = 200'000; j >= m; --j) direct += 2.0 * std::pow(pl_fourier_coeff(k, j), 2);
            CHECK(pl_tail_norm(k, m, 2.0).value == doctest::Approx(std::sqrt(direct)).epsilon(1e-10));
        }
        KernelStep s = random_step(rng, 12);
        // Step coefficients decay like 1/j; compare at p = 3 with an integral tail.
        const std::int64_t J = 400'000;
        double direct = 0.0;
        for (std::int64_t j = J; j >= 1; --j) direct += 2.0 * std::pow(std::abs(step_fourier_coeff(s, j)), 3.0);
        double with_tail = step_tail_norm(s, 1, 3.0).value;
        CHECK(std::pow(with_tail, 3.0) >= direct - 1e-13);
        CHECK(std::pow(with_tail, 3.0) - direct < 1e-9);
    }

    TEST_CASE("Parseval partial sums increase to the 2-norm")
    {
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 4; ++trial) {
            KernelPL k = random_pl(rng, 4 + trial);
            double norm2 = l2sq_exact(k);
            double partial = std::pow(pl_fourier_coeff(k, 0), 2);
            double previous = partial;
            for (std::int64_t j = 1; j <= 20'000; ++j) {
                partial += 2.0 * std::pow(pl_fourier_coeff(k, j), 2);
                CHECK(partial >= previous);
                previous = partial;
            }
            CHECK(partial <= norm2 + 1e-8);
            CHECK(partial >= norm2 - 1e-8);
            CHECK(std::pow(pl_norm(k, 2.0).value, 2) == doctest::Approx(norm2).epsilon(1e-10));
        }
    }

    TEST_CASE("norms decrease in p and tails decrease in m")
    {
        std::mt19937_64 rng(6);
        for (int trial = 0; trial < 10; ++trial) {
            KernelPL k = random_pl(rng, 3 + trial);
            CHECK(pl_norm(k, 2.0).value <= pl_norm(k, p43).value);
            KernelStep s = random_step(rng, 4 * (1 + trial));
            CHECK(step_norm(s, 2.0).value <= step_norm(s, p43).value);
            double previous = pl_tail_norm(k, 1, p43).value;
            for (std::int64_t m = 2; m <= 40; ++m) {
                double t = pl_tail_norm(k, m, p43).value;
                CHECK(t <= previous * (1.0 + 1e-13));
                previous = t;
            }
        }
    }

    TEST_CASE("thread count does not change tail norms")
    {
        KernelPL k = preset_pl("K6", 2000);
        double a = pl_tail_norm(k, 2, p43, 1).value;
        double b = pl_tail_norm(k, 2, p43, 3).value;
        CHECK(a == b);
    }

    TEST_CASE("published kernel constants")
    {
        KernelPL k4 = preset_pl("K4");
        CHECK(pl_norm(k4, p43).value < 0.9658413);

        KernelPL k6 = preset_pl("K6");
        CHECK(std::abs(pl_fourier_coeff(k6, 0) - 0.631932628) < 1e-6);
        CHECK(std::abs(pl_fourier_coeff(k6, 1) - 0.270776892) < 1e-6);
        CHECK(std::abs(pl_tail_norm(k6, 2, p43).value - 0.239175395) < 1e-6);

        KernelPL k2 = sample_closed_form(preset_family("K2"), 10'000);
        CHECK(std::pow(pl_norm(k2, p43).value, -4.0) > 8.0 / 7.0);
    }

    TEST_CASE("sampling closed forms")
    {
        ClosedFormKernel one{Family::two_level, {1.0}};
        KernelPL k = sample_closed_form(one, 50);
        for (double y : k.y) CHECK(y == 1.0);

        ClosedFormKernel k5 = preset_family("K5");
        KernelPL s = sample_closed_form(k5, 100);
        CHECK(s.y[0] == 1.0);
        for (std::int64_t t = 1; t <= 100; ++t)
            CHECK(s.y[static_cast<std::size_t>(t)] == k5(0.25 + static_cast<double>(t) / 400.0));
        CHECK(s(0.1) == 1.0);
        CHECK(s(-0.3) == doctest::Approx(s(0.3)).epsilon(1e-14));
        CHECK(s(0.7) == doctest::Approx(s(0.3)).epsilon(1e-14));
    }

    TEST_CASE("mixing with the constant")
    {
        MixResult trivial = mix_with_constant(1.0, 0.0, p43);
        CHECK(trivial.norm == doctest::Approx(1.0));
        CHECK(trivial.alpha == 1.0);

        // v = 0: the implied bound is the closed-form two-level constant.
        KernelStep zero = make_kernel_step(4, {0.0});
        MixResult m = mix_with_constant(step_fourier_coeff(zero, 0), step_tail_norm(zero, 1, p43).value, p43);
        double zeta = hurwitz_zeta(p43, 1.0);
        double closed = 1.0 + std::pow(pi, 4) / (8.0 * std::pow(std::pow(2.0, p43) - 1.0, 3) * std::pow(zeta, 3));
        CHECK(std::pow(m.norm, -4.0) == doctest::Approx(closed).epsilon(1e-12));
        CHECK(two_level_step_bound() == doctest::Approx(closed).epsilon(1e-14));
        CHECK(closed > 1.074);
        CHECK(std::pow(step_norm(mixed(zero, m.alpha), p43).value, -4.0) == doctest::Approx(closed).epsilon(1e-10));

        KernelPL k4 = preset_pl("K4");
        double k0 = pl_fourier_coeff(k4, 0);
        double tail = pl_tail_norm(k4, 1, p43).value;
        MixResult mk = mix_with_constant(k0, tail, p43);
        double M = 1.0 - k0, N = std::pow(tail, p43);
        CHECK(std::abs(std::pow(mk.norm, -4.0) - (1.0 + std::pow(M, 4) / std::pow(N, 3))) < 1e-9);
        CHECK(std::abs(std::pow(mk.norm, -4.0) - std::pow(pl_norm(k4, p43).value, -4.0)) < 1e-6);
        CHECK(pl_norm(mixed(k4, mk.alpha), p43).value == doctest::Approx(mk.norm).epsilon(1e-12));
    }

    TEST_CASE("optimizer: one free step level reaches the closed form")
    {
        OptimizeResult r = optimize_kernel({SpaceKind::step, 4, Family::two_level}, p43);
        CHECK(r.converged);
        CHECK(std::abs(std::pow(r.norm, -4.0) - two_level_step_bound()) < 1e-8);
        CHECK(std::get<KernelStep>(r.kernel).levels[0] == doctest::Approx(two_level_step_optimum()).epsilon(1e-6));
    }

    TEST_CASE("optimizer: piecewise linear with 25 corners")
    {
        OptimizeResult r = optimize_kernel({SpaceKind::pl, 25, Family::power}, p43);
        CHECK(r.norm <= 0.9668);
        CHECK(r.norm >= kernel_norm_barrier);
        CHECK(r.norm <= r.raw_norm + 1e-15);
        CHECK(pl_norm(std::get<KernelPL>(r.kernel), p43).value == doctest::Approx(r.norm).epsilon(1e-13));
    }

    TEST_CASE("optimizer: power family with the full-bound objective")
    {
        OptimizeConfig config;
        config.objective = Objective::feasibility;
        OptimizeResult r = optimize_kernel({SpaceKind::family, 0, Family::power}, p43, config);
        REQUIRE(r.family_kernel);
        CHECK(std::abs(r.family_kernel->params[0] - 1.61707) < 0.01);
        CHECK(std::abs(r.family_kernel->params[1] - 0.546335) < 0.002);
        REQUIRE(r.feasibility);
        CHECK(*r.feasibility >= 1.182778);
    }

    TEST_CASE("optimizer: power family with the norm objective")
    {
        OptimizeResult r = optimize_kernel({SpaceKind::family, 0, Family::power}, p43);
        CHECK(r.norm >= kernel_norm_barrier);
        CHECK(r.norm < 0.966);
        CHECK_THROWS(optimize_kernel({SpaceKind::pl, 5, Family::power}, p43, [] {
            OptimizeConfig c;
            c.objective = Objective::feasibility;
            return c;
        }()));
    }
}
