#include <doctest.h>

#include <cmath>
#include <numbers>

#include "symmetra/bounds.hpp"
#include "symmetra/kernels.hpp"
#include "symmetra/sidon.hpp"

using namespace symmetra;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double p43 = 4.0 / 3.0;

const QuarticBoundInputs& k6_inputs()
{
    static const QuarticBoundInputs in = quartic_inputs(preset_pl("K6"), 2);
    return in;
}

}  // namespace

TEST_SUITE("bounds")
{
    TEST_CASE("trivial lower bound")
    {
        CHECK(trivial_lower(1.0) == 1.0);
        CHECK(trivial_lower(0.5) == 0.125);
        CHECK(trivial_lower(0.75) == 0.5);
        CHECK(trivial_lower(0.0) == 0.0);
    }

    TEST_CASE("simple lower bound from a kernel")
    {
        CHECK(simple_lower_from_kernel(preset_pl("K4")) > 0.574575);
        double k1 = simple_lower_from_kernel(make_kernel_step(4, {two_level_step_optimum()}));
        CHECK(k1 > 0.537);
        CHECK(k1 == doctest::Approx(0.5 * two_level_step_bound()).epsilon(1e-10));
        CHECK(simple_lower_from_kernel(make_kernel_pl({1.0, 1.0, 1.0})) == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(simple_lower_coefficient(1.0) == 0.5);
        KernelPL outside;
        outside.T = 1;
        outside.y = {0.5, 1.0};
        CHECK_THROWS_AS(simple_lower_from_kernel(outside), std::invalid_argument);
    }

    TEST_CASE("quartic bound")
    {
        QuarticBoundInputs one{1, {0.8}, 0.25};
        CHECK(quartic_bound(one, {}) == doctest::Approx(1.0 + std::pow(0.2 / 0.25, 4)).epsilon(1e-15));

        const auto& in = k6_inputs();
        for (double x : {-0.3, 0.0, 0.2, 0.4191447, 0.7}) {
            double expect = 1.0 + 2.0 * std::pow(x, 4) + std::pow(1.53890149 - 2.26425375 * x, 4);
            CHECK(quartic_bound(in, std::vector<double>{x}) == doctest::Approx(expect).epsilon(1e-7));
        }

        QuarticMinimum min = quartic_minimum(in);
        auto tails = tails_from(in);
        double m1 = 1.0 + std::pow((1.0 - in.coeffs[0]) / tails[0], 4);
        CHECK(min.value == doctest::Approx(m1).epsilon(1e-12));
        CHECK(quartic_bound(in, min.x) == doctest::Approx(min.value).epsilon(1e-12));
        // Nearby points are no better.
        for (double d : {-1e-3, 1e-3}) CHECK(quartic_bound(in, std::vector<double>{min.x[0] + d}) > min.value);

        KernelPL k6 = preset_pl("K6");
        MixResult mix = mix_with_constant(pl_fourier_coeff(k6, 0), pl_tail_norm(k6, 1, p43).value, p43);
        CHECK(std::abs(min.value - std::pow(mix.norm, -4.0)) < 1e-9);
        CHECK(tails[0] == doctest::Approx(pl_tail_norm(k6, 1, p43).value).epsilon(1e-12));
    }

    TEST_CASE("sine cap")
    {
        CHECK(std::abs(sin_cap(1.0)) < 1e-15);
        CHECK(std::abs(sin_cap(1e6) - 1.0) < 1e-6);
        CHECK(std::abs(std::sqrt(sin_cap(1.182778)) - 0.4191447) < 1e-6);
        for (double v : {0.1, 0.5, 0.9}) CHECK(sin_cap(sin_cap_inverse(v)) == doctest::Approx(v).epsilon(1e-9));
    }

    TEST_CASE("feasibility threshold")
    {
        Feasibility full = feasibility_threshold(k6_inputs());
        CHECK(full.L >= 1.182778);
        CHECK(full.coefficient >= 0.591389);
        CHECK(full.L < 1.1828);

        QuarticBoundInputs constant{2, {1.0, 0.0}, 0.0};
        CHECK(feasibility_threshold(constant).L == 1.0);

        KernelPL k4 = preset_pl("K4");
        Feasibility simple = feasibility_threshold(quartic_inputs(k4, 1));
        CHECK(std::abs(simple.L - std::pow(pl_norm(k4, p43).value, -4.0)) < 1e-6);
        CHECK(std::abs(simple.L - 2.0 * 0.574575) < 1e-5);

        Feasibility uncapped = feasibility_threshold(k6_inputs(), false);
        CHECK(std::abs(uncapped.L - quartic_minimum(k6_inputs()).value) < 1e-6);
    }

    TEST_CASE("central coefficient floor")
    {
        auto L = central_coefficient_floor();
        REQUIRE(L);
        CHECK(*L >= 1.11);
        CHECK(*L < 1.183);
        CHECK(*L < feasibility_threshold(k6_inputs()).L);
        CHECK(sin_cap(*L) == doctest::Approx(1.0 / 9.0).epsilon(1e-8));
        CHECK_FALSE(central_coefficient_floor(1.0));
    }

    TEST_CASE("symmetric decreasing rearrangement")
    {
        // Indicator of a set of measure 0.3 inside [-1/2, 1/2].
        auto f = sample([](double x) { return (x > 0.1 && x < 0.25) || (x > -0.45 && x < -0.3) ? 1.0 : 0.0; },
                        -0.5, 0.5, 10'000);
        auto g = sdr(f);
        for (std::size_t i = 0; i < g.values.size(); ++i) {
            double x = g.x(i);
            if (std::abs(x) < 0.15 - 2e-4) CHECK(g.values[i] == 1.0);
            if (std::abs(x) > 0.15 + 2e-4) CHECK(g.values[i] == 0.0);
        }
        for (int j = 1; j <= 4; ++j) {
            auto c = sdr(sample([j](double x) { return std::cos(2.0 * pi * j * x); }, -0.5, 0.5, 4000 * j));
            double worst = 0.0;
            for (std::size_t i = 0; i < c.values.size(); ++i)
                worst = std::max(worst, std::abs(c.values[i] - std::cos(2.0 * pi * c.x(i))));
            // j periods repeat every sample value j times: steps j cells wide.
            CHECK(worst < 2.0 * pi * j * c.cell());
        }
        auto bump = sample([](double x) { return std::exp(-x * x); }, -1.0, 1.0, 2001);
        auto same = sdr(bump);
        for (std::size_t i = 0; i < bump.values.size(); ++i) CHECK(same.values[i] == doctest::Approx(bump.values[i]).epsilon(1e-15));

        // Equimeasurable: the multiset of values is unchanged.
        auto wave = sample([](double x) { return std::sin(7.0 * x) + x; }, -1.0, 1.0, 999);
        auto a = wave.values;
        auto b = sdr(wave).values;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
    }

    TEST_CASE("rearrangement bound near one half")
    {
        DeltaHalf half = delta_half_lower(0.5, true);
        CHECK(half.in_range);
        CHECK(half.delta >= 0.14966);
        CHECK(half.sup_floor >= 1.1092 + 0.176158 / 2.0);
        CHECK(std::abs(half.F_numeric - half.F) < 1e-4);
        CHECK(half.b > 2.0);
        CHECK(half.b < 4.0);

        CHECK(delta_half_lower(0.6).sup_floor >= 1.1092 + 0.176158 * 0.6);
        for (int k = 376; k <= 624; ++k) {
            double eps = k / 1000.0;
            CHECK(delta_half_lower(eps).sup_floor >= 1.1092 + 0.176158 * eps);
        }
        DeltaHalf outside = delta_half_lower(0.2);
        CHECK_FALSE(outside.in_range);
        CHECK(outside.delta == doctest::Approx(0.5 * 0.04 * feasibility_threshold(k6_inputs()).L).epsilon(1e-9));
    }

    TEST_CASE("upper bounds from B*[g] sets")
    {
        auto r = search_R(6, 17);
        BoundCertificate c = upper_from_bstar(r.witness);
        CHECK(c.kind == BoundKind::upper);
        CHECK(c.value(11.0 / 17.0) == doctest::Approx(6.0 / 17.0));
        // Delta(eps)/eps^2 increasing to the left, 2-Lipschitz to the right.
        CHECK(c.value(0.3) == doctest::Approx(6.0 / 17.0 * std::pow(0.3 / (11.0 / 17.0), 2)));
        for (double e = 0.65; e < 0.99; e += 0.01) CHECK(c.value(e + 0.01) - c.value(e) <= 2.0 * 0.01 + 1e-12);
        CHECK(c.provenance.size() >= 1);

        BoundCertificate whole = upper_from_bstar(make_bstar_set({1, 2, 3, 4, 5}, 5));
        CHECK(whole.value(1.0) == 1.0);

        BstarSet bad = make_bstar_set({1, 2, 3}, 5);
        bad.g = 1;
        CHECK_THROWS(upper_from_bstar(bad));
        CHECK_THROWS(upper_from_bstar(make_bstar_set({0, 1, 3}, 7, 7)));
    }

    TEST_CASE("upper envelope")
    {
        CHECK(upper_envelope(1.0) == 1.0);
        CHECK(upper_envelope(11.0 / 16.0) == doctest::Approx(0.375).epsilon(1e-15));
        double arc = pi * 1e-4 / std::pow(1.0 + std::sqrt(0.99), 2);
        CHECK(upper_envelope(0.01) == doctest::Approx(arc).epsilon(1e-12));
        CHECK(arc == doctest::Approx(7.896e-5).epsilon(1e-3));
        CHECK(upper_envelope(0.01) < 96.0 / 121.0 * 1e-4);
        for (double e = 0.7; e <= 1.0; e += 0.01) CHECK(upper_envelope(e) == doctest::Approx(2.0 * e - 1.0));
    }

    TEST_CASE("lower envelope")
    {
        CHECK(lower_envelope(1.0) == 1.0);
        CHECK(lower_envelope(0.1) >= 0.591389 * 0.01);
        CHECK(lower_envelope(0.1) < 0.5914 * 0.01);
        CHECK(lower_envelope(0.5) >= 0.14966);
        CHECK(lower_envelope(0.5) < 0.1497);
        CHECK(lower_envelope(0.8) == doctest::Approx(0.6));
    }

    TEST_CASE("envelope consistency on a 1e-3 grid")
    {
        double best_ratio = 0.0;
        for (int k = 1; k <= 1000; ++k) {
            double eps = k / 1000.0;
            double lo = lower_envelope(eps);
            double up = upper_envelope(eps);
            CHECK(lo <= up);
            best_ratio = std::max(best_ratio, lo / (eps * eps));
            CHECK(best_ratio <= up / (eps * eps) + 1e-15);
        }
    }

    TEST_CASE("stored lower certificates never exceed stored upper certificates")
    {
        const auto& store = standard_certificates();
        for (const auto& lo : store.lower)
            for (const auto& up : store.upper)
                for (int k = 1; k < 1000; ++k) {
                    double eps = k / 1000.0;
                    if (lo.covers(eps) && up.covers(eps)) CHECK(lo.value(eps) <= up.value(eps));
                }
    }

    TEST_CASE("certificates round-trip through JSON")
    {
        for (const auto& c : standard_certificates().upper) {
            BoundCertificate back = certificate_from_json(to_json(c));
            CHECK(back.label == c.label);
            CHECK(back.coefficients == c.coefficients);
            for (double e : {0.1, 0.5, 0.69, 0.9})
                if (c.covers(e)) CHECK(back.value(e) == c.value(e));
        }
    }

    TEST_CASE("circle: random modular sets approach Delta = eps^2")
    {
        auto excess = [](std::int64_t n) {
            double total = 0.0;
            for (std::uint64_t seed = 1; seed <= 10; ++seed) {
                RandomConfig config;
                config.seed = seed;
                auto r = random_modular(0.3, n, config);
                double size = static_cast<double>(r.set.size()) / static_cast<double>(n);
                double g = static_cast<double>(r.set.g) / static_cast<double>(n);
                CHECK(g >= size * size);  // circle floor Delta_T(eps) >= eps^2
                total += g / (size * size) - 1.0;
            }
            return total / 10.0;
        };
        double e1 = excess(2001);
        double e2 = excess(20001);
        CHECK(e2 < e1);
        CHECK(e2 < 0.25);
    }
}
