#include <doctest.h>

#include <random>

#include "symmetra/intervals.hpp"
#include "symmetra/sidon.hpp"

using namespace symmetra;

namespace {

RationalIntervalSet rset(std::initializer_list<std::pair<Rational, Rational>> pairs, Ambient amb = Ambient::line)
{
    std::vector<Interval<Rational>> v;
    for (auto [lo, hi] : pairs) v.push_back({lo, hi});
    return RationalIntervalSet::from_pairs(v, amb);
}

Rational R(std::int64_t p, std::int64_t q = 1) { return Rational(p, q); }

/// Cells of width 1/(2q) inside [0,1): a set with endpoints in (1/q)Z is a union of cells.
std::vector<bool> cells_of(const RationalIntervalSet& a, std::int64_t q)
{
    std::vector<bool> in(static_cast<std::size_t>(2 * q), false);
    for (std::int64_t i = 0; i < 2 * q; ++i) {
        Rational mid(2 * i + 1, 4 * q);
        for (const auto& iv : a.intervals())
            if (iv.lo <= mid && mid < iv.hi) in[static_cast<std::size_t>(i)] = true;
    }
    return in;
}

/// D(A) by counting cell pairs over every centre k/(4q): cell i reflects to cell k-1-i.
Rational grid_oracle(const RationalIntervalSet& a, std::int64_t q)
{
    auto in = cells_of(a, q);
    const std::int64_t m = 2 * q;
    std::int64_t best = 0;
    for (std::int64_t k = 0; k <= 2 * m; ++k) {
        std::int64_t count = 0;
        for (std::int64_t i = 0; i < m; ++i) {
            std::int64_t j = k - 1 - i;
            if (a.ambient() == Ambient::circle) j = ((j % m) + m) % m;
            if (j < 0 || j >= m) continue;
            if (in[static_cast<std::size_t>(i)] && in[static_cast<std::size_t>(j)]) ++count;
        }
        best = std::max(best, count);
    }
    return Rational(best, m);
}

RationalIntervalSet random_set(std::mt19937_64& rng, std::int64_t q, Ambient amb)
{
    std::uniform_int_distribution<std::int64_t> end(0, q);
    std::uniform_int_distribution<int> count(1, 4);
    std::vector<Interval<Rational>> pairs;
    int k = count(rng);
    for (int i = 0; i < k; ++i) {
        auto a = end(rng);
        auto b = end(rng);
        if (a == b) continue;
        pairs.push_back({Rational(std::min(a, b), q), Rational(std::max(a, b), q)});
    }
    if (pairs.empty()) pairs.push_back({Rational(0), Rational(1, q)});
    return RationalIntervalSet::from_pairs(pairs, amb);
}

}  // namespace

TEST_SUITE("intervals")
{
    TEST_CASE("measure of simple sets")
    {
        CHECK(RationalIntervalSet::unit().measure() == R(1));
        CHECK(RationalIntervalSet().measure() == R(0));
        CHECK(rset({{R(0), R(1, 4)}, {R(3, 4), R(1)}}).measure() == R(1, 2));
    }

    TEST_CASE("canonical form merges, sorts and drops empty pieces")
    {
        auto a = rset({{R(1, 2), R(3, 4)}, {R(0), R(1, 4)}, {R(1, 4), R(1, 3)}, {R(2, 3), R(2, 3)}, {R(5, 8), R(7, 8)}});
        REQUIRE(a.size() == 2);
        CHECK(a.intervals()[0] == Interval<Rational>{R(0), R(1, 3)});
        CHECK(a.intervals()[1] == Interval<Rational>{R(1, 2), R(7, 8)});
        std::vector<Interval<Rational>> again(a.intervals().begin(), a.intervals().end());
        CHECK(RationalIntervalSet::from_pairs(again) == a);
    }

    TEST_CASE("circle pieces wrap around zero")
    {
        auto a = rset({{R(3, 4), R(5, 4)}}, Ambient::circle);
        REQUIRE(a.size() == 2);
        CHECK(a.intervals()[0] == Interval<Rational>{R(0), R(1, 4)});
        CHECK(a.intervals()[1] == Interval<Rational>{R(3, 4), R(1)});
        CHECK(rset({{R(-1), R(3)}}, Ambient::circle) == RationalIntervalSet::unit(Ambient::circle));
    }

    TEST_CASE("reflection")
    {
        auto a = rset({{R(0), R(1, 4)}});
        CHECK(a.reflect(R(1, 2)) == rset({{R(3, 4), R(1)}}));
        CHECK(RationalIntervalSet::unit().reflect(R(1, 2)) == RationalIntervalSet::unit());
        CHECK(rset({{R(1, 10), R(2, 10)}}).reflect(R(3, 10)) == rset({{R(4, 10), R(5, 10)}}));
        auto b = rset({{R(1, 7), R(2, 7)}, {R(4, 7), R(1)}});
        CHECK(b.reflect(R(2, 5)).reflect(R(2, 5)) == b);
        CHECK(b.reflect(R(2, 5)).measure() == b.measure());
        // Line reflections leave [0,1); nothing is clipped.
        CHECK(a.reflect(R(0)) == rset({{R(-1, 4), R(0)}}));
    }

    TEST_CASE("boolean operations")
    {
        auto a = rset({{R(0), R(1, 2)}});
        auto b = rset({{R(1, 4), R(1)}});
        CHECK(intersect(a, b) == rset({{R(1, 4), R(1, 2)}}));
        CHECK(symdiff(a, a).empty());
        CHECK(symdiff(a, b) == rset({{R(0), R(1, 4)}, {R(1, 2), R(1)}}));
        CHECK(unite(a, b) == RationalIntervalSet::unit());
        CHECK(difference(b, a) == rset({{R(1, 2), R(1)}}));
        CHECK_THROWS_AS(intersect(a, rset({{R(0), R(1)}}, Ambient::circle)), std::invalid_argument);

        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 200; ++trial) {
            auto s = random_set(rng, 12, Ambient::line);
            auto t = random_set(rng, 12, Ambient::line);
            CHECK(symdiff(s, t).measure() == s.measure() + t.measure() - R(2) * intersect(s, t).measure());
        }
    }

    TEST_CASE("overlap at a centre")
    {
        CHECK(overlap_at(RationalIntervalSet::unit(), R(1, 2)) == R(1));
        CHECK(overlap_at(rset({{R(0), R(1, 2)}}), R(0)) == R(0));
        std::vector<std::int64_t> s{1, 2, 3, 5, 8, 13};
        auto a = from_integer_set(s, 13);
        // 2nc + 1 = 6
        CHECK(overlap_at(a, R(5, 26)) == R(3, 13));
    }

    TEST_CASE("largest symmetric subset")
    {
        auto full = largest_symmetric(RationalIntervalSet::unit());
        CHECK(full.delta == R(1));
        CHECK(full.center == R(1, 2));

        auto ends = largest_symmetric(rset({{R(0), R(1, 4)}, {R(3, 4), R(1)}}));
        CHECK(ends.delta == R(1, 2));
        CHECK(ends.center == R(1, 2));

        std::vector<std::int64_t> s{1, 2, 3, 5, 8, 13};
        auto a = from_integer_set(s, 13);
        auto part = largest_symmetric(a);
        CHECK(part.delta == R(3, 13));
        Rational m = R(26) * part.center + R(1);
        CHECK((m == R(6) || m == R(4) || m == R(16)));
        CHECK(part.delta == grid_oracle(a, 13));

        CHECK_THROWS_AS(largest_symmetric(RationalIntervalSet()), std::invalid_argument);
    }

    TEST_CASE("largest symmetric subset agrees with the cell-count oracle")
    {
        std::mt19937_64 rng(2024);
        for (int trial = 0; trial < 1000; ++trial) {
            const std::int64_t q = 2 + static_cast<std::int64_t>(rng() % 11);
            const Ambient amb = trial % 2 == 0 ? Ambient::line : Ambient::circle;
            auto a = random_set(rng, q, amb);
            auto part = largest_symmetric(a);
            INFO("trial " << trial << " q " << q);
            REQUIRE(part.delta == grid_oracle(a, q));
            CHECK(overlap_at(a, part.center) == part.delta);
        }
    }

    TEST_CASE("binary64 sets agree with exact sets")
    {
        std::mt19937_64 rng(99);
        for (int trial = 0; trial < 200; ++trial) {
            auto a = random_set(rng, 8, trial % 2 ? Ambient::circle : Ambient::line);
            auto exact = largest_symmetric(a);
            auto approx = largest_symmetric(to_floating(a));
            CHECK(approx.delta == doctest::Approx(to_double(exact.delta)).epsilon(1e-14));
        }
    }

    TEST_CASE("from integer set")
    {
        std::vector<std::int64_t> all{1, 2, 3, 4, 5, 6};
        CHECK(from_integer_set(all, 6) == RationalIntervalSet::unit());
        std::vector<std::int64_t> one{1};
        CHECK(from_integer_set(one, 4) == rset({{R(0), R(1, 4)}}));
        std::vector<std::int64_t> s{1, 2, 5};
        CHECK(from_integer_set(s, 5) == rset({{R(0), R(2, 5)}, {R(4, 5), R(1)}}));
        CHECK(from_integer_set(s, 5).measure() == R(3, 5));
        std::vector<std::int64_t> bad{0, 2};
        CHECK_THROWS(from_integer_set(bad, 5));
        std::vector<std::int64_t> big{6};
        CHECK_THROWS(from_integer_set(big, 5));
    }

    TEST_CASE("scaling: D(tA) = t D(A)")
    {
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 200; ++trial) {
            auto a = random_set(rng, 9, Ambient::line);
            Rational t(1 + static_cast<std::int64_t>(rng() % 7), 7);
            CHECK(largest_symmetric(a.scaled(t)).delta == t * largest_symmetric(a).delta);
        }
    }

    TEST_CASE("diamond: |D(S) - D(T)| <= 2 measure(S xor T)")
    {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 300; ++trial) {
            auto s = random_set(rng, 10, Ambient::line);
            auto t = random_set(rng, 10, Ambient::line);
            Rational diff = largest_symmetric(s).delta - largest_symmetric(t).delta;
            if (diff < R(0)) diff = -diff;
            CHECK(diff <= R(2) * symdiff(s, t).measure());
        }
    }

    TEST_CASE("floor bounds at set level")
    {
        std::mt19937_64 rng(13);
        for (int trial = 0; trial < 300; ++trial) {
            auto a = random_set(rng, 10, Ambient::line);
            Rational mu = a.measure();
            Rational d = largest_symmetric(a).delta;
            CHECK(d >= R(2) * mu - R(1));
            CHECK(d >= mu * mu / R(2));

            auto c = random_set(rng, 10, Ambient::circle);
            CHECK(largest_symmetric(c).delta >= c.measure() * c.measure());
        }
    }

    TEST_CASE("D(A(S)) = max_rep(S) / n for every S with n <= 12")
    {
        for (std::int64_t n = 1; n <= 12; ++n)
            for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
                std::vector<std::int64_t> s;
                for (std::int64_t i = 0; i < n; ++i)
                    if (mask >> i & 1u) s.push_back(i + 1);
                REQUIRE(largest_symmetric(from_integer_set(s, n)).delta == Rational(max_rep(s), n));
            }
    }
}
