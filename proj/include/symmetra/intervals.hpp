#pragma once

// Finite unions of half-open intervals on the line or on the circle R/Z,
// with the exact largest-symmetric-subset functional D(A).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "symmetra/rational.hpp"

namespace symmetra {

enum class Ambient { line, circle };

template <class Real>
struct Interval {
    Real lo;
    Real hi;

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Canonical finite union of half-open intervals [lo, hi).
///
/// Line sets may have any finite endpoints (reflections leave [0,1)); circle
/// sets live in [0,1) with wrap-around intervals split at 0. Canonical form
/// keeps intervals sorted, nonempty and separated by gaps of positive length.
template <class Real>
class BasicIntervalSet {
public:
    using value_type = Interval<Real>;

    explicit BasicIntervalSet(Ambient ambient = Ambient::line) : ambient_(ambient) {}

    /// Builds a canonical set from arbitrary (possibly overlapping, unsorted)
    /// pairs. Pairs with lo >= hi are measure zero and dropped, except on the
    /// circle, where a pair spanning length >= 1 is the whole circle.
    static BasicIntervalSet from_pairs(std::vector<value_type> pairs,
                                       Ambient ambient = Ambient::line)
    {
        BasicIntervalSet out(ambient);
        std::vector<value_type> pieces;
        pieces.reserve(pairs.size() + 1);
        for (const auto& p : pairs) {
            if (!(p.lo < p.hi)) continue;
            if (ambient == Ambient::line) {
                pieces.push_back(p);
                continue;
            }
            if (!(p.hi - p.lo < Real(1))) {
                pieces.push_back({Real(0), Real(1)});
                continue;
            }
            Real lo = p.lo - floor_of(p.lo);
            Real hi = lo + (p.hi - p.lo);
            if (hi > Real(1)) {
                pieces.push_back({lo, Real(1)});
                pieces.push_back({Real(0), hi - Real(1)});
            } else {
                pieces.push_back({lo, hi});
            }
        }
        std::sort(pieces.begin(), pieces.end(),
                  [](const value_type& a, const value_type& b) { return a.lo < b.lo; });
        for (const auto& p : pieces) {
            if (!out.items_.empty() && !(out.items_.back().hi < p.lo)) {
                if (out.items_.back().hi < p.hi) out.items_.back().hi = p.hi;
            } else {
                out.items_.push_back(p);
            }
        }
        return out;
    }

    static BasicIntervalSet unit(Ambient ambient = Ambient::line)
    {
        return from_pairs({{Real(0), Real(1)}}, ambient);
    }

    Ambient ambient() const { return ambient_; }
    std::span<const value_type> intervals() const { return items_; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }

    Real measure() const
    {
        Real total(0);
        for (const auto& iv : items_) total += iv.hi - iv.lo;
        return total;
    }

    /// True when every interval lies inside [0,1].
    bool within_unit() const
    {
        return items_.empty() || (!(items_.front().lo < Real(0)) && !(Real(1) < items_.back().hi));
    }

    /// {2c - x : x in A}, on the circle taken modulo 1.
    BasicIntervalSet reflect(const Real& c) const
    {
        std::vector<value_type> pairs;
        pairs.reserve(items_.size());
        const Real twice = c + c;
        for (auto it = items_.rbegin(); it != items_.rend(); ++it)
            pairs.push_back({twice - it->hi, twice - it->lo});
        return from_pairs(std::move(pairs), ambient_);
    }

    /// {t x : x in A} for t > 0 (line only).
    BasicIntervalSet scaled(const Real& t) const
    {
        if (ambient_ != Ambient::line) throw std::invalid_argument("scaling is defined on the line only");
        if (!(Real(0) < t)) throw std::invalid_argument("scale factor must be positive");
        std::vector<value_type> pairs;
        pairs.reserve(items_.size());
        for (const auto& iv : items_) pairs.push_back({iv.lo * t, iv.hi * t});
        return from_pairs(std::move(pairs), ambient_);
    }

    friend bool operator==(const BasicIntervalSet&, const BasicIntervalSet&) = default;

private:
    Ambient ambient_;
    std::vector<value_type> items_;
};

using IntervalSet = BasicIntervalSet<double>;
using RationalIntervalSet = BasicIntervalSet<Rational>;

namespace detail {

template <class Real, class Op>
BasicIntervalSet<Real> combine(const BasicIntervalSet<Real>& a, const BasicIntervalSet<Real>& b, Op op)
{
    if (a.ambient() != b.ambient()) throw std::invalid_argument("interval sets have different ambients");
    std::vector<Real> cuts;
    cuts.reserve(2 * (a.size() + b.size()));
    for (const auto& iv : a.intervals()) { cuts.push_back(iv.lo); cuts.push_back(iv.hi); }
    for (const auto& iv : b.intervals()) { cuts.push_back(iv.lo); cuts.push_back(iv.hi); }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<Interval<Real>> out;
    std::size_t ia = 0;
    std::size_t ib = 0;
    auto ra = a.intervals();
    auto rb = b.intervals();
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const Real& lo = cuts[k];
        while (ia < ra.size() && !(lo < ra[ia].hi)) ++ia;
        while (ib < rb.size() && !(lo < rb[ib].hi)) ++ib;
        bool in_a = ia < ra.size() && !(lo < ra[ia].lo);
        bool in_b = ib < rb.size() && !(lo < rb[ib].lo);
        if (op(in_a, in_b)) out.push_back({lo, cuts[k + 1]});
    }
    return BasicIntervalSet<Real>::from_pairs(std::move(out), a.ambient());
}

}  // namespace detail

template <class Real>
BasicIntervalSet<Real> intersect(const BasicIntervalSet<Real>& a, const BasicIntervalSet<Real>& b)
{
    return detail::combine(a, b, [](bool x, bool y) { return x && y; });
}

template <class Real>
BasicIntervalSet<Real> unite(const BasicIntervalSet<Real>& a, const BasicIntervalSet<Real>& b)
{
    return detail::combine(a, b, [](bool x, bool y) { return x || y; });
}

template <class Real>
BasicIntervalSet<Real> difference(const BasicIntervalSet<Real>& a, const BasicIntervalSet<Real>& b)
{
    return detail::combine(a, b, [](bool x, bool y) { return x && !y; });
}

/// Symmetric difference (S \ T) u (T \ S).
template <class Real>
BasicIntervalSet<Real> symdiff(const BasicIntervalSet<Real>& a, const BasicIntervalSet<Real>& b)
{
    return detail::combine(a, b, [](bool x, bool y) { return x != y; });
}

/// Measure of A n B without materializing it.
template <class Real>
Real intersection_measure(std::span<const Interval<Real>> a, std::span<const Interval<Real>> b)
{
    Real total(0);
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        const Real& lo = a[i].lo < b[j].lo ? b[j].lo : a[i].lo;
        const Real& hi = a[i].hi < b[j].hi ? a[i].hi : b[j].hi;
        if (lo < hi) total += hi - lo;
        if (a[i].hi < b[j].hi) ++i; else ++j;
    }
    return total;
}

/// lambda(A n (2c - A)): the largest symmetric subset of A centred at c.
template <class Real>
Real overlap_at(const BasicIntervalSet<Real>& a, const Real& c)
{
    auto mirrored = a.reflect(c);
    return intersection_measure<Real>(a.intervals(), mirrored.intervals());
}

template <class Real>
struct SymmetricPart {
    Real delta;   ///< D(A)
    Real center;  ///< a centre attaining it (smallest such candidate)
};

/// D(A) = max_c overlap_at(A, c).
///
/// c -> overlap_at(A, c) is continuous and piecewise linear with kinks only
/// where an endpoint of 2c - A meets an endpoint of A, i.e. 2c = e_i + e_j.
/// Its maximum is therefore attained at one of those midpoints. On the
/// circle only 2c mod 1 matters, so each candidate is reduced into [0, 1/2).
template <class Real>
SymmetricPart<Real> largest_symmetric(const BasicIntervalSet<Real>& a)
{
    if (a.empty()) throw std::invalid_argument("largest_symmetric: empty set");
    std::vector<Real> ends;
    ends.reserve(2 * a.size());
    for (const auto& iv : a.intervals()) { ends.push_back(iv.lo); ends.push_back(iv.hi); }

    std::vector<Real> sums;
    sums.reserve(ends.size() * (ends.size() + 1) / 2);
    for (std::size_t i = 0; i < ends.size(); ++i)
        for (std::size_t j = i; j < ends.size(); ++j) {
            Real s = ends[i] + ends[j];
            if (a.ambient() == Ambient::circle) s -= floor_of(s);
            sums.push_back(s);
        }
    std::sort(sums.begin(), sums.end());
    sums.erase(std::unique(sums.begin(), sums.end()), sums.end());

    std::optional<SymmetricPart<Real>> best;
    for (const auto& s : sums) {
        Real c = s / Real(2);
        Real value = overlap_at(a, c);
        if (!best || best->delta < value) best = SymmetricPart<Real>{value, c};
    }
    return *best;
}

/// A(S) = union over s in S of [(s-1)/n, s/n), with exact endpoints.
inline RationalIntervalSet from_integer_set(std::span<const std::int64_t> elements, std::int64_t n)
{
    if (n < 1) throw std::invalid_argument("from_integer_set: n must be positive");
    std::vector<Interval<Rational>> pairs;
    pairs.reserve(elements.size());
    for (auto s : elements) {
        if (s < 1 || s > n) throw std::out_of_range("from_integer_set: element outside {1,...,n}");
        pairs.push_back({Rational(s - 1, n), Rational(s, n)});
    }
    return RationalIntervalSet::from_pairs(std::move(pairs), Ambient::line);
}

/// Converts exact endpoints to binary64.
inline IntervalSet to_floating(const RationalIntervalSet& a)
{
    std::vector<Interval<double>> pairs;
    for (const auto& iv : a.intervals()) pairs.push_back({to_double(iv.lo), to_double(iv.hi)});
    return IntervalSet::from_pairs(std::move(pairs), a.ambient());
}

}  // namespace symmetra
