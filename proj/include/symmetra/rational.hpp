#pragma once

#include <cmath>
#include <cstdint>

#include <boost/rational.hpp>

namespace symmetra {

/// Exact endpoint type for sets built from integer blocks.
using Rational = boost::rational<std::int64_t>;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return boost::rational_cast<double>(x); }

inline double floor_of(double x) { return std::floor(x); }
inline Rational floor_of(const Rational& x)
{
    auto n = x.numerator();
    auto d = x.denominator();  // always positive
    auto q = n / d;
    if (n % d != 0 && n < 0) --q;
    return Rational(q);
}

}  // namespace symmetra
