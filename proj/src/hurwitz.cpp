#include "symmetra/hurwitz.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace symmetra {

namespace {

// B_{2k} / (2k)! for k = 1..9; the last entry only feeds the remainder bound.
constexpr std::array<double, 9> bernoulli_over_factorial = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
};

}  // namespace

ZetaValue hurwitz_zeta_bounded(double s, double a)
{
    if (!(s > 1.0) || !std::isfinite(s)) throw std::domain_error("hurwitz_zeta: need s > 1");
    if (!(a > 0.0) || !std::isfinite(a)) throw std::domain_error("hurwitz_zeta: need a > 0");

    // Shift a past a threshold that keeps the Euler-Maclaurin terms shrinking.
    const double threshold = 10.0 + s;
    double head = 0.0;
    double b = a;
    while (b < threshold) {
        head += std::pow(b, -s);
        b += 1.0;
    }

    double tail = std::pow(b, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(b, -s);
    // Term k: B_{2k}/(2k)! * s(s+1)...(s+2k-2) * b^{-s-2k+1}.
    double rising = s;
    double power = std::pow(b, -s - 1.0);
    const double inv_b2 = 1.0 / (b * b);
    double remainder = 0.0;
    for (std::size_t k = 0; k < bernoulli_over_factorial.size(); ++k) {
        double term = bernoulli_over_factorial[k] * rising * power;
        if (k + 1 == bernoulli_over_factorial.size()) {
            remainder = std::abs(term);
            break;
        }
        tail += term;
        double m = 2.0 * static_cast<double>(k) + 1.0;
        rising *= (s + m) * (s + m + 1.0);
        power *= inv_b2;
    }
    return {head + tail, remainder};
}

}  // namespace symmetra
