#pragma once

namespace symmetra {

struct ZetaValue {
    double value;
    double remainder;  ///< bound on the truncation error of the asymptotic series
};

/// Hurwitz zeta sum_{k>=0} (k+a)^{-s} for s > 1, a > 0, with its remainder bound.
ZetaValue hurwitz_zeta_bounded(double s, double a);

inline double hurwitz_zeta(double s, double a) { return hurwitz_zeta_bounded(s, a).value; }

}  // namespace symmetra
