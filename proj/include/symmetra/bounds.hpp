#pragma once

// Lower and upper bounds on Delta(eps) and their assembly into envelopes.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "symmetra/certificate.hpp"
#include "symmetra/kernels.hpp"
#include "symmetra/sidon.hpp"

namespace symmetra {

/// max(eps^2 / 2, 2 eps - 1).
double trivial_lower(double eps);

/// 1/2 ||Khat||_{4/3}^{-4}: Delta(eps) >= coeff eps^2.
double simple_lower_coefficient(double norm43);
double simple_lower_from_kernel(const KernelPL& k, unsigned threads = 1);
double simple_lower_from_kernel(const KernelStep& k, unsigned threads = 1);

/// Khat(0..m-1) and the 4/3-tail from m.
struct QuarticBoundInputs {
    int m = 1;
    std::vector<double> coeffs;
    double tail = 0.0;
};

QuarticBoundInputs quartic_inputs(const KernelPL& k, int m, unsigned threads = 1);

/// 1 + ((1 - Khat(0) - 2 sum_j Khat(j) x_j) / tail)^4 + 2 sum_j x_j^4, j = 1..m-1.
double quartic_bound(const QuarticBoundInputs& in, std::span<const double> x);

struct QuarticMinimum {
    std::vector<double> x;  ///< x_1..x_{m-1}
    double value;           ///< equals 1 + ((1 - Khat(0)) / tail_1)^4
};

/// Closed-form unconstrained minimizer of quartic_bound.
QuarticMinimum quartic_minimum(const QuarticBoundInputs& in);

/// The 4/3-tails from 1..m recovered from the coefficients and the tail from m.
std::vector<double> tails_from(const QuarticBoundInputs& in);

/// (L/pi) sin(pi/L): cap on |fhat(j)|^2 when ||f*f||_inf = L.
double sin_cap(double L);

struct Feasibility {
    double L;            ///< ||f*f||_inf >= L
    double coefficient;  ///< L / 2: Delta(eps) >= coefficient eps^2
    std::vector<double> x;  ///< minimizer of the quartic at L
};

/// Largest L for which min over |x_j| <= sqrt(cap(L)) of the quartic exceeds L.
/// Without the cap the x_j range over [-1, 1].
Feasibility feasibility_threshold(const QuarticBoundInputs& in, bool use_sine_cap = true, double tol = 1e-7);

/// Minimal L with value^2 <= cap(L); empty when value >= 1 (no constraint).
std::optional<double> central_coefficient_floor(double cap_value = 1.0 / 3.0);

/// Cell-centred samples of a function on [lo, hi].
struct SampledFunction {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> values;

    double cell() const { return (hi - lo) / static_cast<double>(values.size()); }
    double x(std::size_t i) const { return lo + (static_cast<double>(i) + 0.5) * cell(); }
};

SampledFunction sample(const std::function<double(double)>& f, double lo, double hi, std::size_t cells);

/// Symmetric decreasing rearrangement about the midpoint of the interval.
SampledFunction sdr(const SampledFunction& f);

/// Integral of a symmetric decreasing sampled function over the centred window of width w.
double central_integral(const SampledFunction& symmetric_decreasing, double width);

struct DeltaHalf {
    bool in_range = false;    ///< 3/8 < eps < 5/8
    double F = 0.0;           ///< lower bound on max(Re fhat(1), -Re fhat(2))
    double F_numeric = 0.0;   ///< same, by optimizing b against the rearranged L_b
    double b = 0.0;           ///< the maximizing b of the numeric cross-check
    double sup_floor = 0.0;   ///< ||f*f||_inf lower bound
    double delta = 0.0;       ///< 1/2 eps^2 sup_floor
};

/// Closed-form F(eps) of the rearrangement argument.
double rearrangement_F(double eps);

/// F(eps) by maximizing over b in (2,4) the rearrangement bound, with a sampled sdr.
double rearrangement_F_numeric(double eps, double* best_b = nullptr, std::size_t cells = 200'000);

/// The inverse of sin_cap on [1, inf).
double sin_cap_inverse(double value, double tol = 1e-12);

/// Outside (3/8, 5/8) the result falls back to the full quadratic bound.
/// The sampled cross-check (F_numeric, b) is filled only on request.
DeltaHalf delta_half_lower(double eps, bool cross_check = false);

/// Delta(|S|/n) <= g/n from a verified line B*[g] set.
BoundCertificate upper_from_bstar(const BstarSet& w);

/// The certificates behind the envelopes, recomputed from the K6 pipeline.
struct CertificateStore {
    std::vector<BoundCertificate> lower;
    std::vector<BoundCertificate> upper;

    void add(BoundCertificate c);
    double lower_at(double eps) const;
    double upper_at(double eps) const;
};

/// Built once per process.
const CertificateStore& standard_certificates();

/// Published floor for the full-bound coefficient; recomputed values must not drop below it.
inline constexpr double full_bound_coefficient_floor = 0.591389;

double lower_envelope(double eps);
double upper_envelope(double eps);

}  // namespace symmetra
