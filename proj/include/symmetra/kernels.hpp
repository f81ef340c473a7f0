#pragma once

// Even kernels on the circle equal to 1 on [-1/4, 1/4]: exact Fourier
// coefficients, l^p tail norms of the coefficient sequence, closed-form
// families and constant mixing.

#include <cstdint>
#include <string>
#include <vector>

namespace symmetra {

/// Continuous piecewise linear kernel with corners (x_t, y_t), x_t = 1/4 + t/(4T).
struct KernelPL {
    std::int64_t T = 0;
    std::vector<double> y;  ///< y_0 .. y_T, y_0 == 1

    double operator()(double x) const;
    friend bool operator==(const KernelPL&, const KernelPL&) = default;
};

/// Validates T >= 1 and y_0 == 1.
KernelPL make_kernel_pl(std::vector<double> y);

/// Step kernel: levels[i] on (1/4 + i/Q, 1/4 + (i+1)/Q], i < Q/4.
struct KernelStep {
    std::int64_t Q = 0;
    std::vector<double> levels;

    double operator()(double x) const;
    friend bool operator==(const KernelStep&, const KernelStep&) = default;
};

KernelStep make_kernel_step(std::int64_t Q, std::vector<double> levels);

/// Shapes on (1/4, 1/2]; every family equals 1 on [0, 1/4].
enum class Family {
    two_level,    ///< {v}: constant v
    quartic,      ///< {alpha}: 1 - alpha + alpha (40 (2x-1)^4 - 3/2)
    arctan_mix,   ///< {c, e1, e2, e3}: c + (1 - c) * arctan shape below
    power,        ///< {d1, d2}: 1 - (1 - (4 (1/2 - x))^d1)^d2
    arctan,       ///< {e1, e2, e3}: ((2/pi) atan((1-2x)^e1 / (4x-1)^e2))^e3
};

struct ClosedFormKernel {
    Family family;
    std::vector<double> params;

    double operator()(double x) const;
};

/// Throws std::invalid_argument when the parameters are outside the family.
void validate(const ClosedFormKernel& k);

std::string family_name(Family f);
Family family_from_name(const std::string& name);
std::size_t family_arity(Family f);

/// Corners at x_t = 1/4 + t/(4T) with y_t = F(x_t) and y_0 = 1.
KernelPL sample_closed_form(const ClosedFormKernel& f, std::int64_t T);

// ---------------------------------------------------------------------------
// Piecewise linear coefficients. C(j) = pi^2 j^2 / (2T) * Khat(j) has period 4T.

/// C(j) by the defining finite sum.
double pl_c_value(const KernelPL& k, std::int64_t j);

/// C(0), ..., C(4T-1) in one transform.
std::vector<double> pl_c_period(const KernelPL& k);

/// Khat(j); Khat(0) by exact integration of the trapezoids.
double pl_fourier_coeff(const KernelPL& k, std::int64_t j);

struct NormValue {
    double value = 0.0;
    double error = 0.0;  ///< floating-point allowance plus zeta remainders
};

/// (sum_{|j| >= m} |Khat(j)|^p)^{1/p}, m >= 1.
NormValue pl_tail_norm(const KernelPL& k, std::int64_t m, double p, unsigned threads = 1);

/// Same, reusing a precomputed period of C.
NormValue pl_tail_norm(const KernelPL& k, const std::vector<double>& c_period, std::int64_t m, double p,
                       unsigned threads = 1);

/// Full ||Khat||_p, including j = 0.
NormValue pl_norm(const KernelPL& k, double p, unsigned threads = 1);

// ---------------------------------------------------------------------------
// Step coefficients. S(j) = pi j Khat(j) has period Q.

double step_s_value(const KernelStep& k, std::int64_t j);
double step_fourier_coeff(const KernelStep& k, std::int64_t j);
NormValue step_tail_norm(const KernelStep& k, std::int64_t m, double p, unsigned threads = 1);
NormValue step_norm(const KernelStep& k, double p, unsigned threads = 1);

// ---------------------------------------------------------------------------

struct MixResult {
    double alpha;  ///< weight of the constant 1
    double norm;   ///< ||(alpha + (1-alpha) K)^||_p
    double M;      ///< 1 - Khat(0)
    double N;      ///< tail-from-1 norm to the power p
};

/// Optimal mix of a kernel with the constant 1, from Khat(0) and the tail from 1.
MixResult mix_with_constant(double k0, double tail1, double p);

/// alpha + (1 - alpha) K, which stays in the same space.
KernelPL mixed(const KernelPL& k, double alpha);
KernelStep mixed(const KernelStep& k, double alpha);

/// Kernels and densities with the published parameters: K1..K6.
ClosedFormKernel preset_family(const std::string& name);  // K1, K2, K3, K5
KernelPL preset_pl(const std::string& name, std::int64_t T = 10'000);  // K4, K6

/// Value of the optimal two-level step bound, 1 + pi^4 / (8 (2^{4/3}-1)^3 zeta(4/3)^3).
double two_level_step_bound();

/// The level v of the optimal two-level step kernel.
double two_level_step_optimum();

}  // namespace symmetra
