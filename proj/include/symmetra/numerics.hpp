#pragma once

// One-dimensional root finding and minimization, a simplex minimizer,
// double-exponential quadrature and deterministic parallel summation.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace symmetra {

struct Minimum {
    double x;
    double value;
};

/// Golden-section search for a unimodal f on [a, b], stopping when the
/// bracket is shorter than tol.
Minimum golden_section(const std::function<double(double)>& f, double a, double b, double tol);

/// Bisection for the boundary between {pred true} and {pred false} on [lo, hi],
/// assuming pred(lo) is true and pred(hi) false. Returns the last true point.
double bisect_boundary(const std::function<bool(double)>& pred, double lo, double hi, double tol);

struct SimplexConfig {
    std::size_t max_evaluations = 4000;
    double ftol = 1e-13;
    double xtol = 1e-10;
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/// Nelder-Mead with the standard coefficients; initial simplex x0 + step_i e_i.
SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                          std::vector<double> x0, std::span<const double> steps,
                          const SimplexConfig& config = {});

/// Integrand seen by tanh-sinh: the point x together with its distances to
/// the two endpoints, computed without cancellation.
using EndpointIntegrand = std::function<double(double x, double from_lo, double to_hi)>;

struct Quadrature {
    double value;
    double error;  ///< difference between the last two refinement levels
    bool converged;
};

/// Tanh-sinh quadrature on [a, b]; tolerates integrable endpoint singularities.
Quadrature tanh_sinh(const EndpointIntegrand& f, double a, double b, double tol = 1e-12);

inline Quadrature tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol = 1e-12)
{
    return tanh_sinh([&f](double x, double, double) { return f(x); }, a, b, tol);
}

/// Pairwise summation (error grows like log n).
double pairwise_sum(std::span<const double> values);

/// Sum of term(i) for i in [0, count), split into fixed blocks so the
/// rounding pattern does not depend on the thread count.
double deterministic_sum(std::size_t count, const std::function<double(std::size_t)>& term,
                         unsigned threads = 1);

/// Threads requested by the environment (SYMMETRA_THREADS), or fallback.
unsigned threads_from_environment(unsigned fallback = 1);

}  // namespace symmetra
