#pragma once

// Autoconvolutions f*f of probability densities on an interval: pointwise
// values, sup norm and squared 2-norm.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace symmetra {

/// Density on [lo, hi]. The pdf receives the point and its distances to both
/// ends so singular endpoints are evaluated without cancellation.
struct DensityModel {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
    std::function<double(double x, double from_lo, double to_hi)> pdf;
    bool unbounded_square = false;  ///< f*f is unbounded at lo + hi
};

/// "indicator" (2 on [-1/4,1/4]), "b" ((4/pi)/sqrt(1-16x^2)), "schinzel" (1/sqrt(2x) on [0,1/2]).
DensityModel density_preset(const std::string& name);

/// Node values of a density on a uniform grid over [lo, hi], linear in between.
struct SampledDensity {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> values;
};

struct AutoconvolutionResult {
    double sup = 0.0;
    double argmax = 0.0;
    double l2sq = 0.0;
    double sup_error = 0.0;
    double l2sq_error = 0.0;
    bool renormalized = false;      ///< input mass differed from 1 by more than 1e-6
    std::vector<double> x;          ///< grid of f*f
    std::vector<double> values;
};

/// f*f(x) by double-exponential quadrature over the overlap of supports.
double autoconvolution_at(const DensityModel& f, double x);

/// Grid of `grid` points over [2 lo, 2 hi]; sup refined around the best node.
AutoconvolutionResult autoconvolution_norms(const DensityModel& f, std::size_t grid = 2001);

/// Trapezoid convolution at step h and 2h, Richardson-combined.
AutoconvolutionResult autoconvolution_norms(const SampledDensity& f);

}  // namespace symmetra
