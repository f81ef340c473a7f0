#include "symmetra/autoconvolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "symmetra/errors.hpp"
#include "symmetra/numerics.hpp"

namespace symmetra {

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

DensityModel density_preset(const std::string& name)
{
    if (name == "indicator")
        return {"indicator", -0.25, 0.25, [](double, double, double) { return 2.0; }, false};
    if (name == "b") {
        // 1 - 16x^2 = 16 (x + 1/4)(1/4 - x).
        auto pdf = [](double, double from_lo, double to_hi) {
            return 1.0 / (pi * std::sqrt(from_lo) * std::sqrt(to_hi));
        };
        return {"b", -0.25, 0.25, pdf, true};
    }
    if (name == "schinzel")
        return {"schinzel", 0.0, 0.5, [](double, double from_lo, double) { return 1.0 / std::sqrt(2.0 * from_lo); },
                false};
    throw std::invalid_argument("unknown density '" + name + "' (indicator, b, schinzel)");
}

namespace {

/// f*f at x = lo + hi + offset.
double convolve_offset(const DensityModel& f, double offset, double scale, double* error, double tol = 1e-13)
{
    const double x = f.lo + f.hi + offset;
    const double A = std::max(f.lo, x - f.hi);
    const double B = std::min(f.hi, x - f.lo);
    if (!(A < B)) {
        if (error) *error = 0.0;
        return 0.0;
    }
    // Gaps between the support ends of f(t) and f(x - t) are formed from the
    // offset so that nearly coincident singularities keep their separation.
    const bool a_is_lo = offset <= 0.0;  // otherwise A == x - hi
    const bool b_is_hi = offset >= 0.0;  // otherwise B == x - lo
    auto integrand = [&](double t, double dlo, double dhi) {
        double t_from_lo = a_is_lo ? dlo : offset + dlo;
        double t_to_hi = b_is_hi ? dhi : dhi - offset;
        double s_from_lo = b_is_hi ? offset + dhi : dhi;
        double s_to_hi = a_is_lo ? dlo - offset : dlo;
        return f.pdf(t, t_from_lo, t_to_hi) * f.pdf(x - t, s_from_lo, s_to_hi);
    };
    Quadrature q = tanh_sinh(integrand, A, B, tol);
    if (error) *error = q.error * scale * scale;
    return q.value * scale * scale;
}

double convolve_at(const DensityModel& f, double x, double scale, double* error)
{
    return convolve_offset(f, x - (f.lo + f.hi), scale, error);
}

double density_mass(const DensityModel& f)
{
    return tanh_sinh([&](double x, double dlo, double dhi) { return f.pdf(x, dlo, dhi); }, f.lo, f.hi, 1e-13).value;
}

}  // namespace

double autoconvolution_at(const DensityModel& f, double x)
{
    double mass = density_mass(f);
    return convolve_at(f, x, 1.0 / mass, nullptr);
}

AutoconvolutionResult autoconvolution_norms(const DensityModel& f, std::size_t grid)
{
    if (grid < 3) throw std::invalid_argument("autoconvolution_norms: grid needs at least 3 points");
    if (!(f.lo < f.hi)) throw std::invalid_argument("autoconvolution_norms: empty support");
    AutoconvolutionResult out;
    double mass = density_mass(f);
    if (!(mass > 0.0) || !std::isfinite(mass)) throw ComputationError("autoconvolution_norms: density has no mass");
    out.renormalized = std::abs(mass - 1.0) > 1e-6;
    const double scale = 1.0 / mass;

    const double a = 2.0 * f.lo;
    const double b = 2.0 * f.hi;
    const double centre = f.lo + f.hi;
    out.x.resize(grid);
    out.values.resize(grid);
    std::size_t best = 0;
    for (std::size_t k = 0; k < grid; ++k) {
        double x = a + (b - a) * static_cast<double>(k) / static_cast<double>(grid - 1);
        out.x[k] = x;
        if (f.unbounded_square && x == centre) {
            out.values[k] = std::numeric_limits<double>::infinity();
        } else {
            double err = 0.0;
            out.values[k] = convolve_at(f, x, scale, &err);
            out.sup_error = std::max(out.sup_error, err);
        }
        if (out.values[k] > out.values[best]) best = k;
    }

    if (f.unbounded_square) {
        out.sup = std::numeric_limits<double>::infinity();
        out.argmax = centre;
    } else {
        // Refine between the neighbours of the best node.
        double h = (b - a) / static_cast<double>(grid - 1);
        double lo = std::max(a, out.x[best] - h);
        double hi = std::min(b, out.x[best] + h);
        Minimum m = golden_section([&](double x) { return -convolve_at(f, x, scale, nullptr); }, lo, hi, 1e-10);
        out.sup = std::max(out.values[best], -m.value);
        out.argmax = -m.value > out.values[best] ? m.x : out.x[best];
    }

    // f*f is smooth away from the centre; integrate its square on both halves.
    auto square_left = [&](double, double, double to_centre) {
        double v = convolve_offset(f, -to_centre, scale, nullptr, 1e-10);
        return v * v;
    };
    auto square_right = [&](double, double from_centre, double) {
        double v = convolve_offset(f, from_centre, scale, nullptr, 1e-10);
        return v * v;
    };
    Quadrature left = tanh_sinh(square_left, a, centre, 1e-8);
    Quadrature right = tanh_sinh(square_right, centre, b, 1e-8);
    out.l2sq = left.value + right.value;
    out.l2sq_error = left.error + right.error;
    if (!left.converged || !right.converged) {
        if (out.l2sq_error > 1e-4 * std::max(1.0, out.l2sq))
            throw ComputationError("autoconvolution_norms: squared 2-norm quadrature did not converge");
    }
    return out;
}

AutoconvolutionResult autoconvolution_norms(const SampledDensity& f)
{
    const std::size_t n = f.values.size();
    if (n < 5 || (n - 1) % 2 != 0)
        throw std::invalid_argument("sampled density needs an odd number (>= 5) of nodes");
    if (!(f.lo < f.hi)) throw std::invalid_argument("sampled density: empty support");
    for (double v : f.values)
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("sampled density must be finite and nonnegative");

    const std::size_t N = n - 1;
    const double h = (f.hi - f.lo) / static_cast<double>(N);
    std::vector<double> w(n, 1.0);
    w.front() = w.back() = 0.5;
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) mass += h * w[i] * f.values[i];
    if (!(mass > 0.0)) throw ComputationError("sampled density has no mass");

    AutoconvolutionResult out;
    out.renormalized = std::abs(mass - 1.0) > 1e-6;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = f.values[i] / mass;

    // Trapezoid over the overlap {max(0,k-N) .. min(N,k)} with step `stride`.
    auto trapezoid = [&](std::size_t k, std::size_t stride) {
        std::size_t i0 = k > N ? k - N : 0;
        std::size_t i1 = std::min(N, k);
        if (i0 == i1) return 0.0;
        double sum = 0.0;
        for (std::size_t i = i0; i <= i1; i += stride) {
            double weight = (i == i0 || i == i1) ? 0.5 : 1.0;
            sum += weight * v[i] * v[k - i];
        }
        return sum * h * static_cast<double>(stride);
    };

    // Richardson on even k, where both steps see the same overlap endpoints.
    const std::size_t points = N + 1;  // k = 0, 2, ..., 2N
    out.x.resize(points);
    out.values.resize(points);
    for (std::size_t e = 0; e < points; ++e) {
        std::size_t k = 2 * e;
        double fine = trapezoid(k, 1);
        std::size_t i0 = k > N ? k - N : 0;
        double coarse = (i0 % 2 == 0) ? trapezoid(k, 2) : fine;
        double value = (4.0 * fine - coarse) / 3.0;
        out.x[e] = 2.0 * f.lo + static_cast<double>(k) * h;
        out.values[e] = value;
        out.sup_error = std::max(out.sup_error, std::abs(fine - coarse) / 3.0);
    }
    auto it = std::max_element(out.values.begin(), out.values.end());
    out.sup = *it;
    out.argmax = out.x[static_cast<std::size_t>(it - out.values.begin())];

    // Squared 2-norm: trapezoid on step 2h and 4h, Richardson-combined.
    auto l2_trapezoid = [&](std::size_t stride) {
        double sum = 0.0;
        for (std::size_t e = 0; e < points; e += stride) {
            double weight = (e == 0 || e + stride >= points) ? 0.5 : 1.0;
            sum += weight * out.values[e] * out.values[e];
        }
        return sum * 2.0 * h * static_cast<double>(stride);
    };
    double fine = l2_trapezoid(1);
    double coarse = (points - 1) % 2 == 0 ? l2_trapezoid(2) : fine;
    out.l2sq = (4.0 * fine - coarse) / 3.0;
    out.l2sq_error = std::abs(fine - coarse) / 3.0;
    return out;
}

}  // namespace symmetra
