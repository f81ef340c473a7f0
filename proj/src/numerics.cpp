#include "symmetra/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

namespace symmetra {

Minimum golden_section(const std::function<double(double)>& f, double a, double b, double tol)
{
    if (b < a) std::swap(a, b);
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - r * (b - a);
    double x2 = a + r * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    Minimum best = f1 <= f2 ? Minimum{x1, f1} : Minimum{x2, f2};
    // The endpoints are never probed by the interior points.
    for (double x : {a, b}) {
        double v = f(x);
        if (v < best.value) best = {x, v};
    }
    return best;
}

double bisect_boundary(const std::function<bool(double)>& pred, double lo, double hi, double tol)
{
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (pred(mid)) lo = mid;
        else hi = mid;
    }
    return lo;
}

SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                          std::vector<double> x0, std::span<const double> steps,
                          const SimplexConfig& config)
{
    const std::size_t dim = x0.size();
    if (steps.size() != dim) throw std::invalid_argument("nelder_mead: step vector has the wrong size");
    std::vector<std::vector<double>> pts(dim + 1, x0);
    for (std::size_t i = 0; i < dim; ++i) pts[i + 1][i] += steps[i];
    std::vector<double> vals(dim + 1);
    SimplexResult out;
    auto eval = [&](const std::vector<double>& x) {
        ++out.evaluations;
        return f(x);
    };
    for (std::size_t i = 0; i <= dim; ++i) vals[i] = eval(pts[i]);

    std::vector<std::size_t> order(dim + 1);
    auto point_along = [&](const std::vector<double>& centroid, const std::vector<double>& worst, double t) {
        std::vector<double> x(dim);
        for (std::size_t k = 0; k < dim; ++k) x[k] = centroid[k] + t * (worst[k] - centroid[k]);
        return x;
    };

    while (out.evaluations < config.max_evaluations) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return vals[i] < vals[j]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[dim - (dim > 0 ? 1 : 0)];

        double spread = 0.0;
        for (std::size_t i = 0; i <= dim; ++i)
            for (std::size_t k = 0; k < dim; ++k) spread = std::max(spread, std::abs(pts[i][k] - pts[best][k]));
        if (std::abs(vals[worst] - vals[best]) <= config.ftol * (1.0 + std::abs(vals[best])) &&
            spread <= config.xtol) {
            out.converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += pts[i][k] / static_cast<double>(dim);
        }

        auto reflected = point_along(centroid, pts[worst], -1.0);
        double fr = eval(reflected);
        if (fr < vals[best]) {
            auto expanded = point_along(centroid, pts[worst], -2.0);
            double fe = eval(expanded);
            if (fe < fr) { pts[worst] = expanded; vals[worst] = fe; }
            else { pts[worst] = reflected; vals[worst] = fr; }
            continue;
        }
        if (fr < vals[second]) {
            pts[worst] = reflected;
            vals[worst] = fr;
            continue;
        }
        bool outside = fr < vals[worst];
        auto contracted = point_along(centroid, pts[worst], outside ? -0.5 : 0.5);
        double fc = eval(contracted);
        if (fc < (outside ? fr : vals[worst])) {
            pts[worst] = contracted;
            vals[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == best) continue;
            for (std::size_t k = 0; k < dim; ++k) pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
            vals[i] = eval(pts[i]);
        }
    }

    std::size_t best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    out.x = pts[best];
    out.value = vals[best];
    return out;
}

Quadrature tanh_sinh(const EndpointIntegrand& f, double a, double b, double tol)
{
    if (!(a < b)) return {0.0, 0.0, true};
    const double half = 0.5 * (b - a);
    constexpr double pi_2 = std::numbers::pi / 2.0;
    constexpr double t_max = 6.5;

    // Node at t: x = mid + half * tanh(pi/2 sinh t). Distances to the ends are
    // half * (1 -+ tanh), written via exp to avoid cancellation near +-1.
    auto contribution = [&](double t) {
        double u = pi_2 * std::sinh(t);
        double e = std::exp(-2.0 * std::abs(u));
        double one_minus = 2.0 * e / (1.0 + e);  // 1 - tanh|u|
        double weight = pi_2 * std::cosh(t) * 4.0 * e / ((1.0 + e) * (1.0 + e));  // pi/2 cosh t sech^2 u
        if (weight == 0.0) return 0.0;
        double near = half * one_minus;
        double far = half * (2.0 - one_minus);
        double x, lo_gap, hi_gap;
        if (u < 0) { lo_gap = near; hi_gap = far; x = a + near; }
        else { lo_gap = far; hi_gap = near; x = b - near; }
        // Nodes this close to an end carry no weight, but products of
        // singular factors could overflow there.
        if (near < 1e-200 * half) return 0.0;
        return weight * f(x, lo_gap, hi_gap);
    };

    double h = 1.0;
    double sum = contribution(0.0);
    for (double t = h; t <= t_max; t += h) sum += contribution(t) + contribution(-t);
    double estimate = half * h * sum;
    double previous = estimate;
    for (int level = 1; level <= 12; ++level) {
        h *= 0.5;
        double added = 0.0;
        for (double t = h; t <= t_max; t += 2.0 * h) added += contribution(t) + contribution(-t);
        sum += added;
        estimate = half * h * sum;
        double err = std::abs(estimate - previous);
        if (level >= 3 && err <= tol * std::max(1.0, std::abs(estimate))) return {estimate, err, true};
        previous = estimate;
    }
    return {estimate, std::abs(estimate - previous), false};
}

double pairwise_sum(std::span<const double> values)
{
    if (values.size() <= 16) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double deterministic_sum(std::size_t count, const std::function<double(std::size_t)>& term, unsigned threads)
{
    constexpr std::size_t block = 1024;
    const std::size_t n_blocks = (count + block - 1) / block;
    std::vector<double> partial(n_blocks, 0.0);
    auto run_block = [&](std::size_t b) {
        std::size_t lo = b * block;
        std::size_t hi = std::min(count, lo + block);
        std::vector<double> vals(hi - lo);
        for (std::size_t i = lo; i < hi; ++i) vals[i - lo] = term(i);
        partial[b] = pairwise_sum(vals);
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n_blocks, 1))));
    if (threads == 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t b = t; b < n_blocks; b += threads) run_block(b);
            });
    }
    return pairwise_sum(partial);
}

unsigned threads_from_environment(unsigned fallback)
{
    const char* env = std::getenv("SYMMETRA_THREADS");
    if (!env || !*env) return fallback;
    try {
        int v = std::stoi(env);
        return v > 0 ? static_cast<unsigned>(v) : fallback;
    } catch (const std::exception&) {
        return fallback;
    }
}

}  // namespace symmetra
