#include "symmetra/kernel_optimize.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>
#include <stdexcept>

#include "symmetra/bounds.hpp"
#include "symmetra/hurwitz.hpp"
#include "symmetra/numerics.hpp"

namespace symmetra {

namespace {

constexpr double pi = std::numbers::pi;

/// ||Khat||_p^p = |k0|^p + sum_j w_j |r_j|^p where k0 and every r_j are affine
/// in the free coordinates. Each coordinate moves (k0, r) along a fixed direction.
class LinearObjective {
public:
    LinearObjective(double p, double k0, std::vector<double> r, std::vector<double> w)
        : p_(p), k0_(k0), r_(std::move(r)), w_(std::move(w)) {}

    double value() const { return along(0.0, 0.0, {}); }

    double along(double step, double dk0, std::span<const double> dr) const
    {
        double total = std::pow(std::abs(k0_ + step * dk0), p_);
        if (dr.empty()) {
            for (std::size_t j = 0; j < r_.size(); ++j) total += w_[j] * std::pow(std::abs(r_[j]), p_);
        } else {
            for (std::size_t j = 0; j < r_.size(); ++j)
                total += w_[j] * std::pow(std::abs(r_[j] + step * dr[j]), p_);
        }
        return total;
    }

    void move(double step, double dk0, std::span<const double> dr)
    {
        k0_ += step * dk0;
        for (std::size_t j = 0; j < r_.size(); ++j) r_[j] += step * dr[j];
    }

    std::size_t size() const { return r_.size(); }

private:
    double p_;
    double k0_;
    std::vector<double> r_;
    std::vector<double> w_;
};

struct DescentOutcome {
    int sweeps = 0;
    bool converged = false;
};

/// Cyclic coordinate descent with a golden-section line search per coordinate.
template <class Direction>
DescentOutcome coordinate_descent(LinearObjective& obj, std::vector<double>& coords, Direction direction,
                                  const OptimizeConfig& config)
{
    DescentOutcome out;
    std::vector<double> dr(obj.size());
    double current = obj.value();
    for (int sweep = 1; sweep <= config.max_sweeps; ++sweep) {
        double before = current;
        for (std::size_t i = 0; i < coords.size(); ++i) {
            double dk0 = direction(i, dr);
            auto line = [&](double s) { return obj.along(s, dk0, dr); };
            Minimum best = golden_section(line, -config.line_radius, config.line_radius, config.line_tol);
            if (best.value < current) {
                obj.move(best.x, dk0, dr);
                coords[i] += best.x;
                current = obj.value();
            }
        }
        out.sweeps = sweep;
        if (before - current <= config.rel_tol * before) {
            out.converged = true;
            break;
        }
    }
    return out;
}

void check_barrier(double norm, double p)
{
    if (p <= 4.0 / 3.0 + 1e-15 && norm < kernel_norm_barrier) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "kernel optimizer produced ||Khat||_p = " << norm << " below the barrier " << kernel_norm_barrier;
        throw std::logic_error(msg.str());
    }
}

OptimizeResult optimize_step(std::int64_t Q, double p, const OptimizeConfig& config)
{
    KernelStep start = make_kernel_step(Q, std::vector<double>(static_cast<std::size_t>(Q / 4), 1.0));
    const auto period = static_cast<std::size_t>(Q);
    const double Qd = static_cast<double>(Q);

    // One period j = 1..Q of S(j) = pi j Khat(j), weighted by the tail zeta factor.
    std::vector<double> r(period);
    std::vector<double> w(period);
    for (std::size_t i = 0; i < period; ++i) {
        auto j = static_cast<std::int64_t>(i) + 1;
        r[i] = step_s_value(start, j);
        w[i] = 2.0 * std::pow(pi * Qd, -p) * hurwitz_zeta(p, static_cast<double>(j) / Qd);
    }
    LinearObjective obj(p, step_fourier_coeff(start, 0), r, w);
    std::vector<double> levels = start.levels;

    // Level i multiplies sin(2 pi j b_{i+1}) - sin(2 pi j b_i), b_i = 1/4 + i/Q.
    auto direction = [&](std::size_t level, std::vector<double>& dr) {
        for (std::size_t idx = 0; idx < period; ++idx) {
            double j = static_cast<double>(idx + 1);
            double b0 = 0.25 + static_cast<double>(level) / Qd;
            double b1 = b0 + 1.0 / Qd;
            dr[idx] = std::sin(2.0 * pi * j * b1) - std::sin(2.0 * pi * j * b0);
        }
        return 2.0 / Qd;
    };
    DescentOutcome descent = coordinate_descent(obj, levels, direction, config);

    KernelStep raw = make_kernel_step(Q, levels);
    NormValue raw_norm = step_norm(raw, p, config.threads);
    MixResult mix = mix_with_constant(step_fourier_coeff(raw, 0), step_tail_norm(raw, 1, p, config.threads).value, p);
    KernelStep best = mix.alpha != 1.0 ? mixed(raw, mix.alpha) : raw;
    NormValue certified = step_norm(best, p, config.threads);
    if (certified.value > raw_norm.value) {
        best = raw;
        certified = raw_norm;
    }

    OptimizeResult out;
    out.kernel = best;
    out.norm = certified.value;
    out.error = certified.error;
    out.raw_norm = raw_norm.value;
    out.alpha = best == raw ? 0.0 : mix.alpha;
    out.converged = descent.converged;
    out.iterations = descent.sweeps;
    return out;
}

OptimizeResult optimize_pl(std::int64_t T, double p, const OptimizeConfig& config)
{
    KernelPL start = make_kernel_pl(std::vector<double>(static_cast<std::size_t>(T) + 1, 1.0));
    const auto period = static_cast<std::size_t>(4 * T);
    const double Td = static_cast<double>(T);

    std::vector<double> cos_table(period);
    for (std::size_t k = 0; k < period; ++k) cos_table[k] = std::cos(2.0 * pi * static_cast<double>(k) / (4.0 * Td));
    // c(s, j) = cos(2 pi j x_s), indices j = 1..4T.
    auto corner_cos = [&](std::size_t s, std::size_t j) {
        return cos_table[(j * (static_cast<std::size_t>(T) + s)) % period];
    };

    std::vector<double> r(period, 0.0);  // C(j) of the constant kernel vanishes
    std::vector<double> w(period);
    double scale = 2.0 * std::pow(2.0 * Td / (16.0 * Td * Td * pi * pi), p);
    for (std::size_t i = 0; i < period; ++i)
        w[i] = scale * hurwitz_zeta(2.0 * p, static_cast<double>(i + 1) / (4.0 * Td));
    LinearObjective obj(p, pl_fourier_coeff(start, 0), r, w);

    std::vector<double> values(start.y.begin() + 1, start.y.end());
    // y_s enters C through d_s and d_{s+1}: 2c_s - c_{s-1} - c_{s+1}, or c_T - c_{T-1} at the end.
    auto direction = [&](std::size_t coord, std::vector<double>& dr) {
        std::size_t s = coord + 1;
        for (std::size_t idx = 0; idx < period; ++idx) {
            std::size_t j = idx + 1;
            if (s < static_cast<std::size_t>(T))
                dr[idx] = 2.0 * corner_cos(s, j) - corner_cos(s - 1, j) - corner_cos(s + 1, j);
            else
                dr[idx] = corner_cos(s, j) - corner_cos(s - 1, j);
        }
        return s < static_cast<std::size_t>(T) ? 1.0 / (2.0 * Td) : 1.0 / (4.0 * Td);
    };
    DescentOutcome descent = coordinate_descent(obj, values, direction, config);

    std::vector<double> y{1.0};
    y.insert(y.end(), values.begin(), values.end());
    KernelPL raw = make_kernel_pl(std::move(y));
    NormValue raw_norm = pl_norm(raw, p, config.threads);
    MixResult mix = mix_with_constant(pl_fourier_coeff(raw, 0), pl_tail_norm(raw, 1, p, config.threads).value, p);
    KernelPL best = mixed(raw, mix.alpha);
    NormValue certified = pl_norm(best, p, config.threads);
    double alpha = mix.alpha;
    std::optional<double> feasibility;
    if (config.objective == Objective::feasibility) {
        // The threshold belongs to the sampled kernel itself, so it is not mixed.
        feasibility = feasibility_threshold(quartic_inputs(raw, 2, config.threads)).L;
        certified.value = std::numeric_limits<double>::infinity();
    }
    if (certified.value > raw_norm.value) {
        best = raw;
        certified = raw_norm;
        alpha = 0.0;
    }

    OptimizeResult out;
    out.kernel = best;
    out.norm = certified.value;
    out.error = certified.error;
    out.raw_norm = raw_norm.value;
    out.alpha = alpha;
    out.converged = descent.converged;
    out.iterations = descent.sweeps;
    return out;
}

std::vector<double> default_start(Family f)
{
    switch (f) {
    case Family::two_level: return {0.5};
    case Family::quartic: return {0.1};
    case Family::arctan_mix: return {0.6, 1.0, 0.5, 1.2};
    case Family::power: return {1.6, 0.55};
    case Family::arctan: return {1.0, 0.5, 1.2};
    }
    throw std::invalid_argument("unknown kernel family");
}

struct SampledNorms {
    double raw;
    MixResult mix;
};

SampledNorms sampled_norms(const KernelPL& k, double p, unsigned threads)
{
    std::vector<double> c = pl_c_period(k);
    double k0 = pl_fourier_coeff(k, 0);
    double tail = pl_tail_norm(k, c, 1, p, threads).value;
    double raw = std::pow(std::pow(std::abs(k0), p) + std::pow(tail, p), 1.0 / p);
    return {raw, mix_with_constant(std::min(k0, 1.0), tail, p)};
}

OptimizeResult optimize_family(Family family, double p, const OptimizeConfig& config)
{
    std::vector<double> x0 = config.start.empty() ? default_start(family) : config.start;
    if (x0.size() != family_arity(family)) throw std::invalid_argument("optimize_kernel: wrong number of start parameters");
    validate(ClosedFormKernel{family, x0});

    auto objective = [&](std::span<const double> x) {
        ClosedFormKernel k{family, std::vector<double>(x.begin(), x.end())};
        try {
            validate(k);
        } catch (const std::invalid_argument&) {
            return 1e6;
        }
        KernelPL sampled = sample_closed_form(k, config.search_T);
        if (config.objective == Objective::feasibility) {
            double L = feasibility_threshold(quartic_inputs(sampled, 2, config.threads), true, 1e-9).L;
            return std::isfinite(L) ? -L : 1e6;
        }
        SampledNorms n = sampled_norms(sampled, p, config.threads);
        double v = config.mix_in_objective ? n.mix.norm : n.raw;
        return std::isfinite(v) ? v : 1e6;
    };
    std::vector<double> steps(x0.size());
    for (std::size_t i = 0; i < x0.size(); ++i) steps[i] = x0[i] != 0.0 ? 0.1 * std::abs(x0[i]) : 0.05;
    SimplexConfig simplex;
    simplex.max_evaluations = config.max_evaluations;
    SimplexResult found = nelder_mead(objective, x0, steps, simplex);

    ClosedFormKernel best_family{family, found.x};
    KernelPL raw = sample_closed_form(best_family, config.certify_T);
    NormValue raw_norm = pl_norm(raw, p, config.threads);
    MixResult mix = mix_with_constant(std::min(pl_fourier_coeff(raw, 0), 1.0),
                                      pl_tail_norm(raw, 1, p, config.threads).value, p);
    KernelPL best = mixed(raw, mix.alpha);
    NormValue certified = pl_norm(best, p, config.threads);
    double alpha = mix.alpha;
    std::optional<double> feasibility;
    if (config.objective == Objective::feasibility) {
        // The threshold belongs to the sampled kernel itself, so it is not mixed.
        feasibility = feasibility_threshold(quartic_inputs(raw, 2, config.threads)).L;
        certified.value = std::numeric_limits<double>::infinity();
    }
    if (certified.value > raw_norm.value) {
        best = raw;
        certified = raw_norm;
        alpha = 0.0;
    }

    OptimizeResult out;
    out.kernel = best;
    out.family_kernel = best_family;
    out.norm = certified.value;
    out.error = certified.error;
    out.raw_norm = raw_norm.value;
    out.alpha = alpha;
    out.converged = found.converged;
    out.iterations = static_cast<int>(found.evaluations);
    out.feasibility = feasibility;
    return out;
}

}  // namespace

OptimizeResult optimize_kernel(const KernelSpace& space, double p, const OptimizeConfig& config)
{
    if (!(p > 1.0)) throw std::invalid_argument("optimize_kernel: need p > 1");
    if (config.max_sweeps < 1) throw std::invalid_argument("optimize_kernel: need at least one sweep");
    if (config.objective == Objective::feasibility && space.kind != SpaceKind::family)
        throw std::invalid_argument("optimize_kernel: the feasibility objective applies to family spaces");
    OptimizeResult out;
    switch (space.kind) {
    case SpaceKind::step:
        if (space.size < 4 || space.size % 4 != 0)
            throw std::invalid_argument("optimize_kernel: step space needs Q a positive multiple of 4");
        out = optimize_step(space.size, p, config);
        break;
    case SpaceKind::pl:
        if (space.size < 1) throw std::invalid_argument("optimize_kernel: pl space needs T >= 1");
        out = optimize_pl(space.size, p, config);
        break;
    case SpaceKind::family:
        if (config.search_T < 1 || config.certify_T < 1)
            throw std::invalid_argument("optimize_kernel: sampling sizes must be positive");
        out = optimize_family(space.family, p, config);
        break;
    }
    check_barrier(out.norm, p);
    return out;
}

}  // namespace symmetra
