#include "symmetra/kernels.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "symmetra/hurwitz.hpp"
#include "symmetra/numerics.hpp"

namespace symmetra {

namespace {

constexpr double pi = std::numbers::pi;

/// |x| reduced to [0, 1/2].
double fold(double x)
{
    x -= std::floor(x);
    return x > 0.5 ? 1.0 - x : x;
}

std::int64_t positive_mod(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::mutex fftw_planner_mutex;

}  // namespace

double KernelPL::operator()(double x) const
{
    double u = fold(x);
    if (u <= 0.25) return 1.0;
    double pos = (u - 0.25) * 4.0 * static_cast<double>(T);
    auto t = std::min(static_cast<std::int64_t>(pos), T - 1);
    double frac = pos - static_cast<double>(t);
    return y[t] + frac * (y[t + 1] - y[t]);
}

KernelPL make_kernel_pl(std::vector<double> y)
{
    if (y.size() < 2) throw std::invalid_argument("piecewise linear kernel needs T >= 1");
    if (y.front() != 1.0) throw std::invalid_argument("piecewise linear kernel needs y_0 = 1");
    for (double v : y)
        if (!std::isfinite(v)) throw std::invalid_argument("piecewise linear kernel has a non-finite value");
    KernelPL k;
    k.T = static_cast<std::int64_t>(y.size()) - 1;
    k.y = std::move(y);
    return k;
}

double KernelStep::operator()(double x) const
{
    double u = fold(x);
    if (u <= 0.25) return 1.0;
    auto cell = static_cast<std::int64_t>(std::ceil((u - 0.25) * static_cast<double>(Q))) - 1;
    cell = std::clamp<std::int64_t>(cell, 0, static_cast<std::int64_t>(levels.size()) - 1);
    return levels[cell];
}

KernelStep make_kernel_step(std::int64_t Q, std::vector<double> levels)
{
    if (Q < 4 || Q % 4 != 0) throw std::invalid_argument("step kernel: Q must be a positive multiple of 4");
    if (static_cast<std::int64_t>(levels.size()) != Q / 4)
        throw std::invalid_argument("step kernel: expected Q/4 levels");
    for (double v : levels)
        if (!std::isfinite(v)) throw std::invalid_argument("step kernel has a non-finite level");
    return KernelStep{Q, std::move(levels)};
}

// ---------------------------------------------------------------------------

std::string family_name(Family f)
{
    switch (f) {
    case Family::two_level: return "two_level";
    case Family::quartic: return "quartic";
    case Family::arctan_mix: return "arctan_mix";
    case Family::power: return "power";
    case Family::arctan: return "arctan";
    }
    throw std::invalid_argument("unknown kernel family");
}

Family family_from_name(const std::string& name)
{
    for (Family f : {Family::two_level, Family::quartic, Family::arctan_mix, Family::power, Family::arctan})
        if (family_name(f) == name) return f;
    throw std::invalid_argument("unknown kernel family '" + name + "'");
}

std::size_t family_arity(Family f)
{
    switch (f) {
    case Family::two_level: return 1;
    case Family::quartic: return 1;
    case Family::arctan_mix: return 4;
    case Family::power: return 2;
    case Family::arctan: return 3;
    }
    throw std::invalid_argument("unknown kernel family");
}

void validate(const ClosedFormKernel& k)
{
    if (k.params.size() != family_arity(k.family))
        throw std::invalid_argument(family_name(k.family) + ": expected " +
                                    std::to_string(family_arity(k.family)) + " parameters");
    for (double v : k.params)
        if (!std::isfinite(v)) throw std::invalid_argument(family_name(k.family) + ": non-finite parameter");
    auto positive = [&](std::size_t from) {
        for (std::size_t i = from; i < k.params.size(); ++i)
            if (!(k.params[i] > 0.0))
                throw std::invalid_argument(family_name(k.family) + ": exponents must be positive");
    };
    switch (k.family) {
    case Family::two_level:
    case Family::quartic: break;
    case Family::arctan_mix: positive(1); break;
    case Family::power:
    case Family::arctan: positive(0); break;
    }
}

namespace {

double arctan_shape(double x, double e1, double e2, double e3)
{
    double num = std::pow(1.0 - 2.0 * x, e1);
    double den = std::pow(4.0 * x - 1.0, e2);
    double angle = den == 0.0 ? pi / 2.0 : std::atan2(num, den);
    return std::pow(2.0 / pi * angle, e3);
}

}  // namespace

double ClosedFormKernel::operator()(double x) const
{
    double u = fold(x);
    if (u <= 0.25) return 1.0;
    const auto& a = params;
    switch (family) {
    case Family::two_level: return a[0];
    case Family::quartic: return 1.0 - a[0] + a[0] * (40.0 * std::pow(2.0 * u - 1.0, 4) - 1.5);
    case Family::arctan_mix: return a[0] + (1.0 - a[0]) * arctan_shape(u, a[1], a[2], a[3]);
    case Family::power: return 1.0 - std::pow(1.0 - std::pow(4.0 * (0.5 - u), a[0]), a[1]);
    case Family::arctan: return arctan_shape(u, a[0], a[1], a[2]);
    }
    throw std::invalid_argument("unknown kernel family");
}

KernelPL sample_closed_form(const ClosedFormKernel& f, std::int64_t T)
{
    if (T < 1) throw std::invalid_argument("sample_closed_form: T must be positive");
    validate(f);
    std::vector<double> y(static_cast<std::size_t>(T) + 1);
    y[0] = 1.0;
    for (std::int64_t t = 1; t <= T; ++t)
        y[t] = f(0.25 + static_cast<double>(t) / (4.0 * static_cast<double>(T)));
    return make_kernel_pl(std::move(y));
}

// ---------------------------------------------------------------------------

namespace {

/// Weights w_t with C(j) = sum_t w_t cos(2 pi j x_t).
std::vector<double> cosine_weights(const KernelPL& k)
{
    const auto T = static_cast<std::size_t>(k.T);
    std::vector<double> w(T + 1);
    for (std::size_t t = 0; t <= T; ++t) {
        double d_t = t == 0 ? 0.0 : k.y[t] - k.y[t - 1];
        double d_next = t == T ? 0.0 : k.y[t + 1] - k.y[t];
        w[t] = d_t - d_next;
    }
    return w;
}

}  // namespace

double pl_c_value(const KernelPL& k, std::int64_t j)
{
    const std::int64_t period = 4 * k.T;
    const std::int64_t r = positive_mod(j, period);
    double sum = 0.0;
    for (std::int64_t t = 1; t <= k.T; ++t) {
        double now = std::cos(2.0 * pi * static_cast<double>(positive_mod(r * (k.T + t), period)) /
                              static_cast<double>(period));
        double before = std::cos(2.0 * pi * static_cast<double>(positive_mod(r * (k.T + t - 1), period)) /
                                 static_cast<double>(period));
        sum += (k.y[t] - k.y[t - 1]) * (now - before);
    }
    return sum;
}

std::vector<double> pl_c_period(const KernelPL& k)
{
    const auto T = static_cast<std::size_t>(k.T);
    const std::size_t period = 4 * T;
    std::vector<double> w = cosine_weights(k);

    double* in = fftw_alloc_real(period);
    fftw_complex* out = fftw_alloc_complex(period / 2 + 1);
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex);
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(period), in, out, FFTW_ESTIMATE);
    }
    std::fill(in, in + period, 0.0);
    for (std::size_t t = 0; t <= T; ++t) in[T + t] = w[t];
    fftw_execute(plan);

    std::vector<double> c(period);
    for (std::size_t j = 0; j <= period / 2; ++j) c[j] = out[j][0];
    for (std::size_t j = period / 2 + 1; j < period; ++j) c[j] = c[period - j];
    c[0] = 0.0;
    {
        std::lock_guard lock(fftw_planner_mutex);
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
    return c;
}

namespace {

double pl_zero_coeff(const KernelPL& k)
{
    std::vector<double> halves(static_cast<std::size_t>(k.T));
    for (std::int64_t t = 1; t <= k.T; ++t) halves[t - 1] = 0.5 * (k.y[t] + k.y[t - 1]);
    return 2.0 * (0.25 + pairwise_sum(halves) / (4.0 * static_cast<double>(k.T)));
}

/// Tail to the p-th power from a periodic numerator sequence:
///   scale * sum_{j=m}^{m+P-1} |num(j)|^p zeta(s, j/P).
struct PeriodicTail {
    double sum;
    double remainder;
};

PeriodicTail periodic_tail(const std::vector<double>& numerator, std::int64_t m, double p, double s,
                           double scale, unsigned threads)
{
    const auto period = static_cast<std::int64_t>(numerator.size());
    const double P = static_cast<double>(period);
    auto term_at = [&](std::size_t i, bool remainder_only) {
        std::int64_t j = m + static_cast<std::int64_t>(i);
        double num = numerator[positive_mod(j, period)];
        if (num == 0.0) return 0.0;
        ZetaValue z = hurwitz_zeta_bounded(s, static_cast<double>(j) / P);
        return scale * std::pow(std::abs(num), p) * (remainder_only ? z.remainder : z.value);
    };
    auto count = static_cast<std::size_t>(period);
    double sum = deterministic_sum(count, [&](std::size_t i) { return term_at(i, false); }, threads);
    double rem = deterministic_sum(count, [&](std::size_t i) { return term_at(i, true); }, threads);
    return {sum, rem};
}

NormValue root_with_error(double sum, double remainder, double p)
{
    NormValue out;
    out.value = std::pow(sum, 1.0 / p);
    double propagated = sum > 0.0 ? out.value * remainder / (p * sum) : 0.0;
    out.error = 1e-12 * out.value + propagated;
    return out;
}

}  // namespace

double pl_fourier_coeff(const KernelPL& k, std::int64_t j)
{
    if (j == 0) return pl_zero_coeff(k);
    j = j < 0 ? -j : j;
    double jd = static_cast<double>(j);
    return pl_c_value(k, j) * 2.0 * static_cast<double>(k.T) / (pi * pi * jd * jd);
}

NormValue pl_tail_norm(const KernelPL& k, const std::vector<double>& c_period, std::int64_t m, double p,
                       unsigned threads)
{
    if (m < 1) throw std::invalid_argument("pl_tail_norm: tail start must be >= 1");
    if (!(p >= 1.0)) throw std::invalid_argument("pl_tail_norm: need p >= 1");
    if (static_cast<std::int64_t>(c_period.size()) != 4 * k.T)
        throw std::invalid_argument("pl_tail_norm: coefficient period does not match T");
    const double T = static_cast<double>(k.T);
    double scale = 2.0 * std::pow(2.0 * T / (16.0 * T * T * pi * pi), p);
    PeriodicTail tail = periodic_tail(c_period, m, p, 2.0 * p, scale, threads);
    return root_with_error(tail.sum, tail.remainder, p);
}

NormValue pl_tail_norm(const KernelPL& k, std::int64_t m, double p, unsigned threads)
{
    return pl_tail_norm(k, pl_c_period(k), m, p, threads);
}

NormValue pl_norm(const KernelPL& k, double p, unsigned threads)
{
    NormValue tail = pl_tail_norm(k, 1, p, threads);
    double k0 = std::abs(pl_zero_coeff(k));
    double tail_p = std::pow(tail.value, p);
    double total = std::pow(k0, p) + tail_p;
    NormValue out;
    out.value = std::pow(total, 1.0 / p);
    double tail_p_err = tail.value > 0.0 ? p * tail_p / tail.value * tail.error : 0.0;
    out.error = 1e-12 * out.value + (total > 0.0 ? out.value * tail_p_err / (p * total) : 0.0);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

/// Coefficients u_i with S(j) = sum_i u_i sin(2 pi j (Q/4 + i) / Q).
std::vector<double> sine_weights(const KernelStep& k)
{
    const std::size_t L = k.levels.size();
    std::vector<double> u(L + 1);
    u[0] = 1.0 - k.levels[0];
    for (std::size_t i = 1; i < L; ++i) u[i] = k.levels[i - 1] - k.levels[i];
    u[L] = k.levels[L - 1];
    return u;
}

std::vector<double> step_s_period(const KernelStep& k)
{
    std::vector<double> u = sine_weights(k);
    std::vector<double> s(static_cast<std::size_t>(k.Q));
    for (std::int64_t j = 0; j < k.Q; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            std::int64_t idx = positive_mod(j * (k.Q / 4 + static_cast<std::int64_t>(i)), k.Q);
            acc += u[i] * std::sin(2.0 * pi * static_cast<double>(idx) / static_cast<double>(k.Q));
        }
        s[j] = acc;
    }
    return s;
}

}  // namespace

double step_s_value(const KernelStep& k, std::int64_t j)
{
    std::vector<double> u = sine_weights(k);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        std::int64_t idx = positive_mod(j * (k.Q / 4 + static_cast<std::int64_t>(i)), k.Q);
        acc += u[i] * std::sin(2.0 * pi * static_cast<double>(idx) / static_cast<double>(k.Q));
    }
    return acc;
}

double step_fourier_coeff(const KernelStep& k, std::int64_t j)
{
    if (j == 0) {
        double sum = 0.0;
        for (double v : k.levels) sum += v;
        return 0.5 + 2.0 * sum / static_cast<double>(k.Q);
    }
    j = j < 0 ? -j : j;
    return step_s_value(k, j) / (pi * static_cast<double>(j));
}

NormValue step_tail_norm(const KernelStep& k, std::int64_t m, double p, unsigned threads)
{
    if (m < 1) throw std::invalid_argument("step_tail_norm: tail start must be >= 1");
    if (!(p > 1.0)) throw std::invalid_argument("step_tail_norm: need p > 1 (coefficients decay like 1/j)");
    const double Q = static_cast<double>(k.Q);
    double scale = 2.0 * std::pow(pi * Q, -p);
    PeriodicTail tail = periodic_tail(step_s_period(k), m, p, p, scale, threads);
    return root_with_error(tail.sum, tail.remainder, p);
}

NormValue step_norm(const KernelStep& k, double p, unsigned threads)
{
    NormValue tail = step_tail_norm(k, 1, p, threads);
    double k0 = std::abs(step_fourier_coeff(k, 0));
    double tail_p = std::pow(tail.value, p);
    double total = std::pow(k0, p) + tail_p;
    NormValue out;
    out.value = std::pow(total, 1.0 / p);
    double tail_p_err = tail.value > 0.0 ? p * tail_p / tail.value * tail.error : 0.0;
    out.error = 1e-12 * out.value + (total > 0.0 ? out.value * tail_p_err / (p * total) : 0.0);
    return out;
}

// ---------------------------------------------------------------------------

MixResult mix_with_constant(double k0, double tail1, double p)
{
    if (!(p > 1.0)) throw std::invalid_argument("mix_with_constant: need p > 1");
    double M = 1.0 - k0;
    if (M < 0.0) throw std::invalid_argument("mix_with_constant: need Khat(0) <= 1");
    double N = std::pow(tail1, p);
    if (N == 0.0) return {1.0, 1.0, M, N};
    double q = p / (p - 1.0);
    double mq = std::pow(M, q);
    double nqp = std::pow(N, q / p);
    double alpha = 1.0 - std::pow(M, q / p) / (mq + nqp);
    double norm = std::pow(N * std::pow(mq + nqp, 1.0 - p), 1.0 / p);
    return {alpha, norm, M, N};
}

KernelPL mixed(const KernelPL& k, double alpha)
{
    KernelPL out = k;
    for (std::size_t t = 1; t < out.y.size(); ++t) out.y[t] = alpha + (1.0 - alpha) * out.y[t];
    return out;
}

KernelStep mixed(const KernelStep& k, double alpha)
{
    KernelStep out = k;
    for (double& v : out.levels) v = alpha + (1.0 - alpha) * v;
    return out;
}

double two_level_step_bound()
{
    double z = hurwitz_zeta(4.0 / 3.0, 1.0);
    double two43 = std::pow(2.0, 4.0 / 3.0);
    return 1.0 + std::pow(pi, 4) / (8.0 * std::pow(two43 - 1.0, 3) * z * z * z);
}

double two_level_step_optimum()
{
    double z = hurwitz_zeta(4.0 / 3.0, 1.0);
    double denom = std::pow(pi, 4) + 24.0 * z * z * z * (5.0 + std::pow(2.0, 4.0 / 3.0) - std::pow(2.0, 8.0 / 3.0));
    return 1.0 - 2.0 * std::pow(pi, 4) / denom;
}

ClosedFormKernel preset_family(const std::string& name)
{
    if (name == "K1") return {Family::two_level, {two_level_step_optimum()}};
    if (name == "K2") return {Family::quartic, {0.125}};
    if (name == "K3") return {Family::arctan_mix, {0.6644, 1.0, 0.5, 1.2015}};
    if (name == "K5") return {Family::power, {1.61707, 0.546335}};
    throw std::invalid_argument("unknown closed-form preset '" + name + "' (K1, K2, K3, K5)");
}

KernelPL preset_pl(const std::string& name, std::int64_t T)
{
    if (name == "K4") return sample_closed_form(preset_family("K3"), T);
    if (name == "K6") return sample_closed_form(preset_family("K5"), T);
    throw std::invalid_argument("unknown piecewise linear preset '" + name + "' (K4, K6)");
}

}  // namespace symmetra
