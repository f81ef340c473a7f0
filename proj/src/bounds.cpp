#include "symmetra/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "symmetra/numerics.hpp"

namespace symmetra {

namespace {

constexpr double pi = std::numbers::pi;

void check_eps(double eps)
{
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in [0, 1]");
}

}  // namespace

double trivial_lower(double eps)
{
    check_eps(eps);
    return std::max(0.5 * eps * eps, 2.0 * eps - 1.0);
}

double simple_lower_coefficient(double norm43)
{
    if (!(norm43 > 0.0)) throw std::invalid_argument("simple_lower_coefficient: norm must be positive");
    return 0.5 * std::pow(norm43, -4.0);
}

double simple_lower_from_kernel(const KernelPL& k, unsigned threads)
{
    if (k.y.empty() || k.y.front() != 1.0) throw std::invalid_argument("kernel must equal 1 on [-1/4, 1/4]");
    return simple_lower_coefficient(pl_norm(k, 4.0 / 3.0, threads).value);
}

double simple_lower_from_kernel(const KernelStep& k, unsigned threads)
{
    return simple_lower_coefficient(step_norm(k, 4.0 / 3.0, threads).value);
}

QuarticBoundInputs quartic_inputs(const KernelPL& k, int m, unsigned threads)
{
    if (m < 1) throw std::invalid_argument("quartic_inputs: need m >= 1");
    QuarticBoundInputs in;
    in.m = m;
    for (int j = 0; j < m; ++j) in.coeffs.push_back(pl_fourier_coeff(k, j));
    in.tail = pl_tail_norm(k, m, 4.0 / 3.0, threads).value;
    return in;
}

namespace {

void check_inputs(const QuarticBoundInputs& in)
{
    if (in.m < 1) throw std::invalid_argument("quartic bound: need m >= 1");
    if (static_cast<int>(in.coeffs.size()) != in.m) throw std::invalid_argument("quartic bound: need Khat(0..m-1)");
    if (!(in.tail >= 0.0)) throw std::invalid_argument("quartic bound: tail must be nonnegative");
}

double residual_term(double residual, double tail)
{
    if (tail == 0.0) {
        if (residual == 0.0) return 0.0;
        throw std::invalid_argument("quartic bound: zero tail with nonzero residual");
    }
    return std::pow(residual / tail, 4);
}

}  // namespace

double quartic_bound(const QuarticBoundInputs& in, std::span<const double> x)
{
    check_inputs(in);
    if (static_cast<int>(x.size()) != in.m - 1) throw std::invalid_argument("quartic bound: need x_1..x_{m-1}");
    double residual = 1.0 - in.coeffs[0];
    double quartics = 0.0;
    for (int j = 1; j < in.m; ++j) {
        residual -= 2.0 * in.coeffs[j] * x[j - 1];
        quartics += 2.0 * std::pow(x[j - 1], 4);
    }
    return 1.0 + residual_term(residual, in.tail) + quartics;
}

std::vector<double> tails_from(const QuarticBoundInputs& in)
{
    check_inputs(in);
    std::vector<double> tails(static_cast<std::size_t>(in.m));
    double power = std::pow(in.tail, 4.0 / 3.0);
    tails[in.m - 1] = in.tail;
    for (int j = in.m - 1; j >= 1; --j) {
        power += 2.0 * std::pow(std::abs(in.coeffs[j]), 4.0 / 3.0);
        tails[j - 1] = std::pow(power, 3.0 / 4.0);
    }
    return tails;
}

QuarticMinimum quartic_minimum(const QuarticBoundInputs& in)
{
    std::vector<double> tails = tails_from(in);
    QuarticMinimum out;
    double residual = 1.0 - in.coeffs[0];
    for (int j = 1; j < in.m; ++j) {
        double xj = std::cbrt(in.coeffs[j]) * residual / std::pow(tails[j - 1], 4.0 / 3.0);
        out.x.push_back(xj);
        residual -= 2.0 * in.coeffs[j] * xj;
    }
    out.value = quartic_bound(in, out.x);
    return out;
}

double sin_cap(double L)
{
    if (!(L >= 1.0)) throw std::invalid_argument("sin_cap: need L >= 1");
    return L / pi * std::sin(pi / L);
}

namespace {

/// Convex quartic minimized over the box [-r, r]^{m-1} by cyclic golden-section passes.
QuarticMinimum box_minimum(const QuarticBoundInputs& in, double r)
{
    const int dims = in.m - 1;
    std::vector<double> x(static_cast<std::size_t>(dims), 0.0);
    if (dims == 0) return {x, quartic_bound(in, x)};
    double current = quartic_bound(in, x);
    for (int pass = 0; pass < 200; ++pass) {
        double before = current;
        for (int i = 0; i < dims; ++i) {
            auto line = [&](double v) {
                std::vector<double> trial = x;
                trial[i] = v;
                return quartic_bound(in, trial);
            };
            Minimum best = golden_section(line, -r, r, 1e-9);
            if (best.value <= current) {
                x[i] = best.x;
                current = best.value;
            }
        }
        if (dims == 1 || before - current <= 1e-15 * before) break;
    }
    return {x, current};
}

}  // namespace

Feasibility feasibility_threshold(const QuarticBoundInputs& in, bool use_sine_cap, double tol)
{
    check_inputs(in);
    auto radius = [&](double L) { return use_sine_cap ? std::sqrt(sin_cap(L)) : 1.0; };
    auto contradiction = [&](double L) { return box_minimum(in, radius(L)).value > L; };

    double hi = quartic_bound(in, std::vector<double>(static_cast<std::size_t>(in.m - 1), 0.0));
    if (!(hi > 1.0) || !contradiction(1.0)) return {1.0, 0.5, box_minimum(in, radius(1.0)).x};
    double L = bisect_boundary(contradiction, 1.0, hi, tol);
    return {L, L / 2.0, box_minimum(in, radius(L)).x};
}

double sin_cap_inverse(double value, double tol)
{
    if (!(value >= 0.0 && value < 1.0)) throw std::invalid_argument("sin_cap_inverse: value must lie in [0, 1)");
    double hi = 2.0;
    while (sin_cap(hi) < value) hi *= 2.0;
    // Smallest L with cap(L) >= value: keep the `false` side as the answer's lower edge.
    double below = bisect_boundary([&](double L) { return sin_cap(L) < value; }, 1.0, hi, tol);
    return below + tol;
}

std::optional<double> central_coefficient_floor(double cap_value)
{
    if (!(cap_value >= 0.0)) throw std::invalid_argument("central_coefficient_floor: cap value must be nonnegative");
    double v = cap_value * cap_value;
    if (v >= 1.0) return std::nullopt;
    return sin_cap_inverse(v, 1e-10);
}

// ---------------------------------------------------------------------------

SampledFunction sample(const std::function<double(double)>& f, double lo, double hi, std::size_t cells)
{
    if (cells == 0 || !(lo < hi)) throw std::invalid_argument("sample: need cells > 0 and lo < hi");
    SampledFunction out{lo, hi, std::vector<double>(cells)};
    for (std::size_t i = 0; i < cells; ++i) out.values[i] = f(out.x(i));
    return out;
}

SampledFunction sdr(const SampledFunction& f)
{
    const std::size_t n = f.values.size();
    std::vector<double> sorted = f.values;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    // Cells ordered by distance of their centre from the midpoint, left first on ties.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto twice_distance = [n](std::size_t i) {
        auto d = static_cast<std::int64_t>(2 * i + 1) - static_cast<std::int64_t>(n);
        return d < 0 ? -d : d;
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return twice_distance(a) < twice_distance(b); });
    SampledFunction out{f.lo, f.hi, std::vector<double>(n)};
    for (std::size_t k = 0; k < n; ++k) out.values[order[k]] = sorted[k];
    return out;
}

double central_integral(const SampledFunction& g, double width)
{
    const double mid = 0.5 * (g.lo + g.hi);
    const double a = mid - width / 2.0;
    const double b = mid + width / 2.0;
    const double h = g.cell();
    double total = 0.0;
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        double lo = g.lo + static_cast<double>(i) * h;
        double overlap = std::min(b, lo + h) - std::max(a, lo);
        if (overlap > 0.0) total += overlap * g.values[i];
    }
    return total;
}

namespace {

struct FullBound {
    QuarticBoundInputs inputs;
    Feasibility result;
    std::int64_t T;
    double L;
};

/// The K6 quartic bound with the sine cap, computed once.
const FullBound& full_bound()
{
    static const FullBound value = [] {
        KernelPL k6 = preset_pl("K6");
        QuarticBoundInputs inputs = quartic_inputs(k6, 2);
        Feasibility result = feasibility_threshold(inputs);
        return FullBound{inputs, result, k6.T, result.L};
    }();
    return value;
}

}  // namespace

double rearrangement_F(double eps)
{
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("rearrangement_F: eps must lie in (0, 1]");
    double q = pi * eps / 4.0;
    double root = std::sqrt(3.0 + 4.0 * std::cos(pi * eps / 2.0) + 2.0 * std::cos(pi * eps) - std::sin(pi * eps / 2.0));
    return (3.0 * std::cos(q) + std::sin(q) - root) / (pi * eps * (std::cos(q) + std::sin(q)));
}

double rearrangement_F_numeric(double eps, double* best_b, std::size_t cells)
{
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("rearrangement_F_numeric: eps must lie in (0, 1]");
    auto bound_for = [&](double b) {
        auto L_b = [b](double x) { return std::cos(4.0 * pi * x) - b * std::cos(2.0 * pi * x); };
        SampledFunction r = sdr(sample(L_b, -0.25, 0.25, cells));
        return -(1.0 / (b + 1.0)) * (2.0 / eps) * central_integral(r, eps / 2.0);
    };
    Minimum best = golden_section([&](double b) { return -bound_for(b); }, 2.0, 4.0, 1e-6);
    if (best_b) *best_b = best.x;
    return -best.value;
}

DeltaHalf delta_half_lower(double eps, bool cross_check)
{
    check_eps(eps);
    DeltaHalf out;
    out.in_range = eps > 0.375 && eps < 0.625;
    if (!out.in_range) {
        out.sup_floor = full_bound().L;
        out.delta = 0.5 * eps * eps * out.sup_floor;
        return out;
    }
    out.F = rearrangement_F(eps);
    if (cross_check) out.F_numeric = rearrangement_F_numeric(eps, &out.b);
    out.sup_floor = out.F > 0.0 ? sin_cap_inverse(out.F * out.F) : 1.0;
    out.delta = 0.5 * eps * eps * out.sup_floor;
    return out;
}

// ---------------------------------------------------------------------------

BoundCertificate upper_from_bstar(const BstarSet& w)
{
    if (w.modulus) throw std::invalid_argument("upper_from_bstar: needs a line (non-modular) set");
    if (!verify(w)) throw std::invalid_argument("upper_from_bstar: witness does not verify");
    if (w.elements.empty()) throw std::invalid_argument("upper_from_bstar: empty witness");
    const double n = static_cast<double>(w.ambient_n);
    BoundCertificate c;
    c.kind = BoundKind::upper;
    c.form = BoundForm::pointwise;
    c.coefficients = {static_cast<double>(w.size()) / n, static_cast<double>(w.g) / n};
    c.eps_lo = 0.0;
    c.eps_hi = 1.0;
    c.open_lo = true;
    c.label = "B*[" + std::to_string(w.g) + "] set of size " + std::to_string(w.size()) + " in [1," +
              std::to_string(w.ambient_n) + "]";
    c.provenance.push_back({"verify", {{"n", w.ambient_n}, {"elements", w.elements}}, {{"g", w.g}}});
    c.provenance.push_back({"upper_from_bstar",
                            {{"size", w.size()}, {"n", w.ambient_n}, {"g", w.g}},
                            {{"x", c.coefficients[0]}, {"bound", c.coefficients[1]}}});
    return c;
}

void CertificateStore::add(BoundCertificate c)
{
    (c.kind == BoundKind::lower ? lower : upper).push_back(std::move(c));
}

double CertificateStore::lower_at(double eps) const
{
    check_eps(eps);
    if (eps == 0.0) return 0.0;
    if (eps == 1.0) return 1.0;
    double best = 0.0;
    for (const auto& c : lower)
        if (c.covers(eps)) best = std::max(best, c.value(eps));
    return best;
}

double CertificateStore::upper_at(double eps) const
{
    check_eps(eps);
    if (eps == 0.0) return 0.0;
    if (eps == 1.0) return 1.0;
    double best = eps;  // the set itself
    for (const auto& c : upper)
        if (c.covers(eps)) best = std::min(best, c.value(eps));
    return best;
}

namespace {

CertificateStore build_standard_store()
{
    CertificateStore store;

    BoundCertificate line;
    line.kind = BoundKind::lower;
    line.form = BoundForm::affine;
    line.coefficients = {2.0, -1.0};
    line.label = "2 eps - 1";
    line.provenance.push_back({"trivial_lower", nlohmann::json::object(), {{"form", "2 eps - 1"}}});
    store.add(line);

    BoundCertificate half;
    half.kind = BoundKind::lower;
    half.form = BoundForm::quadratic;
    half.coefficients = {0.5};
    half.label = "eps^2 / 2";
    half.provenance.push_back({"trivial_lower", nlohmann::json::object(), {{"form", "eps^2 / 2"}}});
    store.add(half);

    const FullBound& fb = full_bound();
    const QuarticBoundInputs& inputs = fb.inputs;
    const Feasibility& full = fb.result;
    BoundCertificate quad;
    quad.kind = BoundKind::lower;
    quad.form = BoundForm::quadratic;
    quad.coefficients = {full.coefficient};
    quad.label = "quartic bound with sine cap, K6";
    quad.provenance.push_back({"sample_closed_form",
                               {{"family", "power"}, {"params", {1.61707, 0.546335}}, {"T", fb.T}},
                               {{"kernel", "K6"}}});
    quad.provenance.push_back({"quartic_inputs",
                               {{"kernel", "K6"}, {"m", 2}},
                               {{"coeffs", inputs.coeffs}, {"tail", inputs.tail}}});
    quad.provenance.push_back({"feasibility_threshold", {{"tolerance", 1e-7}}, {{"L", full.L}, {"x1", full.x}}});
    store.add(quad);

    BoundCertificate cubic;
    cubic.kind = BoundKind::lower;
    cubic.form = BoundForm::cubic;
    cubic.coefficients = {0.5546, 0.088079};
    cubic.eps_lo = 0.375;
    cubic.eps_hi = 0.625;
    cubic.open_lo = cubic.open_hi = true;
    cubic.label = "linearized rearrangement bound";
    cubic.provenance.push_back({"delta_half_lower", {{"linearization", {1.1092, 0.176158}}},
                                {{"form", "0.5546 eps^2 + 0.088079 eps^3"}}});
    store.add(cubic);

    BoundCertificate table;
    table.kind = BoundKind::lower;
    table.form = BoundForm::table;
    table.eps_lo = 0.375;
    table.eps_hi = 0.625;
    table.open_lo = table.open_hi = true;
    for (int k = 376; k <= 624; ++k) {
        double eps = k / 1000.0;
        table.coefficients.push_back(eps);
        table.coefficients.push_back(delta_half_lower(eps).delta);
    }
    table.label = "rearrangement bound intersected with the sine cap";
    table.provenance.push_back({"delta_half_lower", {{"grid", {0.376, 0.624, 0.001}}}, {{"nodes", 249}}});
    store.add(table);

    BoundCertificate top;
    top.kind = BoundKind::upper;
    top.form = BoundForm::affine;
    top.coefficients = {2.0, -1.0};
    top.eps_lo = 11.0 / 16.0;
    top.label = "2 eps - 1 on [11/16, 1]";
    top.provenance.push_back({"upper_envelope", {{"range", {11.0 / 16.0, 1.0}}}, {{"form", "2 eps - 1"}}});
    store.add(top);

    BoundCertificate scaled;
    scaled.kind = BoundKind::upper;
    scaled.form = BoundForm::quadratic;
    scaled.coefficients = {96.0 / 121.0};
    scaled.eps_hi = 11.0 / 16.0;
    scaled.open_lo = true;
    scaled.label = "(96/121) eps^2 from Delta(11/16) <= 3/8";
    scaled.provenance.push_back({"upper_from_bstar", {{"limit", "g -> infinity"}, {"x", 11.0 / 16.0}},
                                 {{"bound", 3.0 / 8.0}}});
    store.add(scaled);

    BoundCertificate arc;
    arc.kind = BoundKind::upper;
    arc.form = BoundForm::circle_arc;
    arc.open_lo = true;
    arc.label = "pi eps^2 / (1 + sqrt(1 - eps))^2";
    arc.provenance.push_back({"upper_envelope", nlohmann::json::object(), {{"form", "pi eps^2/(1+sqrt(1-eps))^2"}}});
    store.add(arc);

    SearchResult witness = search_R(6, 17);
    store.add(upper_from_bstar(witness.witness));
    return store;
}

}  // namespace

const CertificateStore& standard_certificates()
{
    static const CertificateStore store = build_standard_store();
    return store;
}

double lower_envelope(double eps)
{
    check_eps(eps);
    double best = standard_certificates().lower_at(eps);
    if (eps > 0.375 && eps < 0.625) best = std::max(best, delta_half_lower(eps).delta);
    return best;
}

double upper_envelope(double eps) { return standard_certificates().upper_at(eps); }

}  // namespace symmetra
