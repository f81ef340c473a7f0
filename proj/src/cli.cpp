#include "symmetra/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "symmetra/autoconvolution.hpp"
#include "symmetra/bounds.hpp"
#include "symmetra/errors.hpp"
#include "symmetra/intervals.hpp"
#include "symmetra/json_io.hpp"
#include "symmetra/kernel_optimize.hpp"
#include "symmetra/kernels.hpp"
#include "symmetra/numerics.hpp"
#include "symmetra/sidon.hpp"

namespace symmetra {

std::string format_number(double x)
{
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_fraction(const std::string& text)
{
    auto parse = [&](const std::string& s) {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("not a number: '" + text + "'");
        return v;
    };
    try {
        auto slash = text.find('/');
        if (slash == std::string::npos) return parse(text);
        double den = parse(text.substr(slash + 1));
        if (den == 0.0) throw std::invalid_argument("zero denominator in '" + text + "'");
        return parse(text.substr(0, slash)) / den;
    } catch (const std::logic_error&) {
        throw std::invalid_argument("not a number: '" + text + "'");
    }
}

namespace {

/// Input that the owning operation rejects: reported as a usage error.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::string join_csv(std::initializer_list<std::string> cells)
{
    std::string line;
    for (const auto& c : cells) {
        if (!line.empty()) line += ',';
        line += c;
    }
    return line;
}

nlohmann::json read_json(const std::string& path)
{
    if (path == "-") return nlohmann::json::parse(std::cin);
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError("'" + path + "' is not valid JSON: " + e.what());
    }
}

/// Writes to `path` when given, otherwise to `out`.
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& body)
{
    if (path.empty()) {
        body(out);
        return;
    }
    std::ofstream file(path);
    if (!file) throw UsageError("cannot write '" + path + "'");
    body(file);
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text)
{
    auto colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            auto v = std::stoll(text);
            return {v, v};
        }
        return {std::stoll(text.substr(0, colon)), std::stoll(text.substr(colon + 1))};
    } catch (const std::logic_error&) {
        throw UsageError("expected an integer or a range a:b, got '" + text + "'");
    }
}

void require(bool ok, const std::string& message)
{
    if (!ok) throw UsageError(message);
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// Kernels

AnyKernel preset_kernel(const std::string& name, std::int64_t T)
{
    if (name == "K1") return make_kernel_step(4, {two_level_step_optimum()});
    if (name == "K4" || name == "K6") return preset_pl(name, T);
    if (name == "K2" || name == "K3" || name == "K5") return preset_family(name);
    throw UsageError("unknown kernel preset '" + name + "' (K1..K6)");
}

struct KernelReport {
    NormValue norm;
    double k0 = 0.0;
    double k1 = 0.0;
    double tail1 = 0.0;
    double tail2 = 0.0;
};

KernelReport report_pl(const KernelPL& k, double p, unsigned threads)
{
    std::vector<double> period = pl_c_period(k);
    KernelReport r;
    r.k0 = pl_fourier_coeff(k, 0);
    r.k1 = pl_fourier_coeff(k, 1);
    NormValue t1 = pl_tail_norm(k, period, 1, p, threads);
    r.tail1 = t1.value;
    r.tail2 = pl_tail_norm(k, period, 2, p, threads).value;
    double total = std::pow(std::abs(r.k0), p) + std::pow(t1.value, p);
    r.norm.value = std::pow(total, 1.0 / p);
    r.norm.error = t1.error + 1e-12 * r.norm.value;
    return r;
}

KernelReport report_step(const KernelStep& k, double p, unsigned threads)
{
    KernelReport r;
    r.k0 = step_fourier_coeff(k, 0);
    r.k1 = step_fourier_coeff(k, 1);
    r.norm = step_norm(k, p, threads);
    r.tail1 = step_tail_norm(k, 1, p, threads).value;
    r.tail2 = step_tail_norm(k, 2, p, threads).value;
    return r;
}

/// Closed forms are measured through their piecewise linear sampling,
/// except the two-level step, which is exactly a step kernel.
std::variant<KernelPL, KernelStep> concrete(const AnyKernel& k, std::int64_t T)
{
    if (auto pl = std::get_if<KernelPL>(&k)) return *pl;
    if (auto st = std::get_if<KernelStep>(&k)) return *st;
    const auto& f = std::get<ClosedFormKernel>(k);
    validate(f);
    if (f.family == Family::two_level) return make_kernel_step(4, {f.params.at(0)});
    return sample_closed_form(f, T);
}

double evaluate(const AnyKernel& k, double x)
{
    return std::visit([x](const auto& kernel) { return kernel(x); }, k);
}

// ---------------------------------------------------------------------------
// Bounds

struct Attained {
    double value = 0.0;
    BoundCertificate certificate;
};

Attained best_lower(double eps)
{
    Attained best;
    best.value = -1.0;
    for (const auto& c : standard_certificates().lower)
        if (c.covers(eps) && c.value(eps) > best.value) best = {c.value(eps), c};
    if (eps > 0.375 && eps < 0.625) {
        DeltaHalf d = delta_half_lower(eps);
        if (d.delta > best.value) {
            BoundCertificate c;
            c.kind = BoundKind::lower;
            c.form = BoundForm::pointwise;
            c.coefficients = {eps, d.delta};
            c.eps_lo = c.eps_hi = eps;
            c.label = "rearrangement bound at eps";
            c.provenance.push_back({"delta_half_lower", {{"eps", eps}},
                                    {{"F", d.F}, {"sup_floor", d.sup_floor}, {"delta", d.delta}}});
            best = {d.delta, c};
        }
    }
    if (eps == 0.0 || eps == 1.0 || best.value < 0.0) {
        best.value = eps == 1.0 ? 1.0 : std::max(best.value, 0.0);
        if (eps == 0.0 || eps == 1.0) best.certificate.label = "Delta(0) = 0, Delta(1) = 1";
    }
    return best;
}

Attained best_upper(double eps)
{
    Attained best;
    best.value = eps;
    best.certificate.kind = BoundKind::upper;
    best.certificate.form = BoundForm::affine;
    best.certificate.coefficients = {1.0, 0.0};
    best.certificate.label = "Delta(eps) <= eps";
    for (const auto& c : standard_certificates().upper)
        if (c.covers(eps) && c.value(eps) < best.value) best = {c.value(eps), c};
    if (eps == 0.0 || eps == 1.0) best.value = eps;
    return best;
}

struct EnvelopeRow {
    double eps, lower, upper;
};

std::vector<EnvelopeRow> envelope_rows(double step)
{
    require(step > 0.0 && step <= 0.5, "--step must lie in (0, 0.5]");
    const auto count = static_cast<std::int64_t>(std::llround(1.0 / step));
    require(std::abs(static_cast<double>(count) * step - 1.0) < 1e-9, "--step must divide 1");
    std::vector<EnvelopeRow> rows;
    rows.reserve(static_cast<std::size_t>(count));
    for (std::int64_t k = 1; k <= count; ++k) {
        double eps = static_cast<double>(k) / static_cast<double>(count);
        rows.push_back({eps, lower_envelope(eps), upper_envelope(eps)});
    }
    return rows;
}

void write_envelope_csv(std::ostream& os, const std::vector<EnvelopeRow>& rows)
{
    os << "eps,lower,upper,lower_over_eps2,upper_over_eps2\n";
    for (const auto& r : rows)
        os << join_csv({format_number(r.eps), format_number(r.lower), format_number(r.upper),
                        format_number(r.lower / (r.eps * r.eps)), format_number(r.upper / (r.eps * r.eps))})
           << '\n';
}

void write_envelope_svg(std::ostream& os, const std::vector<EnvelopeRow>& rows)
{
    const double width = 720, height = 480, left = 70, right = 20, top = 30, bottom = 60;
    const double y_lo = 0.5, y_hi = 1.05;
    auto px = [&](double eps) { return left + eps * (width - left - right); };
    auto py = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * (height - top - bottom); };
    auto polyline = [&](auto ratio, const char* colour) {
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
        char buf[64];
        for (const auto& r : rows) {
            double y = ratio(r);
            if (!(y >= y_lo && y <= y_hi)) continue;
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(r.eps), py(y));
            os << buf;
        }
        os << "\"/>\n";
    };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << py(y_lo) << "\" x2=\"" << px(1) << "\" y2=\"" << py(y_lo)
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << py(y_lo) << "\" x2=\"" << left << "\" y2=\"" << py(y_hi)
       << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 10; ++i) {
        double e = i / 10.0;
        os << "<text x=\"" << px(e) << "\" y=\"" << py(y_lo) + 18 << "\" text-anchor=\"middle\">" << e << "</text>\n";
    }
    for (int i = 0; i <= 11; ++i) {
        double y = y_lo + i * 0.05;
        if (y > y_hi + 1e-12) break;
        char label[16];
        std::snprintf(label, sizeof label, "%.2f", y);
        os << "<text x=\"" << left - 8 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">" << label << "</text>\n";
    }
    os << "<text x=\"" << px(0.5) << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">eps</text>\n";
    os << "<text x=\"18\" y=\"" << py(0.775) << "\" transform=\"rotate(-90 18 " << py(0.775)
       << ")\" text-anchor=\"middle\">Delta(eps)/eps^2</text>\n";
    polyline([](const EnvelopeRow& r) { return r.upper / (r.eps * r.eps); }, "#c0392b");
    polyline([](const EnvelopeRow& r) { return r.lower / (r.eps * r.eps); }, "#2c3e50");
    os << "<text x=\"" << px(0.05) << "\" y=\"" << py(1.02) << "\" fill=\"#c0392b\">upper / eps^2</text>\n";
    os << "<text x=\"" << px(0.05) << "\" y=\"" << py(0.98) << "\" fill=\"#2c3e50\">lower / eps^2</text>\n";
    os << "</svg>\n";
}

void print_certificate(std::ostream& os, const BoundCertificate& c)
{
    os << "certificate: " << c.label << '\n';
    for (const auto& step : c.provenance)
        os << "  " << step.operation << ' ' << step.inputs.dump() << " -> " << step.outputs.dump() << '\n';
}

// ---------------------------------------------------------------------------

struct Options {
    unsigned threads = 0;
    std::string format;
    std::string out_path;

    // dsym
    std::string input;

    // bstar
    std::string g_range = "2";
    std::string n_range;
    bool modular = false;
    std::uint64_t budget = 100'000'000;
    std::string mode = "modular";
    double eps = 0.3;
    double gamma = 10.0;
    std::int64_t n = 0;
    std::uint64_t seed = 1;
    int seeds = 1;
    int retry_cap = 1000;
    bool require_guarantee = false;

    // kernel
    std::string preset;
    std::string family;
    std::vector<double> params;
    std::string p_text = "4/3";
    std::int64_t T = 10'000;
    bool T_given = false;
    std::string space = "pl";
    std::int64_t size = 25;
    int max_sweeps = 1000;
    std::int64_t search_T = 1000;
    bool no_mix = false;
    std::string objective = "norm";
    std::size_t points = 1001;
    std::string density = "b";
    std::size_t grid = 2001;

    // bound
    double bound_eps = 0.5;
    double step = 0.001;
    std::string prefix = "overallpic";
};

int cmd_dsym(const Options& o, std::ostream& out)
{
    IntervalSet a;
    try {
        a = interval_set_from_json(read_json(o.input));
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed interval set: ") + e.what());
    }
    require(!a.empty(), "the interval set is empty");
    if (a.ambient() == Ambient::line)
        require(a.within_unit(), "line interval sets must lie in [0, 1]");
    auto part = largest_symmetric(a);
    emit(o.out_path, out, [&](std::ostream& os) {
        if (o.format == "json") {
            nlohmann::json j = {{"delta", part.delta}, {"c", part.center}, {"measure", a.measure()},
                                {"set", to_json(a)}};
            os << j.dump(2) << '\n';
        } else {
            os << "delta=" << format_number(part.delta) << " c=" << format_number(part.center) << '\n';
        }
    });
    return exit_ok;
}

int cmd_bstar_search(const Options& o, std::ostream& out, unsigned threads)
{
    require(!o.n_range.empty(), "--n is required");
    auto [g0, g1] = parse_range(o.g_range);
    auto [n0, n1] = parse_range(o.n_range);
    require(g0 >= 1 && g0 <= g1, "--g must be a positive integer or range");
    require(n0 >= 1 && n0 <= n1, "--n must be a positive integer or range");
    require(o.budget >= 1, "--budget must be positive");
    SearchConfig config{o.budget, threads};
    nlohmann::json results = nlohmann::json::array();
    std::ostringstream csv;
    csv << "g,n,size,exact,seed,seconds\n";
    for (auto g = g0; g <= g1; ++g)
        for (auto n = n0; n <= n1; ++n) {
            SearchResult r = o.modular ? search_C(g, n, config) : search_R(g, n, config);
            csv << join_csv({std::to_string(g), std::to_string(n), std::to_string(r.size), r.exact ? "1" : "0", "",
                             format_number(r.seconds)})
                << '\n';
            results.push_back({{"g", g}, {"n", n}, {"size", r.size}, {"exact", r.exact}, {"nodes", r.nodes},
                               {"seconds", r.seconds}, {"witness", to_json(r.witness)}});
        }
    emit(o.out_path, out, [&](std::ostream& os) {
        if (o.format == "json") os << results.dump(2) << '\n';
        else os << csv.str();
    });
    return exit_ok;
}

int cmd_bstar_random(const Options& o, std::ostream& out)
{
    require(o.n >= 1, "--n is required and must be positive");
    require(o.seeds >= 1, "--seeds must be positive");
    require(o.retry_cap >= 1, "--retry-cap must be positive");
    if (o.mode == "modular") {
        require(o.eps > 0.0 && o.eps <= 1.0, "--eps must lie in (0, 1]");
        require(o.n % 2 == 1, "the modular construction needs odd n");
    } else {
        require(o.gamma >= std::acos(-1.0), "--gamma must be at least pi");
        require(static_cast<double>(o.n) >= o.gamma, "--n must be at least gamma");
    }
    nlohmann::json results = nlohmann::json::array();
    std::ostringstream csv;
    csv << "g,n,size,exact,seed,seconds\n";
    int status = exit_ok;
    std::string failures;
    for (int i = 0; i < o.seeds; ++i) {
        RandomConfig config{o.seed + static_cast<std::uint64_t>(i), o.retry_cap, o.require_guarantee};
        auto start = std::chrono::steady_clock::now();
        try {
            RandomResult r = o.mode == "modular" ? random_modular(o.eps, o.n, config)
                                                 : random_integer(o.gamma, o.n, config);
            double secs = seconds_since(start);
            csv << join_csv({std::to_string(r.set.g), std::to_string(o.n), std::to_string(r.set.size()), "0",
                             std::to_string(r.seed), format_number(secs)})
                << '\n';
            results.push_back({{"seed", r.seed},
                               {"attempts", r.attempts},
                               {"min_size", r.profile.min_size},
                               {"max_rep", r.profile.max_rep},
                               {"guarantee_applies", r.profile.guarantee_applies},
                               {"verified", verify(r.set)},
                               {"set", to_json(r.set)}});
        } catch (const ComputationError& e) {
            status = exit_failure;
            failures += "seed " + std::to_string(config.seed) + ": " + e.what() + "\n";
        }
    }
    emit(o.out_path, out, [&](std::ostream& os) {
        if (o.format == "csv") os << csv.str();
        else os << (results.size() == 1 ? results[0] : results).dump(2) << '\n';
    });
    if (status != exit_ok) throw ComputationError(failures);
    return status;
}

int cmd_bstar_verify(const Options& o, std::ostream& out, std::ostream& err)
{
    nlohmann::json j = read_json(o.input);
    try {
        BstarSet s = bstar_set_from_json(j);
        if (!verify(s)) throw std::invalid_argument("independent verification failed");
        out << "valid g=" << s.g << " size=" << s.size() << " n=" << s.ambient_n;
        if (s.modulus) out << " modulus=" << *s.modulus;
        out << '\n';
        return exit_ok;
    } catch (const std::exception& e) {
        err << "invalid: " << e.what() << '\n';
        return exit_failure;
    }
}

AnyKernel kernel_from_options(const Options& o)
{
    if (!o.input.empty()) {
        try {
            return kernel_from_json(read_json(o.input));
        } catch (const nlohmann::json::exception& e) {
            throw UsageError(std::string("malformed kernel: ") + e.what());
        }
    }
    if (!o.preset.empty()) return preset_kernel(o.preset, o.T);
    if (!o.family.empty()) {
        ClosedFormKernel k{family_from_name(o.family), o.params};
        validate(k);
        return k;
    }
    throw UsageError("give one of --preset, --family or --input");
}

int cmd_kernel_norm(const Options& o, std::ostream& out, unsigned threads)
{
    double p = parse_fraction(o.p_text);
    require(p >= 1.0, "--p must be at least 1");
    require(o.T >= 1, "--T must be positive");
    auto kernel = concrete(kernel_from_options(o), o.T);
    KernelReport r = std::holds_alternative<KernelPL>(kernel) ? report_pl(std::get<KernelPL>(kernel), p, threads)
                                                              : report_step(std::get<KernelStep>(kernel), p, threads);
    MixResult mix = mix_with_constant(r.k0, r.tail1, p);
    nlohmann::json j = {{"p", p},           {"norm", r.norm.value}, {"error", r.norm.error},
                        {"khat0", r.k0},    {"khat1", r.k1},        {"tail1", r.tail1},
                        {"tail2", r.tail2}, {"mix_alpha", mix.alpha}, {"mix_norm", mix.norm}};
    if (std::abs(p - 4.0 / 3.0) < 1e-15) j["coefficient"] = simple_lower_coefficient(r.norm.value);
    emit(o.out_path, out, [&](std::ostream& os) {
        if (o.format == "json") {
            os << j.dump(2) << '\n';
            return;
        }
        for (const char* key : {"norm", "error", "coefficient", "khat0", "khat1", "tail1", "tail2", "mix_alpha", "mix_norm"})
            if (j.contains(key)) os << key << '=' << format_number(j[key].get<double>()) << '\n';
    });
    return exit_ok;
}

int cmd_kernel_opt(const Options& o, std::ostream& out, unsigned threads)
{
    double p = parse_fraction(o.p_text);
    require(p > 1.0, "--p must exceed 1");
    require(o.max_sweeps >= 1, "--max-sweeps must be positive");
    KernelSpace space;
    if (o.space == "step") space.kind = SpaceKind::step;
    else if (o.space == "pl") space.kind = SpaceKind::pl;
    else {
        space.kind = SpaceKind::family;
        require(!o.family.empty(), "--family is required for the family space");
        space.family = family_from_name(o.family);
    }
    space.size = o.size;
    OptimizeConfig config;
    config.max_sweeps = o.max_sweeps;
    config.threads = threads;
    config.start = o.params;
    config.search_T = o.search_T;
    if (o.T_given) config.certify_T = o.T;
    config.mix_in_objective = !o.no_mix;
    config.objective = o.objective == "feasibility" ? Objective::feasibility : Objective::norm;
    OptimizeResult r = optimize_kernel(space, p, config);

    nlohmann::json j = {{"norm", r.norm},         {"error", r.error},           {"raw_norm", r.raw_norm},
                        {"alpha", r.alpha},       {"converged", r.converged},   {"iterations", r.iterations}};
    std::visit([&](const auto& k) { j["kernel"] = to_json(k); }, r.kernel);
    if (r.family_kernel) j["family"] = to_json(*r.family_kernel);
    if (r.feasibility) j["feasibility"] = *r.feasibility;
    if (std::abs(p - 4.0 / 3.0) < 1e-15) j["coefficient"] = simple_lower_coefficient(r.norm);
    emit(o.out_path, out, [&](std::ostream& os) {
        if (o.format == "json") {
            os << j.dump(2) << '\n';
            return;
        }
        for (const char* key : {"norm", "error", "raw_norm", "alpha", "coefficient", "feasibility"})
            if (j.contains(key)) os << key << '=' << format_number(j[key].get<double>()) << '\n';
        os << "converged=" << (r.converged ? "true" : "false") << '\n';
        os << "iterations=" << r.iterations << '\n';
        if (r.family_kernel) {
            os << "params=";
            for (std::size_t i = 0; i < r.family_kernel->params.size(); ++i)
                os << (i ? "," : "") << format_number(r.family_kernel->params[i]);
            os << '\n';
        }
    });
    return r.converged ? exit_ok : exit_failure;
}

int cmd_kernel_sample(const Options& o, std::ostream& out)
{
    require(o.points >= 2, "--points must be at least 2");
    AnyKernel k = kernel_from_options(o);
    if (o.T_given) {
        require(o.T >= 1, "--T must be positive");
        if (auto f = std::get_if<ClosedFormKernel>(&k)) k = sample_closed_form(*f, o.T);
    }
    emit(o.out_path, out, [&](std::ostream& os) {
        if (o.format == "json") {
            std::visit([&](const auto& kernel) { os << to_json(kernel).dump(2) << '\n'; }, k);
            return;
        }
        os << "x,K\n";
        for (std::size_t i = 0; i < o.points; ++i) {
            double x = 0.5 * static_cast<double>(i) / static_cast<double>(o.points - 1);
            os << format_number(x) << ',' << format_number(evaluate(k, x)) << '\n';
        }
    });
    return exit_ok;
}

int cmd_kernel_autoconv(const Options& o, std::ostream& out, std::ostream& err)
{
    require(o.grid >= 3, "--grid must be at least 3");
    DensityModel f;
    try {
        f = density_preset(o.density);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    AutoconvolutionResult r = autoconvolution_norms(f, o.grid);
    if (r.renormalized) err << "warning: density mass differs from 1; normalized\n";
    emit(o.out_path, out, [&](std::ostream& os) {
        if (o.format == "csv") {
            os << "x,value\n";
            for (std::size_t i = 0; i < r.x.size(); ++i)
                os << format_number(r.x[i]) << ',' << format_number(r.values[i]) << '\n';
            return;
        }
        os << "sup=" << format_number(r.sup) << '\n'
           << "argmax=" << format_number(r.argmax) << '\n'
           << "l2sq=" << format_number(r.l2sq) << '\n'
           << "sup_error=" << format_number(r.sup_error) << '\n'
           << "l2sq_error=" << format_number(r.l2sq_error) << '\n';
    });
    return exit_ok;
}

int cmd_bound(const Options& o, std::ostream& out, bool lower)
{
    require(o.bound_eps >= 0.0 && o.bound_eps <= 1.0, "--eps must lie in [0, 1]");
    Attained a = lower ? best_lower(o.bound_eps) : best_upper(o.bound_eps);
    emit(o.out_path, out, [&](std::ostream& os) {
        if (o.format == "json") {
            nlohmann::json j = {{"eps", o.bound_eps}, {lower ? "lower" : "upper", a.value},
                                {"certificate", to_json(a.certificate)}};
            os << j.dump(2) << '\n';
            return;
        }
        os << format_number(a.value) << '\n';
        print_certificate(os, a.certificate);
    });
    return exit_ok;
}

int cmd_envelope(const Options& o, std::ostream& out)
{
    auto rows = envelope_rows(o.step);
    emit(o.out_path, out, [&](std::ostream& os) { write_envelope_csv(os, rows); });
    return exit_ok;
}

int cmd_overallpic(const Options& o, std::ostream& out)
{
    require(!o.prefix.empty(), "--out must name a file prefix");
    auto rows = envelope_rows(o.step);
    emit(o.prefix + ".csv", out, [&](std::ostream& os) { write_envelope_csv(os, rows); });
    emit(o.prefix + ".svg", out, [&](std::ostream& os) { write_envelope_svg(os, rows); });
    out << "wrote " << o.prefix << ".csv and " << o.prefix << ".svg\n";
    return exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Symmetric subsets, B*[g] sets and Fourier kernel bounds"};
    app.name("symmetra");
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);
    app.fallthrough();
    app.add_option("--threads", o.threads, "Worker threads (default: SYMMETRA_THREADS or 1)");

    auto* dsym = app.add_subcommand("dsym", "Largest symmetric subset of a JSON interval set");
    dsym->add_option("--input", o.input, "Interval set JSON file ('-' for stdin)")->required();
    dsym->add_option("--out", o.out_path, "Output file");
    dsym->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));

    auto* bstar = app.add_subcommand("bstar", "B*[g] sets");
    bstar->require_subcommand(1);
    auto* search = bstar->add_subcommand("search", "Exact R(g,n) or C(g,n) by branch and bound");
    search->add_option("--g", o.g_range, "g or a range a:b");
    search->add_option("--n", o.n_range, "n or a range a:b")->required();
    search->add_flag("--modular", o.modular, "Search C(g,n) instead of R(g,n)");
    search->add_option("--budget", o.budget, "Search-tree node budget");
    search->add_option("--out", o.out_path, "Output file");
    search->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* random = bstar->add_subcommand("random", "Randomized B*[g] constructions");
    random->add_option("--mode", o.mode, "modular or integer")->check(CLI::IsMember({"modular", "integer"}));
    random->add_option("--eps", o.eps, "Inclusion probability (modular)");
    random->add_option("--gamma", o.gamma, "Target gamma (integer)");
    random->add_option("--n", o.n, "Ambient size")->required();
    random->add_option("--seed", o.seed, "First seed");
    random->add_option("--seeds", o.seeds, "Number of consecutive seeds");
    random->add_option("--retry-cap", o.retry_cap, "Draws per seed before giving up");
    random->add_flag("--require-guarantee", o.require_guarantee, "Reject parameters outside the a < E/3 regime");
    random->add_option("--out", o.out_path, "Output file");
    random->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    auto* verify_cmd = bstar->add_subcommand("verify", "Re-verify a witness JSON file");
    verify_cmd->add_option("--input", o.input, "Witness JSON file ('-' for stdin)")->required();

    auto* kernel = app.add_subcommand("kernel", "Kernels on the circle");
    kernel->require_subcommand(1);
    auto kernel_source = [&](CLI::App* cmd) {
        cmd->add_option("--preset", o.preset, "K1..K6");
        cmd->add_option("--family", o.family, "two_level, quartic, arctan_mix, power, arctan");
        cmd->add_option("--params", o.params, "Family parameters");
        cmd->add_option("--input", o.input, "Kernel JSON file");
        cmd->add_option("--T", o.T, "Sampling size for closed forms (default 10000)")
            ->each([&](const std::string&) { o.T_given = true; });
        cmd->add_option("--out", o.out_path, "Output file");
    };
    auto* norm = kernel->add_subcommand("norm", "||Khat||_p with coefficient data");
    kernel_source(norm);
    norm->add_option("--p", o.p_text, "Exponent, e.g. 4/3");
    norm->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));

    auto* opt = kernel->add_subcommand("opt", "Minimize ||Khat||_p over a kernel space");
    opt->add_option("--space", o.space, "step, pl or family")->check(CLI::IsMember({"step", "pl", "family"}));
    opt->add_option("--size", o.size, "Q for step, T for pl");
    opt->add_option("--family", o.family, "Family for the family space");
    opt->add_option("--start", o.params, "Family start parameters");
    opt->add_option("--p", o.p_text, "Exponent, e.g. 4/3");
    opt->add_option("--max-sweeps", o.max_sweeps, "Coordinate-descent sweep cap");
    opt->add_option("--search-T", o.search_T, "Sampling used while searching a family");
    opt->add_option("--T", o.T, "Sampling used to certify a family")->each([&](const std::string&) { o.T_given = true; });
    opt->add_flag("--no-mix", o.no_mix, "Search families on the unmixed norm");
    opt->add_option("--objective", o.objective, "norm, or feasibility (maximize the full-bound threshold)")
        ->check(CLI::IsMember({"norm", "feasibility"}));
    opt->add_option("--out", o.out_path, "Output file");
    opt->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));

    auto* sample_cmd = kernel->add_subcommand("sample", "Kernel curve as CSV (x, K) or kernel JSON");
    kernel_source(sample_cmd);
    sample_cmd->add_option("--points", o.points, "Points on [0, 1/2]");
    sample_cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* autoconv = kernel->add_subcommand("autoconv", "Sup and squared 2-norm of f*f for a preset density");
    autoconv->add_option("--density", o.density, "indicator, b or schinzel");
    autoconv->add_option("--grid", o.grid, "Grid points for f*f");
    autoconv->add_option("--out", o.out_path, "Output file");
    autoconv->add_option("--format", o.format, "text or csv")->check(CLI::IsMember({"text", "csv"}));

    auto* bound = app.add_subcommand("bound", "Bounds on Delta(eps)");
    bound->require_subcommand(1);
    auto* lower = bound->add_subcommand("lower", "Best lower bound with its certificate");
    auto* upper = bound->add_subcommand("upper", "Best upper bound with its certificate");
    for (auto* cmd : {lower, upper}) {
        cmd->add_option("--eps", o.bound_eps, "eps in [0, 1]")->required();
        cmd->add_option("--out", o.out_path, "Output file");
        cmd->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    }
    auto* envelope = bound->add_subcommand("envelope", "CSV eps,lower,upper,lower_over_eps2,upper_over_eps2");
    envelope->add_option("--step", o.step, "Grid step (must divide 1)");
    envelope->add_option("--out", o.out_path, "Output file");

    auto* figure = app.add_subcommand("figure", "Figure data");
    figure->require_subcommand(1);
    auto* overallpic = figure->add_subcommand("overallpic", "Envelope CSV and SVG chart of Delta(eps)/eps^2");
    overallpic->add_option("--out", o.prefix, "Output prefix (writes PREFIX.csv and PREFIX.svg)");
    overallpic->add_option("--step", o.step, "Grid step (must divide 1)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    const unsigned threads = o.threads > 0 ? o.threads : threads_from_environment(1);
    try {
        if (*dsym) return cmd_dsym(o, out);
        if (*search) return cmd_bstar_search(o, out, threads);
        if (*random) return cmd_bstar_random(o, out);
        if (*verify_cmd) return cmd_bstar_verify(o, out, err);
        if (*norm) return cmd_kernel_norm(o, out, threads);
        if (*opt) return cmd_kernel_opt(o, out, threads);
        if (*sample_cmd) return cmd_kernel_sample(o, out);
        if (*autoconv) return cmd_kernel_autoconv(o, out, err);
        if (*lower) return cmd_bound(o, out, true);
        if (*upper) return cmd_bound(o, out, false);
        if (*envelope) return cmd_envelope(o, out);
        if (*overallpic) return cmd_overallpic(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "computation failed: " << e.what() << '\n';
        return exit_failure;
    }
    err << app.help();
    return exit_usage;
}

}  // namespace symmetra
