#include "symmetra/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace symmetra {

bool BoundCertificate::covers(double eps) const
{
    bool above = open_lo ? eps > eps_lo : eps >= eps_lo;
    bool below = open_hi ? eps < eps_hi : eps <= eps_hi;
    return above && below;
}

double BoundCertificate::value(double eps) const
{
    const auto& c = coefficients;
    switch (form) {
    case BoundForm::quadratic: return c.at(0) * eps * eps;
    case BoundForm::affine: return c.at(0) * eps + c.at(1);
    case BoundForm::cubic: return c.at(0) * eps * eps + c.at(1) * eps * eps * eps;
    case BoundForm::circle_arc: {
        double r = 1.0 + std::sqrt(std::max(0.0, 1.0 - eps));
        return std::numbers::pi * eps * eps / (r * r);
    }
    case BoundForm::pointwise: {
        // Delta(x) <= y. Below x, Delta(eps)/eps^2 is increasing; above x,
        // Delta is 2-Lipschitz. Delta(eps) <= eps always.
        double x = c.at(0);
        double y = c.at(1);
        double v = eps <= x ? y * (eps / x) * (eps / x) : y + 2.0 * (eps - x);
        return std::min(v, eps);
    }
    case BoundForm::table: {
        // Delta is nondecreasing: a lower node bounds everything to its right,
        // an upper node everything to its left.
        if (c.size() < 2 || c.size() % 2 != 0) throw std::invalid_argument("table certificate needs (eps, value) pairs");
        const std::size_t n = c.size() / 2;
        if (kind == BoundKind::lower) {
            double best = 0.0;
            for (std::size_t i = 0; i < n && c[2 * i] <= eps; ++i) best = std::max(best, c[2 * i + 1]);
            return best;
        }
        double best = 1.0;
        for (std::size_t i = n; i-- > 0 && c[2 * i] >= eps;) best = std::min(best, c[2 * i + 1]);
        return best;
    }
    }
    throw std::invalid_argument("unknown certificate form");
}

std::string to_string(BoundKind k) { return k == BoundKind::lower ? "lower" : "upper"; }

std::string to_string(BoundForm f)
{
    switch (f) {
    case BoundForm::quadratic: return "quadratic";
    case BoundForm::affine: return "affine";
    case BoundForm::cubic: return "cubic";
    case BoundForm::circle_arc: return "circle_arc";
    case BoundForm::pointwise: return "pointwise";
    case BoundForm::table: return "table";
    }
    throw std::invalid_argument("unknown certificate form");
}

BoundKind bound_kind_from_string(const std::string& s)
{
    if (s == "lower") return BoundKind::lower;
    if (s == "upper") return BoundKind::upper;
    throw std::invalid_argument("unknown bound kind '" + s + "'");
}

BoundForm bound_form_from_string(const std::string& s)
{
    for (BoundForm f : {BoundForm::quadratic, BoundForm::affine, BoundForm::cubic, BoundForm::circle_arc,
                        BoundForm::pointwise, BoundForm::table})
        if (to_string(f) == s) return f;
    throw std::invalid_argument("unknown certificate form '" + s + "'");
}

nlohmann::json to_json(const BoundCertificate& c)
{
    nlohmann::json prov = nlohmann::json::array();
    for (const auto& step : c.provenance)
        prov.push_back({{"operation", step.operation}, {"inputs", step.inputs}, {"outputs", step.outputs}});
    return {
        {"kind", to_string(c.kind)},
        {"form", to_string(c.form)},
        {"coefficients", c.coefficients},
        {"eps_range", {c.eps_lo, c.eps_hi}},
        {"open", {c.open_lo, c.open_hi}},
        {"label", c.label},
        {"provenance", prov},
    };
}

BoundCertificate certificate_from_json(const nlohmann::json& j)
{
    BoundCertificate c;
    c.kind = bound_kind_from_string(j.at("kind").get<std::string>());
    c.form = bound_form_from_string(j.at("form").get<std::string>());
    c.coefficients = j.at("coefficients").get<std::vector<double>>();
    auto range = j.at("eps_range");
    c.eps_lo = range.at(0).get<double>();
    c.eps_hi = range.at(1).get<double>();
    if (j.contains("open")) {
        c.open_lo = j["open"].at(0).get<bool>();
        c.open_hi = j["open"].at(1).get<bool>();
    }
    c.label = j.value("label", "");
    if (j.contains("provenance"))
        for (const auto& s : j["provenance"])
            c.provenance.push_back({s.at("operation").get<std::string>(), s.value("inputs", nlohmann::json::object()),
                                    s.value("outputs", nlohmann::json::object())});
    return c;
}

}  // namespace symmetra
