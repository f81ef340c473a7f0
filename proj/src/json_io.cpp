#include "symmetra/json_io.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace symmetra {

namespace {

double parse_endpoint(const nlohmann::json& v)
{
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        auto slash = s.find('/');
        if (slash == std::string::npos) return std::stod(s);
        double den = std::stod(s.substr(slash + 1));
        if (den == 0.0) throw std::invalid_argument("zero denominator in endpoint '" + s + "'");
        return std::stod(s.substr(0, slash)) / den;
    }
    throw std::invalid_argument("interval endpoint must be a number or a \"p/q\" string");
}

}  // namespace

nlohmann::json to_json(const IntervalSet& a)
{
    nlohmann::json list = nlohmann::json::array();
    for (const auto& iv : a.intervals()) list.push_back({iv.lo, iv.hi});
    return {{"ambient", a.ambient() == Ambient::line ? "line" : "circle"}, {"intervals", list}};
}

IntervalSet interval_set_from_json(const nlohmann::json& j)
{
    Ambient ambient = Ambient::line;
    const nlohmann::json* list = &j;
    if (j.is_object()) {
        std::string name = j.value("ambient", "line");
        if (name == "circle") ambient = Ambient::circle;
        else if (name != "line") throw std::invalid_argument("unknown ambient '" + name + "'");
        if (!j.contains("intervals")) throw std::invalid_argument("interval set needs an \"intervals\" array");
        list = &j.at("intervals");
    }
    if (!list->is_array()) throw std::invalid_argument("intervals must be an array of [lo, hi] pairs");
    std::vector<Interval<double>> pairs;
    for (const auto& p : *list) {
        if (!p.is_array() || p.size() != 2) throw std::invalid_argument("each interval must be a [lo, hi] pair");
        double lo = parse_endpoint(p[0]);
        double hi = parse_endpoint(p[1]);
        if (!std::isfinite(lo) || !std::isfinite(hi)) throw std::invalid_argument("interval endpoints must be finite");
        if (lo > hi) throw std::invalid_argument("interval with lo > hi");
        pairs.push_back({lo, hi});
    }
    return IntervalSet::from_pairs(std::move(pairs), ambient);
}

nlohmann::json to_json(const BstarSet& s)
{
    nlohmann::json j = {{"n", s.ambient_n}, {"elements", s.elements}, {"g", s.g}};
    if (s.modulus) j["modulus"] = *s.modulus;
    return j;
}

BstarSet bstar_set_from_json(const nlohmann::json& j)
{
    auto elements = j.at("elements").get<std::vector<std::int64_t>>();
    std::optional<std::int64_t> modulus;
    if (j.contains("modulus") && !j["modulus"].is_null()) modulus = j["modulus"].get<std::int64_t>();
    std::int64_t n = j.contains("n") ? j["n"].get<std::int64_t>() : modulus.value_or(0);
    BstarSet s = make_bstar_set(std::move(elements), n, modulus);
    if (j.contains("g") && j["g"].get<std::int64_t>() != s.g)
        throw std::invalid_argument("stored g = " + std::to_string(j["g"].get<std::int64_t>()) +
                                    " but the set has g = " + std::to_string(s.g));
    return s;
}

nlohmann::json to_json(const KernelPL& k) { return {{"type", "pl"}, {"T", k.T}, {"values", k.y}}; }

nlohmann::json to_json(const KernelStep& k) { return {{"type", "step"}, {"Q", k.Q}, {"values", k.levels}}; }

nlohmann::json to_json(const ClosedFormKernel& k)
{
    return {{"type", "family"}, {"family", family_name(k.family)}, {"params", k.params}};
}

AnyKernel kernel_from_json(const nlohmann::json& j)
{
    const auto type = j.at("type").get<std::string>();
    if (type == "pl") {
        KernelPL k = make_kernel_pl(j.at("values").get<std::vector<double>>());
        if (j.contains("T") && j["T"].get<std::int64_t>() != k.T)
            throw std::invalid_argument("kernel T does not match the number of values");
        return k;
    }
    if (type == "step") return make_kernel_step(j.at("Q").get<std::int64_t>(), j.at("values").get<std::vector<double>>());
    if (type == "family") {
        ClosedFormKernel k{family_from_name(j.at("family").get<std::string>()),
                           j.at("params").get<std::vector<double>>()};
        validate(k);
        return k;
    }
    throw std::invalid_argument("unknown kernel type '" + type + "' (pl, step, family)");
}

}  // namespace symmetra
