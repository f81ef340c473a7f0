#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace symmetra {

enum class BoundKind { lower, upper };

enum class BoundForm {
    quadratic,   ///< c0 eps^2
    affine,      ///< c0 eps + c1 (the 2 eps - 1 line)
    cubic,       ///< c0 eps^2 + c1 eps^3
    circle_arc,  ///< pi eps^2 / (1 + sqrt(1 - eps))^2
    pointwise,   ///< Delta(c0) <= c1, propagated to all eps
    table,       ///< (eps_i, value_i) pairs, extended by monotonicity of Delta
};

struct ProvenanceStep {
    std::string operation;
    nlohmann::json inputs;
    nlohmann::json outputs;
};

/// A proved inequality Delta(eps) >= value (lower) or <= value (upper) on [eps_lo, eps_hi].
struct BoundCertificate {
    BoundKind kind = BoundKind::lower;
    BoundForm form = BoundForm::quadratic;
    std::vector<double> coefficients;
    double eps_lo = 0.0;
    double eps_hi = 1.0;
    bool open_lo = false;
    bool open_hi = false;
    std::string label;
    std::vector<ProvenanceStep> provenance;

    bool covers(double eps) const;

    /// The bound at eps; only meaningful when covers(eps).
    double value(double eps) const;
};

std::string to_string(BoundKind k);
std::string to_string(BoundForm f);
BoundKind bound_kind_from_string(const std::string& s);
BoundForm bound_form_from_string(const std::string& s);

nlohmann::json to_json(const BoundCertificate& c);
BoundCertificate certificate_from_json(const nlohmann::json& j);

}  // namespace symmetra
