#pragma once

// JSON forms of interval sets, B*[g] witnesses and kernels.

#include <variant>

#include <json.hpp>

#include "symmetra/intervals.hpp"
#include "symmetra/kernels.hpp"
#include "symmetra/sidon.hpp"

namespace symmetra {

/// {"ambient": "line"|"circle", "intervals": [[lo, hi], ...]}.
nlohmann::json to_json(const IntervalSet& a);

/// Accepts the object form or a bare array of pairs (line ambient); pairs may
/// overlap or come unsorted. Numbers or "p/q" strings are both accepted.
IntervalSet interval_set_from_json(const nlohmann::json& j);

/// {"n", "modulus"?, "elements", "g"}.
nlohmann::json to_json(const BstarSet& s);

/// Recomputes g; a stored g that disagrees is an error.
BstarSet bstar_set_from_json(const nlohmann::json& j);

/// {"type": "pl", "T", "values"} or {"type": "step", "Q", "values"}.
nlohmann::json to_json(const KernelPL& k);
nlohmann::json to_json(const KernelStep& k);

/// {"type": "family", "family": name, "params": [...]}.
nlohmann::json to_json(const ClosedFormKernel& k);

using AnyKernel = std::variant<KernelPL, KernelStep, ClosedFormKernel>;

/// Inverse of the three kernel forms above; validates the kernel.
AnyKernel kernel_from_json(const nlohmann::json& j);

}  // namespace symmetra
