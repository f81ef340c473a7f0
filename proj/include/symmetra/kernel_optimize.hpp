#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "symmetra/kernels.hpp"

namespace symmetra {

enum class SpaceKind { step, pl, family };

/// step(Q): Q/4 free levels; pl(T): T free corner values; family: closed-form parameters.
struct KernelSpace {
    SpaceKind kind = SpaceKind::pl;
    std::int64_t size = 25;
    Family family = Family::power;
};

/// What a family search optimizes: the (mixed) norm, or the full-bound
/// threshold L* of the m = 2 quartic with the sine cap (maximized).
enum class Objective { norm, feasibility };

struct OptimizeConfig {
    Objective objective = Objective::norm;
    int max_sweeps = 1000;               /// sweeps also stop once the relative gain drops below rel_tol
    double rel_tol = 1e-10;
    double line_tol = 1e-10;
    double line_radius = 1.0;           ///< golden-section bracket around the current coordinate
    std::int64_t certify_T = 10'000;    ///< family kernels are certified on this sampling
    std::int64_t search_T = 1'000;      ///< and searched on this one
    bool mix_in_objective = true;       ///< family search minimizes the constant-mixed norm
    std::vector<double> start;          ///< family start parameters (empty: defaults)
    std::size_t max_evaluations = 2000; ///< simplex budget
    unsigned threads = 1;
};

struct OptimizeResult {
    std::variant<KernelStep, KernelPL> kernel;  ///< after constant mixing
    std::optional<ClosedFormKernel> family_kernel;
    double norm = 0.0;      ///< certified ||Khat||_p of `kernel`
    double error = 0.0;
    double raw_norm = 0.0;  ///< before mixing
    double alpha = 0.0;     ///< constant weight used by the mix
    bool converged = false;
    int iterations = 0;     ///< sweeps or simplex evaluations
    std::optional<double> feasibility;  ///< L* at the certified sampling (feasibility objective)
};

/// Minimizes ||Khat||_p over the space. Throws std::logic_error if the
/// result beats the known lower barrier for p <= 4/3.
OptimizeResult optimize_kernel(const KernelSpace& space, double p, const OptimizeConfig& config = {});

/// Lower barrier on ||Khat||_{4/3} over every admissible kernel.
inline constexpr double kernel_norm_barrier = 0.96579;

}  // namespace symmetra
