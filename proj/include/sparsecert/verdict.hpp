#pragma once

#include <cstdint>
#include <optional>

#include "sparsecert/alternant.hpp"

namespace sparsecert {

/// Sampling plan for the T/ET verdicts. The underlying criterion
/// quantifies over all node tuples; the check samples a stratified grid,
/// so Pass is evidence while Fail carries a concrete witness tuple.
struct SamplingConfig {
    int grid_points = 24;       // per-dimension grid for small orders
    int random_tuples = 20000;  // thinning for order >= 4
    std::uint64_t seed = 0x5eedcafeULL;
    double vanish_tol = 1e-12;        // |det| / prod(row norms) below this counts as vanishing
    double halfline_horizon = 10.0;   // scan window for [0, inf)
};

enum class VerdictKind { pass, fail, inconclusive };

struct Verdict {
    VerdictKind kind = VerdictKind::inconclusive;
    std::optional<PointTuple> witness; // tuple with zero or sign-flipped determinant
    double min_abs_scaled_det = 0.0;   // smallest |det|/prod(row norms) seen
    int common_sign = 0;               // determinant sign on increasing tuples (Pass)
    std::size_t tuples_checked = 0;

    bool passed() const noexcept { return kind == VerdictKind::pass; }
    bool failed() const noexcept { return kind == VerdictKind::fail; }
};

/// Samples strictly increasing tuples and checks that every alternant
/// determinant keeps one strict sign.
Verdict is_t_system(const FunctionFamily& fam, const Interval& iv,
                    const SamplingConfig& cfg = {});

/// Same over nondecreasing tuples (confluent determinants, multiplicity
/// up to 3); endpoint-confluent tuples are checked first.
Verdict is_et_system(const FunctionFamily& fam, const Interval& iv,
                     const SamplingConfig& cfg = {});

} // namespace sparsecert
