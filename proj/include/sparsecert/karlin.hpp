#pragma once

#include <cstdint>

#include "sparsecert/extremal.hpp"

namespace sparsecert {

struct DecomposeConfig {
    int grid_points = 10000;        // verification grid
    double residual_rel_tol = 1e-8; // ||f - f_* - f^*||_inf / ||f||_inf
    double nonneg_rel_tol = 1e-8;   // grid min of the parts, relative to ||f||_inf
    std::uint64_t seed = 0x9e3779b9ULL;
    int max_restarts = 16;
    int max_iterations = 160;
};

/// The pair f = f_* + f^* of nonnegative polynomials with interlacing
/// full-index zero sets; f^* vanishes at the right endpoint. The scale
/// constants are the magnitude of the leading coefficient of each part
/// (largest coefficient magnitude when the leading one vanishes).
struct Decomposition {
    SparsePolynomial f_star;
    SparsePolynomial f_upper;
    KnotSet knots_star;
    KnotSet knots_upper;
    double c_star = 0.0;
    double c_upper = 0.0;
    double residual = 0.0;      // sup |f - f_* - f^*| on the verification grid
    double grid_min_star = 0.0; // min of f_* on the grid
    double grid_min_upper = 0.0;
    bool degenerate_star = false;  // f_* identically zero (nonneg boundary case)
    bool degenerate_upper = false; // f^* identically zero
};

/// Unique decomposition of f > 0 on [a,b] with a_n > 0. Knot pattern:
/// n = 2m   : f_* has m interior double knots, f^* has both endpoints
///            plus m-1 interior double knots;
/// n = 2m+1 : f_* has endpoint a plus m interior double knots, f^* has
///            m interior double knots plus endpoint b.
Decomposition decompose_interval(const SparsePolynomial& f, const Interval& iv,
                                 const DecomposeConfig& cfg = {});

/// Half-line variant on [0, inf); needs alpha_0 = 0 and a_n > 0. f_*
/// carries the full leading coefficient, f^* has no leading component.
Decomposition decompose_halfline(const SparsePolynomial& f,
                                 const DecomposeConfig& cfg = {});

/// Nichtnegativstellensatz variant: f >= 0 may vanish. The zeros of f
/// are pinned into both knot sets and only the remaining knots are
/// solved for; fully pinned cases degenerate to f_* = f or f^* = f and
/// are flagged.
Decomposition certify_nonneg(const SparsePolynomial& f, const Interval& iv,
                             const DecomposeConfig& cfg = {});

} // namespace sparsecert
