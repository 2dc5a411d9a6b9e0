#pragma once

#include <cstdint>
#include <optional>

#include "sparsecert/karlin.hpp"

namespace sparsecert {

/// Moment values s_i = L(x^{alpha_i}) over a sparse exponent vector.
class TruncatedMomentSequence {
public:
    TruncatedMomentSequence(ExponentVector exps, std::vector<double> values);

    const ExponentVector& exponents() const noexcept { return exps_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double sup_norm() const noexcept;

private:
    ExponentVector exps_;
    std::vector<double> values_;
};

/// Finitely many atoms with strictly positive weights.
struct AtomicMeasure {
    std::vector<double> atoms;   // pairwise distinct
    std::vector<double> weights; // > 0

    std::size_t size() const noexcept { return atoms.size(); }
    void validate() const;
};

/// Riesz functional: pairs p's coefficients with the moments of matching
/// exponents. p's exponents must be a subset of s's.
double riesz(const TruncatedMomentSequence& s, const SparsePolynomial& p);

TruncatedMomentSequence moments_of(const AtomicMeasure& mu, const ExponentVector& exps);

// ---- dense Hankel criteria (integer exponents 0..n) ----------------------

struct HankelCheck {
    bool pass = false;
    double min_eigenvalue = 0.0; // over the fully known matrices tested
    double range_residual = 0.0; // consistency of the one-step extension
};

struct HankelReport {
    HankelCheck hamburger;
    HankelCheck stieltjes;
    HankelCheck hausdorff;
    HankelCheck svecov;
};

/// Classical Hankel positivity tests on a dense sequence s_0..s_n.
/// Each check uses the largest Hankel blocks the truncation permits; when
/// the block one size up has only the unknown next moment in its corner,
/// positive-semidefinite completability is tested as well (for the
/// Hausdorff check the shared unknown makes the test exact).
HankelReport hankel_psd_checks(const TruncatedMomentSequence& s);

// ---- sparse feasibility and measure recovery ------------------------------

enum class FeasibilityKind { feasible, infeasible, marginal };

struct FeasibilityVerdict {
    FeasibilityKind kind = FeasibilityKind::feasible;
    double min_value = 0.0;                  // smallest normalized riesz value found
    std::optional<SparsePolynomial> witness; // nonnegative p with L(p) < 0
    double witness_grid_min = 0.0;

    bool feasible() const noexcept { return kind == FeasibilityKind::feasible; }
    bool infeasible() const noexcept { return kind == FeasibilityKind::infeasible; }
};

struct FeasibilityConfig {
    int coarse_scan = 48;      // per-dimension scan for <= 2 free knots
    int multistarts = 32;      // for >= 3 free knots
    std::uint64_t seed = 0x5eedf00dULL;
    double marginal_band = 0.0; // 0 -> 1e-8 * (1 + ||s||_inf)
};

/// Decides truncated moment-problem feasibility by minimizing the Riesz
/// functional over the sup-normalized extremal polynomial families of the
/// interval (or all families the truncation permits on the half line).
FeasibilityVerdict sparse_feasible(const TruncatedMomentSequence& s, const Interval& iv,
                                   const FeasibilityConfig& cfg = {});

struct RecoveryConfig {
    int grid_points = 512;
    int refine_iterations = 200;
    double weight_prune = 1e-10;
    double residual_rel_tol = 1e-7; // vs 1 + ||s||_inf
};

/// Atomic representing measure with at most n+1 atoms (grid-localized
/// nonnegative least squares, then joint Gauss-Newton refinement).
AtomicMeasure recover_atoms(const TruncatedMomentSequence& s, const Interval& iv,
                            const RecoveryConfig& cfg = {});

/// Signed weights w with sum_j w_j x_j^{alpha_i} = s_i (Boas-style signed
/// representation at prescribed nodes).
std::vector<double> signed_representation(const TruncatedMomentSequence& s,
                                          const std::vector<double>& pts);

} // namespace sparsecert
