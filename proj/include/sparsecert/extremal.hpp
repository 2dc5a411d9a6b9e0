#pragma once

#include <optional>
#include <vector>

#include "sparsecert/knots.hpp"

namespace sparsecert {

/// Scale choice for determinantal polynomials. The determinant fixes the
/// polynomial only up to a constant, so callers pick the gauge.
struct Normalization {
    enum class Kind { unit_leading, sup_norm, value_at, raw };

    Kind kind = Kind::unit_leading;
    double x = 0.0;     // value_at
    double value = 1.0; // value_at
    double scale = 1.0; // raw

    static Normalization unit_leading() { return {}; }
    static Normalization sup_norm() { return {Kind::sup_norm, 0, 1, 1}; }
    static Normalization value_at(double x, double v) { return {Kind::value_at, x, v, 1}; }
    static Normalization raw(double c) { return {Kind::raw, 0, 1, c}; }
};

/// Unique member of lin(fam) with f(pts[i]) = vals[i]. Solves the
/// alternant system; a numerically singular alternant (the family is not
/// a T-system at these nodes) raises SingularSystem.
SparsePolynomial interpolate(const FunctionFamily& fam,
                             const std::vector<double>& pts,
                             const std::vector<double>& vals);

/// c * det(confluent alternant with a free first row): the polynomial
/// vanishing at each knot to its multiplicity. Row count must equal the
/// family order. Powers families only (the result lives in coefficients
/// over the exponent vector).
SparsePolynomial poly_with_zeros(const FunctionFamily& fam, const KnotSet& ks,
                                 const Normalization& norm = Normalization::unit_leading());

/// Nonnegative polynomial vanishing at all knots (interior knots become
/// double zeros, endpoint knots simple ones). Pads the zero set to full
/// index internally; extra padding zeros may appear.
SparsePolynomial nonneg_poly_with_zeros(const FunctionFamily& fam, const KnotSet& ks);

/// Polynomial whose sign changes exactly at the nodal points and which
/// touches zero at the non-nodal points. Requires 2k + l <= order.
SparsePolynomial poly_with_nodal_nonnodal(const FunctionFamily& fam, const Interval& iv,
                                          const std::vector<double>& nonnodal,
                                          const std::vector<double>& nodal);

struct ZeroGridConfig {
    int grid_points = 4096;
    double touch_rel_tol = 1e-10;  // |f| <= tol * supnorm at a polished local min
    double sign_rel_tol = 1e-12;   // deadband for grid sign classification
};

struct ClassifiedZero {
    double location = 0.0;
    bool nodal = true; // sign change or boundary zero
};

struct ZeroCount {
    int nonnodal = 0; // k
    int nodal = 0;    // l
    std::vector<ClassifiedZero> zeros;
    int weighted() const noexcept { return 2 * nonnodal + nodal; }
};

/// Classifies the zeros of p on the interval: sign changes and boundary
/// zeros are nodal, interior touch points non-nodal. Locations from
/// bisection (nodal) or derivative root polishing (non-nodal).
ZeroCount count_zeros(const SparsePolynomial& p, const Interval& iv,
                      const ZeroGridConfig& cfg = {});

// -- internal building block, shared with the decomposition engine --

/// Coefficients of x -> det([f_i(x)]; knot rows) over the family basis,
/// by Laplace expansion along the free row. Rows are inf-norm scaled, so
/// the result is the determinant polynomial up to a positive factor.
/// All-zero output signals a degenerate determinant.
std::vector<double> detpoly_coefficients(const FunctionFamily& fam,
                                         const std::vector<Knot>& knots);

/// Horizon beyond which the leading term of p dominates the rest in
/// magnitude (used to reduce half-line scans to a compact window).
double halfline_dominance_bound(const SparsePolynomial& p);

} // namespace sparsecert
