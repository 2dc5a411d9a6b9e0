#pragma once

#include <Eigen/Dense>

#include "sparsecert/family.hpp"

namespace sparsecert {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Alternant matrix (f_i(x_j))_{j,i}: one row per node, one column per
/// family member. Nodes must be pairwise distinct.
Matrix alternant_matrix(const FunctionFamily& fam, const PointTuple& pts);

/// Confluent variant: a node of multiplicity m contributes the rows
/// f_i, f_i', ..., f_i^{(m-1)} evaluated there. Distinct nodes reduce to
/// alternant_matrix.
Matrix confluent_alternant(const FunctionFamily& fam, const PointTuple& pts);

/// prod_{i<j} (x_j - x_i); 1 for a singleton, 0 when values repeat.
double vandermonde_product(const std::vector<double>& pts);

/// Closed form of the confluent Vandermonde determinant for the staircase
/// exponents (0,1,...,n) at the given (possibly repeated) nodes:
/// prod over distinct pairs (x_j-x_i)^{m_i m_j} * prod_i prod_{l<m_i} l!.
double confluent_vandermonde_value(const PointTuple& pts);

/// Schur polynomial s_alpha at the given points, alpha a strictly
/// increasing vector of nonnegative integers with |alpha| = |pts|.
/// Computed through the Jacobi-Trudi determinant in the complete
/// homogeneous basis, so repeated points need no special casing; at
/// distinct points the value agrees with det(alternant)/vandermonde.
double schur_eval(const ExponentVector& alpha, const std::vector<double>& pts);

/// Determinant with per-row inf-norm scaling.
///   det(M) = sign * exp(log_mag) and scaled = det of the row-normalised
/// matrix, i.e. det(M) / prod(row norms) -- the natural quantity to
/// compare against a vanishing tolerance.
struct ScaledDet {
    int sign = 0;          // 0 when the determinant is exactly zero
    double log_mag = 0.0;  // log |det|, meaningless when sign == 0
    double scaled = 0.0;   // det / prod(row inf-norms)
    bool structural_zero = false; // an exactly zero row or column
};

ScaledDet scaled_determinant(const Matrix& m);

} // namespace sparsecert
