#include "sparsecert/alternant.hpp"

#include <cmath>

namespace sparsecert {

Matrix alternant_matrix(const FunctionFamily& fam, const PointTuple& pts) {
    if (pts.size() != fam.size())
        throw Error(errc::shape_error, "node count must be order + 1");
    if (!pts.all_distinct())
        throw Error(errc::shape_error, "alternant nodes must be pairwise distinct");
    const int n1 = static_cast<int>(fam.size());
    Matrix m(n1, n1);
    for (int j = 0; j < n1; ++j) {
        const double x = pts[static_cast<std::size_t>(j)];
        if (!fam.admissible(x))
            throw Error(errc::domain_error, "node outside the family domain");
        for (int i = 0; i < n1; ++i) m(j, i) = fam.member(i, x);
    }
    return m;
}

Matrix confluent_alternant(const FunctionFamily& fam, const PointTuple& pts) {
    if (pts.size() != fam.size())
        throw Error(errc::shape_error, "node count must be order + 1");
    const int n1 = static_cast<int>(fam.size());
    Matrix m(n1, n1);
    int row = 0;
    for (const auto& [x, mult] : pts.groups()) {
        if (!fam.admissible(x))
            throw Error(errc::domain_error, "node outside the family domain");
        for (int d = 0; d < mult; ++d, ++row) {
            for (int i = 0; i < n1; ++i) m(row, i) = fam.member_derivative(i, x, d);
        }
    }
    return m;
}

double vandermonde_product(const std::vector<double>& pts) {
    double prod = 1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) prod *= pts[j] - pts[i];
    }
    return prod;
}

double confluent_vandermonde_value(const PointTuple& pts) {
    const auto groups = pts.groups();
    double prod = 1.0;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            prod *= std::pow(groups[j].first - groups[i].first,
                             groups[i].second * groups[j].second);
        }
        double fact = 1.0;
        for (int l = 1; l < groups[i].second; ++l) {
            fact *= l;
            prod *= fact;
        }
    }
    return prod;
}

namespace {

// complete homogeneous symmetric polynomials h_0..h_max at the points,
// by the one-variable-at-a-time recurrence
std::vector<double> complete_homogeneous(const std::vector<double>& pts, int max_deg) {
    std::vector<double> h(static_cast<std::size_t>(max_deg) + 1, 0.0);
    h[0] = 1.0;
    for (double x : pts) {
        for (int k = 1; k <= max_deg; ++k)
            h[static_cast<std::size_t>(k)] += x * h[static_cast<std::size_t>(k) - 1];
    }
    return h;
}

} // namespace

double schur_eval(const ExponentVector& alpha, const std::vector<double>& pts) {
    if (alpha.size() != pts.size())
        throw Error(errc::shape_error, "schur_eval needs |alpha| = |pts|");
    if (!alpha.all_nonnegative_integers())
        throw Error(errc::shape_error, "schur_eval needs nonnegative integer exponents");

    // partition: lambda_i = alpha_{n-i} - (n-i), i = 0..n (weakly decreasing)
    const int n = alpha.order();
    std::vector<long> lambda(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
        lambda[static_cast<std::size_t>(i)] =
            std::lround(alpha[static_cast<std::size_t>(n - i)]) - (n - i);
    int ell = static_cast<int>(lambda.size());
    while (ell > 0 && lambda[static_cast<std::size_t>(ell) - 1] == 0) --ell;
    if (ell == 0) return 1.0; // staircase exponents

    long max_deg = 0;
    for (int i = 0; i < ell; ++i) max_deg = std::max(max_deg, lambda[static_cast<std::size_t>(i)] + ell);
    const auto h = complete_homogeneous(pts, static_cast<int>(max_deg));
    auto h_at = [&](long k) -> double {
        if (k < 0) return 0.0;
        return h[static_cast<std::size_t>(k)];
    };

    Matrix jt(ell, ell);
    for (int i = 0; i < ell; ++i) {
        for (int j = 0; j < ell; ++j)
            jt(i, j) = h_at(lambda[static_cast<std::size_t>(i)] - (i + 1) + (j + 1));
    }
    if (ell == 1) return jt(0, 0);
    return jt.determinant();
}

ScaledDet scaled_determinant(const Matrix& m) {
    ScaledDet out;
    const Eigen::Index n = m.rows();
    Matrix scaled = m;
    double log_rows = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) {
        const double norm = scaled.row(r).cwiseAbs().maxCoeff();
        if (norm == 0.0) {
            out.structural_zero = true;
            out.sign = 0;
            out.scaled = 0.0;
            return out;
        }
        scaled.row(r) /= norm;
        log_rows += std::log(norm);
    }
    for (Eigen::Index c = 0; c < n; ++c) {
        if (scaled.col(c).cwiseAbs().maxCoeff() == 0.0) {
            out.structural_zero = true;
            out.sign = 0;
            out.scaled = 0.0;
            return out;
        }
    }
    Eigen::PartialPivLU<Matrix> lu(scaled);
    const Matrix& u = lu.matrixLU();
    double log_mag = 0.0;
    int sign = lu.permutationP().determinant() > 0 ? 1 : -1;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = u(i, i);
        if (d == 0.0) {
            out.sign = 0;
            out.scaled = 0.0;
            return out;
        }
        if (d < 0.0) sign = -sign;
        log_mag += std::log(std::fabs(d));
    }
    out.sign = sign;
    out.scaled = sign * std::exp(log_mag);
    out.log_mag = log_mag + log_rows;
    return out;
}

} // namespace sparsecert
