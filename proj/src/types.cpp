#include "sparsecert/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sparsecert {

const char* errc_name(errc c) {
    switch (c) {
        case errc::domain_error: return "DomainError";
        case errc::unsupported_order: return "UnsupportedOrder";
        case errc::shape_error: return "ShapeError";
        case errc::config_error: return "ConfigError";
        case errc::singular_system: return "SingularSystem";
        case errc::degenerate_determinant: return "DegenerateDeterminant";
        case errc::index_too_large: return "IndexTooLarge";
        case errc::construction_failed: return "ConstructionFailed";
        case errc::identically_zero: return "IdenticallyZero";
        case errc::not_strictly_positive: return "NotStrictlyPositive";
        case errc::bad_leading_coefficient: return "BadLeadingCoefficient";
        case errc::newton_divergence: return "NewtonDivergence";
        case errc::tail_negative: return "TailNegative";
        case errc::negative_somewhere: return "NegativeSomewhere";
        case errc::too_many_zeros: return "TooManyZeros";
        case errc::exponent_mismatch: return "ExponentMismatch";
        case errc::infeasible: return "Infeasible";
        case errc::recovery_failed: return "RecoveryFailed";
        case errc::not_dense: return "NotDense";
        case errc::parse_error: return "ParseError";
    }
    return "UnknownError";
}

ExponentVector::ExponentVector(std::vector<double> exponents) : exps_(std::move(exponents)) {
    if (exps_.empty())
        throw Error(errc::shape_error, "exponent vector must not be empty");
    for (std::size_t i = 0; i + 1 < exps_.size(); ++i) {
        if (!(exps_[i] < exps_[i + 1]))
            throw Error(errc::shape_error, "exponents must be strictly increasing");
    }
    for (double e : exps_) {
        if (!std::isfinite(e))
            throw Error(errc::domain_error, "exponents must be finite");
    }
}

bool ExponentVector::all_nonnegative_integers() const noexcept {
    for (double e : exps_) {
        if (e < 0.0 || e != std::floor(e)) return false;
    }
    return true;
}

bool ExponentVector::has_fractional() const noexcept {
    for (double e : exps_) {
        if (e != std::floor(e)) return true;
    }
    return false;
}

Interval Interval::closed(double a, double b) {
    if (!(a < b))
        throw Error(errc::domain_error, "closed interval requires a < b");
    if (!std::isfinite(a) || !std::isfinite(b))
        throw Error(errc::domain_error, "interval endpoints must be finite");
    Interval iv;
    iv.kind = Kind::closed;
    iv.a = a;
    iv.b = b;
    return iv;
}

Interval Interval::halfline() {
    Interval iv;
    iv.kind = Kind::halfline;
    iv.a = 0.0;
    iv.b = std::numeric_limits<double>::infinity();
    return iv;
}

void Interval::require_admissible(const ExponentVector& exps) const {
    const double lo = left();
    if (exps.has_negative()) {
        if (is_halfline() || lo <= 0.0)
            throw Error(errc::domain_error,
                        "negative exponents require an interval with a > 0");
    }
    if (exps.has_fractional() && lo < 0.0)
        throw Error(errc::domain_error,
                    "fractional exponents require a >= 0");
}

SparsePolynomial::SparsePolynomial(ExponentVector exps, std::vector<double> coeffs)
    : exps_(std::move(exps)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != exps_.size())
        throw Error(errc::shape_error, "coefficient count must match exponent count");
}

bool SparsePolynomial::is_zero(double tol) const noexcept {
    for (double c : coeffs_) {
        if (std::fabs(c) > tol) return false;
    }
    return true;
}

SparsePolynomial& SparsePolynomial::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
}

SparsePolynomial SparsePolynomial::operator+(const SparsePolynomial& o) const {
    if (!(exps_ == o.exps_))
        throw Error(errc::exponent_mismatch, "polynomial addition needs matching exponents");
    std::vector<double> c(coeffs_);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.coeffs_[i];
    return SparsePolynomial(exps_, std::move(c));
}

SparsePolynomial SparsePolynomial::operator-(const SparsePolynomial& o) const {
    if (!(exps_ == o.exps_))
        throw Error(errc::exponent_mismatch, "polynomial subtraction needs matching exponents");
    std::vector<double> c(coeffs_);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.coeffs_[i];
    return SparsePolynomial(exps_, std::move(c));
}

double power(double x, double e) {
    if (x > 0.0) return std::pow(x, e); // exp(e log x) under the hood
    if (x == 0.0) {
        if (e == 0.0) return 1.0; // 0^0 := 1, keeps the constant member alive at 0
        if (e > 0.0) return 0.0;
        throw Error(errc::domain_error, "x = 0 with negative exponent");
    }
    // x < 0: only integer exponents make sense over the reals
    if (e != std::floor(e))
        throw Error(errc::domain_error, "x < 0 with non-integer exponent");
    return std::pow(x, e);
}

double power_derivative(double x, double e, int order) {
    if (order < 0)
        throw Error(errc::unsupported_order, "derivative order must be >= 0");
    if (order > kMaxDerivativeOrder)
        throw Error(errc::unsupported_order, "derivative order above supported cap");
    if (order == 0) return power(x, e);
    double factor = 1.0;
    for (int k = 0; k < order; ++k) factor *= (e - k);
    if (factor == 0.0) return 0.0; // term is annihilated, no domain question left
    return factor * power(x, e - order);
}

double eval(const SparsePolynomial& p, double x) {
    const auto& exps = p.exponents().values();
    const auto& coef = p.coefficients();
    double acc = 0.0;
    for (std::size_t i = 0; i < coef.size(); ++i) {
        if (coef[i] == 0.0) continue;
        acc += coef[i] * power(x, exps[i]);
    }
    return acc;
}

double eval_derivative(const SparsePolynomial& p, double x, int order) {
    if (order < 0)
        throw Error(errc::unsupported_order, "derivative order must be >= 0");
    if (order > kMaxDerivativeOrder)
        throw Error(errc::unsupported_order, "derivative order above supported cap");
    if (order == 0) return eval(p, x);
    const auto& exps = p.exponents().values();
    const auto& coef = p.coefficients();
    double acc = 0.0;
    for (std::size_t i = 0; i < coef.size(); ++i) {
        if (coef[i] == 0.0) continue;
        acc += coef[i] * power_derivative(x, exps[i], order);
    }
    return acc;
}

double sup_norm_on_grid(const SparsePolynomial& p, double lo, double hi, int points) {
    if (points < 2)
        throw Error(errc::config_error, "grid needs at least two points");
    double best = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
        best = std::max(best, std::fabs(eval(p, x)));
    }
    return best;
}

} // namespace sparsecert
