#pragma once

#include <cstddef>
#include <vector>

#include "sparsecert/errors.hpp"

namespace sparsecert {

/// Strictly increasing real exponents defining the sparse power family
/// {x^a : a in exponents}. Construction rejects unsorted or duplicate
/// input so the exponent-to-coefficient correspondence stays unambiguous.
class ExponentVector {
public:
    explicit ExponentVector(std::vector<double> exponents);

    std::size_t size() const noexcept { return exps_.size(); }
    int order() const noexcept { return static_cast<int>(exps_.size()) - 1; }
    double operator[](std::size_t i) const { return exps_[i]; }
    const std::vector<double>& values() const noexcept { return exps_; }

    double min_exponent() const noexcept { return exps_.front(); }
    double max_exponent() const noexcept { return exps_.back(); }

    bool all_nonnegative_integers() const noexcept;
    bool has_negative() const noexcept { return exps_.front() < 0.0; }
    bool has_fractional() const noexcept;

    bool operator==(const ExponentVector& o) const noexcept { return exps_ == o.exps_; }

private:
    std::vector<double> exps_;
};

/// Domain of validity: a closed interval [a,b] or the half line [0,inf).
struct Interval {
    enum class Kind { closed, halfline };

    Kind kind = Kind::closed;
    double a = 0.0;
    double b = 1.0; // ignored for halfline

    static Interval closed(double a, double b);
    static Interval halfline();

    bool is_halfline() const noexcept { return kind == Kind::halfline; }
    bool contains(double x) const noexcept {
        return is_halfline() ? x >= 0.0 : (x >= a && x <= b);
    }
    double left() const noexcept { return is_halfline() ? 0.0 : a; }

    // Throws DomainError when the exponent set is not admissible on this
    // interval (negative exponents need a > 0, fractional ones need a >= 0).
    void require_admissible(const ExponentVector& exps) const;
};

/// Linear combination sum_i coeffs[i] * x^{exps[i]}.
class SparsePolynomial {
public:
    SparsePolynomial(ExponentVector exps, std::vector<double> coeffs);

    const ExponentVector& exponents() const noexcept { return exps_; }
    const std::vector<double>& coefficients() const noexcept { return coeffs_; }
    std::size_t size() const noexcept { return coeffs_.size(); }
    int order() const noexcept { return exps_.order(); }
    double leading_coefficient() const noexcept { return coeffs_.back(); }

    bool is_zero(double tol = 0.0) const noexcept;

    SparsePolynomial& operator*=(double s);
    SparsePolynomial operator+(const SparsePolynomial& o) const; // same exponent vector
    SparsePolynomial operator-(const SparsePolynomial& o) const;

private:
    ExponentVector exps_;
    std::vector<double> coeffs_;
};

/// Evaluate x^e with the 0^0 := 1 convention. Throws DomainError outside
/// the admissible domain (x = 0 with e < 0, x < 0 with fractional e).
double power(double x, double e);

// order-th derivative of x -> x^e (order <= kMaxDerivativeOrder).
double power_derivative(double x, double e, int order);

inline constexpr int kMaxDerivativeOrder = 2;

double eval(const SparsePolynomial& p, double x);
double eval_derivative(const SparsePolynomial& p, double x, int order);

/// Max of |eval| over a uniform grid (endpoints included).
double sup_norm_on_grid(const SparsePolynomial& p, double lo, double hi, int points);

} // namespace sparsecert
