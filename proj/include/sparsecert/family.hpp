#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "sparsecert/types.hpp"

namespace sparsecert {

/// A family {f_0, ..., f_n} of real functions playing the role of a
/// (candidate) Tchebycheff system. Built-in kinds:
///   powers(alpha)        f_i(x) = x^{alpha_i}
///   exponentials(beta)   f_i(x) = exp(beta_i x)
///   cauchy(shift)        f_i(x) = 1 / (x + shift_i)
///   scaled(base, r)      f_i(x) = r(x) * base_i(x),  r > 0
///   composed(base, g)    f_i(x) = base_i(g(x)),      g strictly increasing
///
/// Derivatives are analytic for the first three kinds; scaled/composed
/// fall back to central finite differences of the member functions.
class FunctionFamily {
public:
    enum class Kind { powers, exponentials, cauchy, scaled, composed };

    static FunctionFamily powers(ExponentVector exps);
    static FunctionFamily exponentials(std::vector<double> rates);
    static FunctionFamily cauchy(std::vector<double> shifts);
    static FunctionFamily scaled(FunctionFamily base, std::function<double(double)> weight);
    static FunctionFamily composed(FunctionFamily base, std::function<double(double)> map);

    Kind kind() const noexcept { return kind_; }
    int order() const noexcept { return order_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(order_) + 1; }

    double member(int i, double x) const;
    double member_derivative(int i, double x, int order) const;

    bool admissible(double x) const;

    /// Exponent vector of a powers family (ShapeError for other kinds).
    const ExponentVector& power_exponents() const;

    /// The subfamily {f_lo, ..., f_hi}; exposes the column-eliminated
    /// systems used by the half-line constructions.
    FunctionFamily subfamily(int lo, int hi) const;

private:
    FunctionFamily() = default;

    Kind kind_ = Kind::powers;
    int order_ = 0;
    std::shared_ptr<const ExponentVector> exps_;   // powers
    std::vector<double> params_;                   // rates or shifts
    std::shared_ptr<const FunctionFamily> base_;   // scaled / composed
    std::function<double(double)> fn_;             // weight or map
};

/// Nondecreasing node tuple; repeated values encode confluent rows
/// (value, first, second derivative). Multiplicity cap is 3.
class PointTuple {
public:
    explicit PointTuple(std::vector<double> points);

    std::size_t size() const noexcept { return pts_.size(); }
    double operator[](std::size_t i) const { return pts_[i]; }
    const std::vector<double>& values() const noexcept { return pts_; }

    bool all_distinct() const noexcept;
    int max_multiplicity() const noexcept;

    /// (value, multiplicity) groups in increasing order.
    std::vector<std::pair<double, int>> groups() const;

    static constexpr int kMultiplicityCap = 3;

private:
    std::vector<double> pts_;
};

} // namespace sparsecert
