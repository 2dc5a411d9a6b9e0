#include "sparsecert/family.hpp"

#include <algorithm>
#include <cmath>

namespace sparsecert {

FunctionFamily FunctionFamily::powers(ExponentVector exps) {
    FunctionFamily f;
    f.kind_ = Kind::powers;
    f.order_ = exps.order();
    f.exps_ = std::make_shared<ExponentVector>(std::move(exps));
    return f;
}

FunctionFamily FunctionFamily::exponentials(std::vector<double> rates) {
    for (std::size_t i = 0; i + 1 < rates.size(); ++i) {
        if (!(rates[i] < rates[i + 1]))
            throw Error(errc::shape_error, "exponential rates must be strictly increasing");
    }
    if (rates.empty())
        throw Error(errc::shape_error, "rate list must not be empty");
    FunctionFamily f;
    f.kind_ = Kind::exponentials;
    f.order_ = static_cast<int>(rates.size()) - 1;
    f.params_ = std::move(rates);
    return f;
}

FunctionFamily FunctionFamily::cauchy(std::vector<double> shifts) {
    for (std::size_t i = 0; i + 1 < shifts.size(); ++i) {
        if (!(shifts[i] < shifts[i + 1]))
            throw Error(errc::shape_error, "cauchy shifts must be strictly increasing");
    }
    if (shifts.empty())
        throw Error(errc::shape_error, "shift list must not be empty");
    FunctionFamily f;
    f.kind_ = Kind::cauchy;
    f.order_ = static_cast<int>(shifts.size()) - 1;
    f.params_ = std::move(shifts);
    return f;
}

FunctionFamily FunctionFamily::scaled(FunctionFamily base, std::function<double(double)> weight) {
    FunctionFamily f;
    f.kind_ = Kind::scaled;
    f.order_ = base.order();
    f.base_ = std::make_shared<FunctionFamily>(std::move(base));
    f.fn_ = std::move(weight);
    return f;
}

FunctionFamily FunctionFamily::composed(FunctionFamily base, std::function<double(double)> map) {
    FunctionFamily f;
    f.kind_ = Kind::composed;
    f.order_ = base.order();
    f.base_ = std::make_shared<FunctionFamily>(std::move(base));
    f.fn_ = std::move(map);
    return f;
}

double FunctionFamily::member(int i, double x) const {
    if (i < 0 || i > order_)
        throw Error(errc::shape_error, "family member index out of range");
    switch (kind_) {
        case Kind::powers:
            return power(x, (*exps_)[static_cast<std::size_t>(i)]);
        case Kind::exponentials:
            return std::exp(params_[static_cast<std::size_t>(i)] * x);
        case Kind::cauchy: {
            const double d = x + params_[static_cast<std::size_t>(i)];
            if (d == 0.0)
                throw Error(errc::domain_error, "cauchy member pole at this point");
            return 1.0 / d;
        }
        case Kind::scaled: {
            const double r = fn_(x);
            if (!(r > 0.0))
                throw Error(errc::domain_error, "scaling weight must be positive");
            return r * base_->member(i, x);
        }
        case Kind::composed:
            return base_->member(i, fn_(x));
    }
    throw Error(errc::shape_error, "unknown family kind");
}

double FunctionFamily::member_derivative(int i, double x, int order) const {
    if (order < 0 || order > kMaxDerivativeOrder)
        throw Error(errc::unsupported_order, "derivative order above supported cap");
    if (order == 0) return member(i, x);
    switch (kind_) {
        case Kind::powers:
            return power_derivative(x, (*exps_)[static_cast<std::size_t>(i)], order);
        case Kind::exponentials: {
            const double b = params_[static_cast<std::size_t>(i)];
            return std::pow(b, order) * std::exp(b * x);
        }
        case Kind::cauchy: {
            const double d = x + params_[static_cast<std::size_t>(i)];
            if (d == 0.0)
                throw Error(errc::domain_error, "cauchy member pole at this point");
            // d^k/dx^k (x+c)^-1 = (-1)^k k! (x+c)^{-k-1}
            double f = 1.0;
            for (int k = 1; k <= order; ++k) f *= -k;
            return f / std::pow(d, order + 1);
        }
        case Kind::scaled:
        case Kind::composed: {
            // generic handles carry no derivative information
            const double h = std::cbrt(2.2e-16) * (1.0 + std::fabs(x));
            if (order == 1)
                return (member(i, x + h) - member(i, x - h)) / (2.0 * h);
            return (member(i, x + h) - 2.0 * member(i, x) + member(i, x - h)) / (h * h);
        }
    }
    throw Error(errc::shape_error, "unknown family kind");
}

bool FunctionFamily::admissible(double x) const {
    switch (kind_) {
        case Kind::powers: {
            if (exps_->has_negative() && x <= 0.0) return false;
            if (exps_->has_fractional() && x < 0.0) return false;
            return true;
        }
        case Kind::exponentials:
            return true;
        case Kind::cauchy:
            for (double c : params_) {
                if (x + c == 0.0) return false;
            }
            return true;
        case Kind::scaled:
            return base_->admissible(x) && fn_(x) > 0.0;
        case Kind::composed:
            return base_->admissible(fn_(x));
    }
    return false;
}

const ExponentVector& FunctionFamily::power_exponents() const {
    if (kind_ != Kind::powers || !exps_)
        throw Error(errc::shape_error, "family is not a powers family");
    return *exps_;
}

FunctionFamily FunctionFamily::subfamily(int lo, int hi) const {
    if (lo < 0 || hi > order_ || lo > hi)
        throw Error(errc::shape_error, "subfamily range out of bounds");
    switch (kind_) {
        case Kind::powers: {
            std::vector<double> e(exps_->values().begin() + lo, exps_->values().begin() + hi + 1);
            return powers(ExponentVector(std::move(e)));
        }
        case Kind::exponentials: {
            std::vector<double> r(params_.begin() + lo, params_.begin() + hi + 1);
            return exponentials(std::move(r));
        }
        case Kind::cauchy: {
            std::vector<double> s(params_.begin() + lo, params_.begin() + hi + 1);
            return cauchy(std::move(s));
        }
        case Kind::scaled:
            return scaled(base_->subfamily(lo, hi), fn_);
        case Kind::composed:
            return composed(base_->subfamily(lo, hi), fn_);
    }
    throw Error(errc::shape_error, "unknown family kind");
}

PointTuple::PointTuple(std::vector<double> points) : pts_(std::move(points)) {
    if (pts_.empty())
        throw Error(errc::shape_error, "point tuple must not be empty");
    for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
        if (pts_[i] > pts_[i + 1])
            throw Error(errc::shape_error, "point tuple must be nondecreasing");
    }
    if (max_multiplicity() > kMultiplicityCap)
        throw Error(errc::unsupported_order, "point multiplicity above supported cap");
}

bool PointTuple::all_distinct() const noexcept {
    for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
        if (pts_[i] == pts_[i + 1]) return false;
    }
    return true;
}

int PointTuple::max_multiplicity() const noexcept {
    int best = 1, run = 1;
    for (std::size_t i = 1; i < pts_.size(); ++i) {
        run = (pts_[i] == pts_[i - 1]) ? run + 1 : 1;
        best = std::max(best, run);
    }
    return best;
}

std::vector<std::pair<double, int>> PointTuple::groups() const {
    std::vector<std::pair<double, int>> g;
    for (double x : pts_) {
        if (!g.empty() && g.back().first == x)
            ++g.back().second;
        else
            g.emplace_back(x, 1);
    }
    return g;
}

} // namespace sparsecert
