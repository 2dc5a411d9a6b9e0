#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sparsecert {

// Stable machine-readable failure codes, also used by the CLI error channel.
enum class errc {
    domain_error,
    unsupported_order,
    shape_error,
    config_error,
    singular_system,
    degenerate_determinant,
    index_too_large,
    construction_failed,
    identically_zero,
    not_strictly_positive,
    bad_leading_coefficient,
    newton_divergence,
    tail_negative,
    negative_somewhere,
    too_many_zeros,
    exponent_mismatch,
    infeasible,
    recovery_failed,
    not_dense,
    parse_error
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    errc code() const noexcept { return code_; }
    const char* code_name() const noexcept { return errc_name(code_); }

private:
    errc code_;
};

// f(witness) = value <= 0 at a point where strict positivity was required.
class NotStrictlyPositiveError : public Error {
public:
    NotStrictlyPositiveError(double witness, double value)
        : Error(errc::not_strictly_positive,
                "polynomial is not strictly positive at x = " + std::to_string(witness)),
          witness_(witness), value_(value) {}

    double witness() const noexcept { return witness_; }
    double value() const noexcept { return value_; }

private:
    double witness_;
    double value_;
};

class NegativeSomewhereError : public Error {
public:
    NegativeSomewhereError(double witness, double value)
        : Error(errc::negative_somewhere,
                "polynomial is negative at x = " + std::to_string(witness)),
          witness_(witness), value_(value) {}

    double witness() const noexcept { return witness_; }
    double value() const noexcept { return value_; }

private:
    double witness_;
    double value_;
};

class NewtonDivergenceError : public Error {
public:
    NewtonDivergenceError(std::string what, std::vector<double> last_iterate, double residual)
        : Error(errc::newton_divergence, std::move(what)),
          last_iterate_(std::move(last_iterate)), residual_(residual) {}

    const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
    double residual() const noexcept { return residual_; }

private:
    std::vector<double> last_iterate_;
    double residual_;
};

class RecoveryFailedError : public Error {
public:
    RecoveryFailedError(std::string what, double best_residual)
        : Error(errc::recovery_failed, std::move(what)), best_residual_(best_residual) {}

    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

} // namespace sparsecert
