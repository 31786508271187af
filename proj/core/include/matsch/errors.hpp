#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace matsch {

/// Argument outside the admissible range of an operation (pole of Gamma,
/// order below -1, kernel singular at the origin, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A series or quadrature did not reach the requested tolerance. Carries the
/// best value obtained so far and an error estimate for it.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double partial, double est_error)
        : std::runtime_error(what), partial_(partial), est_error_(est_error) {}

    [[nodiscard]] double partial() const noexcept { return partial_; }
    [[nodiscard]] double est_error() const noexcept { return est_error_; }

private:
    double partial_;
    double est_error_;
};

/// An integral that should be finite (total mass, L2 norm, ...) is not.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data violates a structural requirement (duplicate points, ragged
/// coordinate rows, mismatched sample counts).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Duplicate point pair found while building a point set.
class DuplicatePointError : public ValidationError {
public:
    DuplicatePointError(std::size_t first, std::size_t second)
        : ValidationError("duplicate points at rows " + std::to_string(first) + " and " +
                          std::to_string(second)),
          first_(first), second_(second) {}

    [[nodiscard]] std::size_t first() const noexcept { return first_; }
    [[nodiscard]] std::size_t second() const noexcept { return second_; }

private:
    std::size_t first_;
    std::size_t second_;
};

/// A profile handed to the norm-bound machinery is not nonnegative, not
/// monotone decreasing, or not normalized at the origin.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Linear system could not be factorized.
class SingularityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace matsch
