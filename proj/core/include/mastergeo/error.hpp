#pragma once

#include <stdexcept>
#include <string>

namespace mastergeo {

/// Malformed input: bad dimensions, invalid distributions, bad config fields.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Evaluation outside a function's mathematical domain (e.g. log of zero).
class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A numerical procedure failed on otherwise valid input.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonConvergenceError : public NumericError {
public:
    NonConvergenceError(const std::string& what, double residual)
        : NumericError(what + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class RankDeficientModelError : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace mastergeo
