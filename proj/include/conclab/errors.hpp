#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace conclab {

/// Bad arguments or violated preconditions. The CLI maps this to exit code 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The admissible-dimension formula returned a value below 1: the requested
/// tolerance is too tight (or the space too small) for a nontrivial
/// submanifold.
class NoAdmissibleDimension : public UsageError {
public:
    using UsageError::UsageError;
};

/// A numerical guarantee failed at run time. The CLI maps this to exit code 1.
class CheckFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Random search exhausted its draw budget without an accepted isometry.
class MaxDrawsExceeded : public CheckFailure {
public:
    MaxDrawsExceeded(const std::string& what, std::int64_t draws, double best_deviation,
                     double tolerance, double success_floor)
        : CheckFailure(what),
          draws(draws),
          best_deviation(best_deviation),
          tolerance(tolerance),
          success_floor(success_floor) {}

    std::int64_t draws;
    double best_deviation;
    double tolerance;
    double success_floor;
};

}  // namespace conclab
