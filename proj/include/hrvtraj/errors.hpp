#pragma once

#include <stdexcept>
#include <string>

namespace hrvtraj {

/// Malformed or inconsistent user input (files, flags, config fields).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The interpolation system for an interval vector is singular or too
/// ill-conditioned to trust.
class DegenerateIntervalError : public std::runtime_error {
public:
    DegenerateIntervalError(const std::string& what, double condition)
        : std::runtime_error(what), condition_(condition) {}

    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// No feasible individual was found by the evolutionary search.
class OptimizationFailed : public std::runtime_error {
public:
    OptimizationFailed(const std::string& what, double best_violation)
        : std::runtime_error(what), best_violation_(best_violation) {}

    double best_violation() const noexcept { return best_violation_; }

private:
    double best_violation_;
};

}  // namespace hrvtraj
