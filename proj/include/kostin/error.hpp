#pragma once

#include <stdexcept>
#include <string>

namespace kostin {

/// Violated precondition or invariant on a physical or numerical input.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Two fields that must share a grid (or be distinct in time) do not.
class GridMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The trajectory integrator produced a non-positive width.
class IntegratorFailure : public std::runtime_error {
public:
    IntegratorFailure(const std::string& what, double time)
        : std::runtime_error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Raised by the direct solver when the packet leaves its admissible region.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double time)
        : std::runtime_error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

}  // namespace kostin
