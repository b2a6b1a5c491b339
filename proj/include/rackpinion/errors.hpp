#pragma once

#include <stdexcept>
#include <string>

namespace rackpinion {

/// Input outside the domain of a formula (non-positive scale, modulus > 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// K(m) at m = 1 and similar logarithmic singularities.
class DivergenceError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Load ratio w >= 1: the stable and saddle fixed points have merged.
class NoLockedRegime : public DomainError {
public:
    using DomainError::DomainError;
};

/// Weak-dissipation lock-in window is empty at this load.
class NoLockIn : public DomainError {
public:
    using DomainError::DomainError;
};

/// Raised by skipping-only formulas when the parameters are in the locked-in phase.
class LockedInSignal : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Root bracket does not straddle a sign change / regime change.
class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Trajectory too short for the requested time average.
class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or incomplete device configuration.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace rackpinion
