#pragma once

#include <stdexcept>
#include <string>

namespace cypipe {

/// Base class for all cypipe errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent configuration (bad keys, types, constraint
/// violations). Maps to process exit code 1.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Input data fails a model validation (pressure profile bounds, initial
/// condition compatibility). Maps to process exit code 1.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

/// Requested flux value lies outside the invertible branch. Signals
/// nonexistence of the steady solution at that flux level.
class OutOfRangeError : public Error {
public:
    OutOfRangeError(double zeta, double limit, const std::string& what)
        : Error(what), zeta(zeta), limit(limit) {}
    double zeta;
    double limit;
};

/// Steady solve requested but the existence verdict is None.
/// Maps to process exit code 3.
class NoSolutionError : public Error {
public:
    explicit NoSolutionError(const std::string& what) : Error(what) {}
};

/// Newton iteration failed to converge. Maps to process exit code 2.
class NewtonFailureError : public Error {
public:
    NewtonFailureError(int iterations, double residual, const std::string& what)
        : Error(what), iterations(iterations), residual(residual) {}
    int iterations;
    double residual;
};

}  // namespace cypipe
