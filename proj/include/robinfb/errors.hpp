#pragma once

#include <stdexcept>
#include <string>

namespace robinfb {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Grid, mask and field sizes disagree.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A field holds NaN, infinite or (where forbidden) negative values.
class InvalidField : public Error {
public:
    using Error::Error;
};

/// Problem data violate a standing assumption (e.g. eps >= m, beta < 0).
class InvalidProblem : public Error {
public:
    using Error::Error;
};

/// Operation requires a geometry the inputs do not have (e.g. x2-symmetry).
class UnsupportedGeometry : public Error {
public:
    using Error::Error;
};

/// A test vector field does not vanish near the boundary of D.
class SupportViolation : public Error {
public:
    using Error::Error;
};

/// Exhaustive search requested on too many free cells.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// A certificate region (e.g. D_delta) is empty.
class InvalidRegion : public Error {
public:
    using Error::Error;
};

/// An internal invariant (descent, max-flow duality) failed.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

/// Iterative solver did not reach its tolerance.
class SolverFailure : public Error {
public:
    SolverFailure(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Configuration text could not be parsed or validated.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

} // namespace robinfb
