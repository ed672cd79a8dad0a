#pragma once

#include <stdexcept>
#include <string>

namespace sidefd {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Two grid functions (or a grid function and a coefficient table) live on
/// incompatible grids.
class GridMismatchError : public Error {
    using Error::Error;
};

/// A jump-measure moment does not exist on the requested interval.
class NonIntegrableError : public Error {
    using Error::Error;
};

/// Adaptive quadrature failed to reach the requested tolerance.
class QuadratureError : public Error {
    using Error::Error;
};

class InvalidParamsError : public Error {
    using Error::Error;
};

/// tau is not an integer multiple of the path's fine step.
class ResolutionMismatchError : public Error {
    using Error::Error;
};

class IndivisibleFactorError : public Error {
    using Error::Error;
};

/// The explicit scheme's step-size bound is violated.
class CflViolationError : public Error {
    using Error::Error;
};

/// varsigma(delta) >= kappa, so no step-size bound exists.
class DeltaTooLargeError : public Error {
    using Error::Error;
};

class SingularMatrixError : public Error {
    using Error::Error;
};

class UnknownCellError : public Error {
    using Error::Error;
};

class TimeNotOnGridError : public Error {
    using Error::Error;
};

class ConfigError : public Error {
    using Error::Error;
};

class IoError : public Error {
    using Error::Error;
};

} // namespace sidefd
