#pragma once

#include <stdexcept>
#include <string>

namespace oamsim {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rejected argument or violated type invariant.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Unstable or degenerate cavity geometry.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Non-finite result, quadrature non-convergence, non-finite objective.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Content pushed outside the configured (p_max, l_max) truncation.
class TruncationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace oamsim
