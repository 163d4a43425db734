#ifndef ACOPORO_ERRORS_HPP
#define ACOPORO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace acoporo
{

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input data (mapped to the config exit code by the CLI).
struct NonPhysical : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct GridTooCoarse : Error {
    using Error::Error;
};

// Numerical failures while building traces.
struct NumericalError : Error {
    using Error::Error;
};
struct SingularSystem : NumericalError {
    using NumericalError::NumericalError;
};
struct RootNotFound : NumericalError {
    using NumericalError::NumericalError;
};
struct ConvergenceFailure : NumericalError {
    using NumericalError::NumericalError;
};
struct DomainError : NumericalError {
    using NumericalError::NumericalError;
};
struct NonFiniteIntegrand : NumericalError {
    using NumericalError::NumericalError;
};

// Raised by the Laplace-domain reference when it cannot certify its own value.
struct NotConverged : Error {
    using Error::Error;
};

} // namespace acoporo

#endif
