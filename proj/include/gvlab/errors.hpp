#ifndef GVLAB_ERRORS_HPP
#define GVLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gvlab {

// Configuration / usage errors (CLI exit code 2)
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Data / input-file errors (CLI exit code 3)
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : DataError {
    using DataError::DataError;
};

struct ValidationError : DataError {
    using DataError::DataError;
};

struct CacheCorrupt : DataError {
    using DataError::DataError;
};

// Numerical / mathematical errors (CLI exit code 1)
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotADiscriminant : NumericalError {
    using NumericalError::NumericalError;
};

struct SquareDiscriminant : NumericalError {
    using NumericalError::NumericalError;
};

struct NotReduced : NumericalError {
    using NumericalError::NumericalError;
};

struct ParityViolation : NumericalError {
    using NumericalError::NumericalError;
};

struct NotHyperbolic : NumericalError {
    using NumericalError::NumericalError;
};

struct OverflowError : NumericalError {
    using NumericalError::NumericalError;
};

struct PoleAt : NumericalError {
    using NumericalError::NumericalError;
};

struct DomainError : NumericalError {
    using NumericalError::NumericalError;
};

struct PrecisionUnreachable : NumericalError {
    using NumericalError::NumericalError;
};

struct UnsupportedWeight : NumericalError {
    using NumericalError::NumericalError;
};

struct InsufficientCoefficients : NumericalError {
    using NumericalError::NumericalError;
};

struct NotFundamental : NumericalError {
    using NumericalError::NumericalError;
};

struct InvalidDiscriminant : NumericalError {
    using NumericalError::NumericalError;
};

struct OutOfLadder : NumericalError {
    using NumericalError::NumericalError;
};

} // namespace gvlab

#endif
