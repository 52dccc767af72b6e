#pragma once

#include <stdexcept>
#include <string>

namespace rabilab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numeric failure: the requested evaluation cannot be performed to the
/// promised accuracy with the given cutoffs, truncation or argument range.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Argument outside the supported domain of a special function.
class DomainError : public NumericError {
public:
    using NumericError::NumericError;
};

/// A truncated series did not meet its tail bound within the allowed terms.
class SeriesNotConverged : public NumericError {
public:
    using NumericError::NumericError;
};

/// Fock truncation too small for the requested displacement.
class TruncationTooSmall : public NumericError {
public:
    using NumericError::NumericError;
};

/// A harmonic or normal-ordering cutoff leaves a tail above tolerance.
class CutoffInsufficient : public NumericError {
public:
    using NumericError::NumericError;
};

/// The displaced-basis evaluator was called with alpha = 0.
class AlphaZero : public Error {
public:
    using Error::Error;
};

/// The propagator could not meet the norm tolerance.
class StepLimitExceeded : public NumericError {
public:
    using NumericError::NumericError;
};

/// A log-log fit had non-positive or non-finite data.
class DegenerateFit : public NumericError {
public:
    using NumericError::NumericError;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Invalid argument: a documented precondition does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace rabilab
