#pragma once

#include <stdexcept>
#include <string>

namespace stabrad {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

/// Two eigenvalues closer than the simplicity tolerance.
class RepeatedEigenvalueError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Eigenvector matrix is numerically singular.
class DefectiveMatrixError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Requested eigenvalue index is outside the feasible set.
class FeasibilityError : public Error {
public:
    using Error::Error;
};

/// The nominal matrix admits no sparse first-order shift at all.
class InfeasibleAtNominalError : public FeasibilityError {
public:
    using FeasibilityError::FeasibilityError;
};

class NonTerminationError : public Error {
public:
    using Error::Error;
};

class TooManyFreeEntriesError : public Error {
public:
    using Error::Error;
};

class NoUpperBoundError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace stabrad
