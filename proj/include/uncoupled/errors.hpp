#pragma once

#include <stdexcept>
#include <string>

namespace uncoupled {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside a function's valid domain (e.g. KL generator outside (0,1)).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration or parameter value.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Mismatched matrix/vector dimensions.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Linear system could not be solved even after ridge regularization.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Objective became non-finite during iterative minimization.
class DivergenceError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Zero variance where a variance ratio is required.
class DegenerateVarianceError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class EmptyDataError : public Error {
public:
    using Error::Error;
};

} // namespace uncoupled
