#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ssnmf {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NonFiniteEntry : public Error {
public:
    using Error::Error;
};

class NegativeEntry : public Error {
public:
    using Error::Error;
};

class ZeroColumn : public Error {
public:
    explicit ZeroColumn(std::size_t column)
        : Error("column " + std::to_string(column) + " has zero l1 norm"), column_(column) {}
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

class InvalidIndexSet : public Error {
public:
    using Error::Error;
};

class BadParams : public Error {
public:
    using Error::Error;
};

class InfeasiblePoint : public Error {
public:
    using Error::Error;
};

class NodeBudgetExceeded : public Error {
public:
    using Error::Error;
};

class TooManySupports : public Error {
public:
    using Error::Error;
};

class NotNormalized : public Error {
public:
    using Error::Error;
};

/// Raised when the pipeline cannot reach the requested residual, which means
/// the recovery assumptions do not hold for the input.
class Infeasible : public Error {
public:
    using Error::Error;
};

class NotACover : public Error {
public:
    using Error::Error;
};

class TooManySubsets : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class GeometryMismatch : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace ssnmf
