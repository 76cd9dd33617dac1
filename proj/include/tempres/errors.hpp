// errors.hpp -- exception taxonomy shared by all tempres components.
//
// Two families: ValidationError for rejected inputs (maps to CLI exit code 2)
// and NumericError for algorithms that fail to converge or hit singular
// configurations (exit code 3).

#pragma once

#include <stdexcept>
#include <string>

namespace tempres {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class UnstableSystem : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NonPositiveParameter : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NonSpdCost : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DimensionMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NonIntegerGrid : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class BudgetTooSmall : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DegeneratePilot : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvalidArgument : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class QuadratureFailure : public NumericError {
public:
    using NumericError::NumericError;
};

class SingularLyapunov : public NumericError {
public:
    using NumericError::NumericError;
};

class DivergentTail : public NumericError {
public:
    using NumericError::NumericError;
};

class IllConditionedFit : public NumericError {
public:
    using NumericError::NumericError;
};

class NoRootInInterval : public NumericError {
public:
    using NumericError::NumericError;
};

class IoFailure : public Error {
public:
    using Error::Error;
};

} // namespace tempres
