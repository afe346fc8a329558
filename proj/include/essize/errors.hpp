#pragma once

#include <stdexcept>
#include <string>

namespace essize {

// Base for every error thrown by the library. The concrete class name is
// prefixed into the message so diagnostics (and the CLI's stderr line) name
// the failure category without RTTI games.
class Error : public std::runtime_error {
public:
    Error(const std::string& kind, const std::string& what)
        : std::runtime_error(kind + ": " + what) {}
};

// Invalid model parameters (rates, probabilities, counts out of domain).
class ParameterError : public Error {
public:
    explicit ParameterError(const std::string& what) : Error("ParameterError", what) {}
};

// A configured size/limit was exceeded (state-space cap, solver cap).
class CapacityError : public Error {
public:
    explicit CapacityError(const std::string& what) : Error("CapacityError", what) {}
};

// Mean demand at or above grid power: no stationary deficit distribution.
class StabilityError : public Error {
public:
    explicit StabilityError(const std::string& what) : Error("StabilityError", what) {}
};

// A numeric contract failed (eigen residual, count mismatch, non-convergence).
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error("NumericalError", what) {}
};

// Boundary system rank-deficient / unusable conditioning.
class ConditioningError : public Error {
public:
    explicit ConditioningError(const std::string& what) : Error("ConditioningError", what) {}
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("DomainError", what) {}
};

// Operation not supported for the given shape (engine/class-count mismatch).
class UnsupportedError : public Error {
public:
    explicit UnsupportedError(const std::string& what) : Error("UnsupportedError", what) {}
};

// No feasible answer exists for the requested target.
class InfeasibleError : public Error {
public:
    explicit InfeasibleError(const std::string& what) : Error("InfeasibleError", what) {}
};

// Statistical estimator misuse (e.g. standard error from one replication).
class EstimatorError : public Error {
public:
    explicit EstimatorError(const std::string& what) : Error("EstimatorError", what) {}
};

// Degenerate input that makes the stochastic process trivial/undefined.
class DegenerateError : public Error {
public:
    explicit DegenerateError(const std::string& what) : Error("DegenerateError", what) {}
};

// Malformed external input (JSON scenario files, tariff books).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error("ParseError", what) {}
};

}  // namespace essize
