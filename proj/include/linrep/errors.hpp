#pragma once

#include <stdexcept>
#include <string>

namespace linrep {

/// Base class for all library errors. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad user input: invalid config fields, out-of-range parameters, size mismatches.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Multi-index component or node index out of range.
class IndexError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A constructed object would escape its domain (delta center outside the box, etc).
class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Requested resolution exceeds the configured memory or dense-diagnostics budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// CFL violated; assembly refuses rather than producing an unstable scheme.
class StabilityError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Non-finite values encountered during time marching or integration.
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// Characteristics-based solve requested at or beyond the caustic time.
class CausticError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Invariant broken inside the library itself.
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace linrep
