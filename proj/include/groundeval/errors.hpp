#pragma once

#include <stdexcept>
#include <string>

namespace groundeval {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input file could not be parsed (bad line, bad JSON, bad field).
struct ParseError : Error {
    using Error::Error;
};

// Data violates a schema invariant.
struct ValidationError : Error {
    using Error::Error;
};

// Bad run configuration (missing inputs, incompatible flags, stale snapshot).
struct ConfigError : Error {
    using Error::Error;
};

// A cache key already holds a different value.
struct CacheConflictError : Error {
    using Error::Error;
};

struct BackendError : Error {
    using Error::Error;
};

// Retryable backend failure (timeouts, 5xx, connection resets).
struct TransientBackendError : BackendError {
    using BackendError::BackendError;
};

// Non-retryable backend failure; the request itself is wrong.
struct MalformedRequestError : BackendError {
    using BackendError::BackendError;
};

}  // namespace groundeval
