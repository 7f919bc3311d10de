#pragma once

#include <stdexcept>
#include <string>

namespace maba {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Twist matrix cannot be factored as B D A (names the violated constraint).
struct DegenerateTwist : Error {
    using Error::Error;
};

// Model parameters outside the validated domain (names the field).
struct InvalidParams : Error {
    using Error::Error;
};

// A rational kernel was evaluated inside the pole guard.
struct PoleAtCoincidence : Error {
    using Error::Error;
};

// Requested size exceeds a configured cap.
struct CapExceeded : Error {
    using Error::Error;
};

// The requested determinant form is undefined for these arguments.
struct FormUndefined : Error {
    using Error::Error;
};

// An on-shell-only formula was called with parameters that do not
// satisfy the Bethe equations to tolerance.
struct NotOnShell : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    using Error::Error;
};

struct SingularJacobian : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace maba
