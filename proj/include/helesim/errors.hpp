#pragma once

#include <stdexcept>
#include <string>

namespace helesim {

// Error taxonomy. The CLI maps these onto process exit codes:
// config errors -> 1, numerical breakdown -> 2, check failure -> 3, I/O -> 4.

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A field contains NaN/Inf, or grids of the operands do not match.
struct InvalidFieldError : Error {
    using Error::Error;
};

/// Violated call contract (grid mismatch, non-Hermitian symbol with a
/// real-output request, bad argument ranges).
struct ContractError : Error {
    using Error::Error;
};

/// Operator-expansion term norms failed the geometric-decay monitor.
struct ExpansionDivergenceError : Error {
    using Error::Error;
};

/// Rayleigh-Taylor coefficient lost positivity (min a <= 0): the state is
/// outside the regime where the evolution is parabolic.
struct DegenerateStateError : Error {
    using Error::Error;
};

/// The elliptic strip solve did not reach its residual tolerance.
struct OracleFailureError : Error {
    using Error::Error;
};

struct PreconditionError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace helesim
