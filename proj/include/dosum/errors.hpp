#pragma once

#include <stdexcept>
#include <string>

namespace dosum {

// Parameter validation failures. The CLI maps these to exit code 2.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NotOddPrime : ValidationError {
    using ValidationError::ValidationError;
};
struct ExcludedK : ValidationError {
    using ValidationError::ValidationError;
};
struct TNotDividingD : ValidationError {
    using ValidationError::ValidationError;
};
struct JNotDividingN : ValidationError {
    using ValidationError::ValidationError;
};
struct TooLarge : ValidationError {
    using ValidationError::ValidationError;
};

// A requested closed-form table does not exist for these parameters.
// The CLI maps this (and BudgetExceeded) to exit code 3 / SKIPPED.
struct InapplicableCase : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mixing cyclotomic integers over different primes.
struct PrimeMismatch : std::logic_error {
    using std::logic_error::logic_error;
};

// An exact identity that must hold by construction failed; always a bug.
struct InternalCheckFailure : std::logic_error {
    using std::logic_error::logic_error;
};
struct NonIntegerWeight : InternalCheckFailure {
    using InternalCheckFailure::InternalCheckFailure;
};

}  // namespace dosum
