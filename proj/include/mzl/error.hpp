#pragma once
#include <stdexcept>
#include <string>

namespace mzl {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text / JSON / flag values.
struct ParseError : Error {
    using Error::Error;
};

// Arguments outside an operation's domain (wrong dimension, s below the
// abscissa, negative coordinates, ...).
struct DomainError : Error {
    using Error::Error;
};

// Work estimate exceeds the configured budget.
struct BudgetError : Error {
    using Error::Error;
};

// A numeric routine could not reach its target accuracy.
struct ConvergenceError : Error {
    using Error::Error;
};

}  // namespace mzl
