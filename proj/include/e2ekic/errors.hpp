#pragma once

#include <stdexcept>
#include <string>

namespace e2ekic {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad scenario/config input (non-positive alpha, empty lists, malformed JSON, ...).
struct ConfigError : Error {
    using Error::Error;
};

// Raised when the adaptive rounds policy hits a node whose decoding threshold
// cannot be met by any number of rounds.  Carries the offending node index.
struct FeasibilityError : Error {
    FeasibilityError(int node_, const std::string& what_)
        : Error(what_), node(node_) {}
    int node;
};

// The fully expanded cancellation sum grows as (i-2)^(m+1) terms; callers set
// a budget so a typo in i or m fails fast instead of allocating forever.
struct TermBudgetError : Error {
    using Error::Error;
};

// Cross-checks that should never fire (e.g. the two Monte Carlo sample routes
// disagreeing).  Indicates a bug in this library, not in caller input.
struct InternalError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace e2ekic
