#pragma once

#include <stdexcept>
#include <string>

namespace instancecut {

/// Malformed input: bad dimensions, broken invariants, unreadable files.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An assignment or move violates a hard constraint of the joint problem.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A solver refused or failed to run (e.g. instance too large for enumeration).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace instancecut
