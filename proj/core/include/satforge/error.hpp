#pragma once

#include <stdexcept>
#include <string>

namespace satforge {

/// Malformed input data (DIMACS text, graph records, manifests, label files).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A generator could not produce an instance within its retry budget.
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The solver ran out of its conflict budget. Never converted into a label.
class IndeterminateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace satforge
