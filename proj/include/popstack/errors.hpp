#pragma once

#include <stdexcept>
#include <string>

namespace popstack {

/// An input violated an operation's precondition (bad transform, too few
/// terms, out-of-range bound).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed input file or flag value.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Memory or time budget exhausted; carries the size that was attempted.
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& what, long attempted)
        : std::runtime_error(what + " (attempted N = " + std::to_string(attempted) + ")"),
          attempted_(attempted) {}
    [[nodiscard]] long attempted() const { return attempted_; }

private:
    long attempted_;
};

/// An iterative numerical method did not reach the requested precision.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace popstack
