#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pricing {

// Failure taxonomy shared by all modules. The CLI maps kinds to exit codes:
// Input/Unsupported/Degenerate/Assumption -> 2, CapExceeded -> 3, the rest -> 1.
enum class ErrorKind {
    Input,             // malformed or contract-violating input
    Unsupported,       // valuation class not handled by the chosen operation
    CapExceeded,       // instance exceeds a configured size guard
    Degenerate,        // all-zero market or empty benchmark allocation
    Inconsistent,      // internally inconsistent solution (e.g. allocated an unavailable good)
    Assumption,        // a stated market assumption does not hold
    ChargingViolation, // no index satisfies a guaranteed revenue threshold
    Internal,          // invariant breach that signals an implementation bug
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition) fail(kind, message);
}

} // namespace pricing
