#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace perispec {

enum class ErrorKind {
    kDimensionMismatch,
    kNonSquare,
    kNoConvergence,
    kInvalidArgument,
    kPrecondition,
    kVerificationFailure,
    kNotAPreserver,
    kUnsupported,
    kMalformedInput,
};

inline std::string_view error_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::kDimensionMismatch: return "dimension_mismatch";
        case ErrorKind::kNonSquare: return "non_square";
        case ErrorKind::kNoConvergence: return "no_convergence";
        case ErrorKind::kInvalidArgument: return "invalid_argument";
        case ErrorKind::kPrecondition: return "precondition_violated";
        case ErrorKind::kVerificationFailure: return "internal_verification_failure";
        case ErrorKind::kNotAPreserver: return "not_a_preserver";
        case ErrorKind::kUnsupported: return "unsupported";
        case ErrorKind::kMalformedInput: return "malformed_input";
    }
    return "unknown";
}

/// Single exception type for the library; `kind()` is the machine-readable part.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(error_code(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace perispec
