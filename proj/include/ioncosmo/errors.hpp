#pragma once

#include <stdexcept>
#include <string>

namespace ioncosmo {

// Error categories. Values are stable: the C API exposes them 1:1 as status
// codes, so reorder only with a major version bump.
enum class ErrorCode : int {
    InvalidArgument = 1,
    Parse = 2,
    Validation = 3,
    NoConvergence = 4,
    DegeneratePositions = 5,
    NegativeFrequencySquared = 6,
    NonConstantBoundary = 7,
    ToleranceNotMet = 8,
    Collapse = 9,
    IonCollision = 10,
    TruncationTooSmall = 11,
    NotNormalized = 12,
    DimensionMismatch = 13,
    Io = 14,
    Internal = 15,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
    if (!condition) fail(code, message);
}

} // namespace ioncosmo
