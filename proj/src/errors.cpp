#include "ioncosmo/errors.hpp"

namespace ioncosmo {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Validation: return "validation";
    case ErrorCode::NoConvergence: return "no_convergence";
    case ErrorCode::DegeneratePositions: return "degenerate_positions";
    case ErrorCode::NegativeFrequencySquared: return "negative_frequency_squared";
    case ErrorCode::NonConstantBoundary: return "non_constant_boundary";
    case ErrorCode::ToleranceNotMet: return "tolerance_not_met";
    case ErrorCode::Collapse: return "collapse";
    case ErrorCode::IonCollision: return "ion_collision";
    case ErrorCode::TruncationTooSmall: return "truncation_too_small";
    case ErrorCode::NotNormalized: return "not_normalized";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::Io: return "io";
    case ErrorCode::Internal: return "internal";
    }
    return "unknown";
}

} // namespace ioncosmo
