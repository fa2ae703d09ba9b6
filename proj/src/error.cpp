#include "gcomp/error.hpp"

namespace gcomp {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotPSD: return "NotPSD";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::EmptyIndexSet: return "EmptyIndexSet";
        case ErrorCode::NonFiniteSample: return "NonFiniteSample";
        case ErrorCode::UnsupportedNorm: return "UnsupportedNorm";
        case ErrorCode::DimensionTooLargeForExact: return "DimensionTooLargeForExact";
        case ErrorCode::NonFiniteEntries: return "NonFiniteEntries";
        case ErrorCode::IndexMismatch: return "IndexMismatch";
        case ErrorCode::PointOutsideBall: return "PointOutsideBall";
        case ErrorCode::PointNotOnSphere: return "PointNotOnSphere";
        case ErrorCode::LipschitzViolation: return "LipschitzViolation";
        case ErrorCode::NormDominationViolation: return "NormDominationViolation";
        case ErrorCode::GradientUnavailable: return "GradientUnavailable";
        case ErrorCode::DegenerateRegime: return "DegenerateRegime";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::UnknownKey: return "UnknownKey";
        case ErrorCode::InvalidValue: return "InvalidValue";
    }
    return "Unknown";
}

}  // namespace gcomp
