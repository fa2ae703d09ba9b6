#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gcomp {

enum class ErrorCode {
    NotPSD,
    DimensionMismatch,
    EmptyIndexSet,
    NonFiniteSample,
    UnsupportedNorm,
    DimensionTooLargeForExact,
    NonFiniteEntries,
    IndexMismatch,
    PointOutsideBall,
    PointNotOnSphere,
    LipschitzViolation,
    NormDominationViolation,
    GradientUnavailable,
    DegenerateRegime,
    InvalidArgument,
    ParseError,
    UnknownKey,
    InvalidValue,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; the code drives CLI exit statuses.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& message) {
    if (!condition) {
        throw Error(code, message);
    }
}

}  // namespace gcomp
