#pragma once

#include <string>

#include "gcomp/config.hpp"
#include "gcomp/dvoretzky.hpp"
#include "gcomp/error.hpp"
#include "gcomp/format.hpp"
#include "gcomp/inequalities.hpp"
#include "gcomp/interpolation.hpp"

namespace gcomp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericError = 3;

struct RunOptions {
    Execution exec{};
    bool include_wall_time = true;
};

struct RunReport {
    Json document;   // schema, version, experiment, config, results, verdict_summary, wall_time
    int exit_code = kExitOk;
    // Optional CSV attachments (h_curve values, dvoretzky operator).
    std::string csv_path;
    std::string csv_content;

    [[nodiscard]] std::string dump() const { return dump_json(document); }
};

[[nodiscard]] Json to_json(const MCEstimate& e);
[[nodiscard]] Json to_json(const Quantity& q);
[[nodiscard]] Json to_json(const InequalityReport& r);
[[nodiscard]] Json to_json(const SlepianConditionReport& r);
[[nodiscard]] Json to_json(const SectionCertificate& c);

/// Operator matrix as CSV, one row per line.
[[nodiscard]] std::string matrix_csv(const Matrix& m);

/// Runs the configured checker and assembles the report. Library errors
/// propagate as gcomp::Error.
[[nodiscard]] RunReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// 2 for configuration and hypothesis errors, 3 for numeric failures.
[[nodiscard]] int exit_code_for(ErrorCode code);

}  // namespace gcomp
