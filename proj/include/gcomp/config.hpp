#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gcomp/family.hpp"
#include "gcomp/format.hpp"
#include "gcomp/norms.hpp"
#include "gcomp/operators.hpp"

namespace gcomp {

inline constexpr std::string_view kExperiments[] = {"gordon_chevet", "theorem1", "corollary1", "corollary2",
                                                    "poincare",      "slepian_check", "h_curve", "dvoretzky"};

[[nodiscard]] bool is_experiment(std::string_view name);

/// Validated experiment configuration. `settings` holds the experiment
/// specific keys with every default filled in, in a fixed key order, so the
/// echo can be fed back to parse_config unchanged.
struct ExperimentConfig {
    std::string experiment;
    std::uint64_t seed = 0;
    std::uint64_t samples = 100000;
    double confidence = 0.95;
    Json settings = Json::object();

    /// Full config as it would be written back to disk.
    [[nodiscard]] Json echo() const;
};

/// Parses JSON text. `experiment` names the subcommand; the text may repeat
/// it under the `experiment` key, in which case the two must agree.
[[nodiscard]] ExperimentConfig parse_config_text(std::string_view text, std::string_view experiment = {});

[[nodiscard]] ExperimentConfig parse_config(const std::filesystem::path& path, std::string_view experiment = {});

// Decoders for the value grammar shared by several experiments. Each throws
// InvalidValue naming `field` when the value is malformed.
[[nodiscard]] NormSpec decode_norm(const Json& value, int dim, const std::string& field);
[[nodiscard]] LipschitzFn decode_function(const Json& value, int dim, const std::string& field);
[[nodiscard]] std::vector<Vector> decode_points(const Json& value, const std::string& field);
[[nodiscard]] Matrix decode_matrix(const Json& value, const std::string& field);
[[nodiscard]] IndexedGaussianFamily decode_family(const Json& value, const std::string& field);

}  // namespace gcomp
