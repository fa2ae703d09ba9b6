#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gcomp/family.hpp"
#include "gcomp/rng.hpp"
#include "gcomp/types.hpp"

namespace gcomp {

inline constexpr double kDefaultConfidence = 0.95;

/// Worker count for the estimation engines. Results never depend on it.
struct Execution {
    unsigned workers = 1;
};

/// Runs body(i) for i in [0, count) on up to `workers` threads, each thread
/// taking a contiguous block of indices.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

/// Two-sided normal quantile z with P(|Z| ≤ z) = confidence.
[[nodiscard]] double z_value(double confidence);

/// E‖X‖₂ for a canonical Gaussian in R^m: √2·Γ((m+1)/2)/Γ(m/2).
[[nodiscard]] double chi_mean(int m);

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    double confidence = kDefaultConfidence;

    [[nodiscard]] double half_width() const { return z_value(confidence) * std_error; }
    [[nodiscard]] double lower() const { return mean - half_width(); }
    [[nodiscard]] double upper() const { return mean + half_width(); }
};

/// Sum in fixed pairwise-tree order over the index sequence.
[[nodiscard]] double pairwise_sum(std::span<const double> values);

/// Mean and standard error of per-sample values, reduced in counter order.
[[nodiscard]] MCEstimate summarize(std::span<const double> values, double confidence = kDefaultConfidence);

struct MCOptions {
    std::size_t samples = 100000;
    double confidence = kDefaultConfidence;
    Execution exec{};
};

/// Per-sample kernel: fills `out` with the sample's values for each tracked
/// expectation. `engine` is seeded from the sample's own counter.
using SampleKernel = std::function<void(Engine& engine, std::span<double> out)>;

/// Estimates `outputs` expectations jointly (the same draw feeds every
/// output). Returns one MCEstimate per output, plus the raw per-sample values
/// when `raw` is non-null (row-major: sample × output).
std::vector<MCEstimate> estimate_joint(std::size_t outputs, const MCOptions& options, const SeedStream& stream,
                                       const SampleKernel& kernel, std::vector<double>* raw = nullptr);

/// Single expectation E[value(engine)].
MCEstimate estimate_scalar(const MCOptions& options, const SeedStream& stream,
                           const std::function<double(Engine&)>& value);

using FamilyFunctional = std::function<double(const Matrix& sample)>;

/// E[functional(sample)] where sample is one joint draw of the family.
MCEstimate mc_estimate(const FamilyFunctional& functional, const IndexedGaussianFamily& family,
                       const MCOptions& options, const SeedStream& stream);

/// E max_{x∈A} Σ xⁱ gᵢ for standard Gaussian g.
MCEstimate expected_max_g(const std::vector<Vector>& points, const MCOptions& options, const SeedStream& stream);

}  // namespace gcomp
