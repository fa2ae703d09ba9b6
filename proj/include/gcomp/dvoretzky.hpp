#pragma once

#include <string>

#include "gcomp/montecarlo.hpp"
#include "gcomp/norms.hpp"

namespace gcomp {

/// floor(t·(t − 2)) with t = εμ/L. Throws DegenerateRegime when t ≤ 2.
/// For 2 < t < 1 + √2 the result is 0 (no nontrivial section).
[[nodiscard]] int dvoretzky_dimension(double epsilon, double mu, double lipschitz);

/// Markov bound on the probability that a Gaussian T: ℓ₂ⁿ → R^N fails:
/// (L/(εμ))·(1 + √n).
[[nodiscard]] double failure_bound(double epsilon, double mu, double lipschitz, int n);

struct SectionCheck {
    double worst_deviation = 0.0;  // sup over the checked sphere points of |f(Tx) − μ|
    std::string tier;              // "exact_svd" or "sampled_ascent"
};

/// Worst deviation of f∘T from mu over S^{n−1}. Exact through singular values
/// for Euclidean-norm f; otherwise sphere sampling followed by subgradient
/// ascent from the worst samples.
[[nodiscard]] SectionCheck check_section_operator(const LipschitzFn& f, const Matrix& T, double mu,
                                                  const SeedStream& stream, int sphere_samples = 10000);

struct SectionSearchOptions {
    std::size_t mu_samples = 100000;
    int max_attempts = 50;
    int sphere_samples = 10000;
    double confidence = kDefaultConfidence;
    Execution exec{};
};

struct SectionCertificate {
    int ambient_dim = 0;  // N
    int section_dim = 0;  // n
    double epsilon = 0.0;
    MCEstimate mu;
    double lipschitz = 0.0;
    double failure_bound = 0.0;
    Matrix op;  // N×n
    double worst_deviation = 0.0;
    double threshold = 0.0;  // ε·μ + 4·stderr(μ)
    bool verified = false;
    int attempts_used = 0;
    int attempt_index = -1;  // index of the returned candidate
    std::string tier;
    SeedStream stream{};
};

/// Gaussian draw for attempt `attempt`: N×n with iid standard normal entries.
[[nodiscard]] Matrix section_candidate(int ambient_dim, int section_dim, const SeedStream& stream, int attempt);

/// Estimates μ = E f(X), fixes n, and rejection-samples Gaussian operators
/// until one keeps |f(Tx) − μ| ≤ εμ on the sphere. Returns the lowest-index
/// verified attempt; when every attempt fails, the best candidate comes back
/// with verified = false.
[[nodiscard]] SectionCertificate find_section(const LipschitzFn& f, double epsilon,
                                              const SectionSearchOptions& options, const SeedStream& stream);

}  // namespace gcomp
