#pragma once

#include <string>

#include "gcomp/montecarlo.hpp"
#include "gcomp/norms.hpp"
#include "gcomp/rng.hpp"
#include "gcomp/types.hpp"

namespace gcomp {

/// Random operator T_ω = u ∘ G ∘ v : E = R^m → F = R^D.
/// Rows of v_matrix (n×m) are the functionals x*_i; columns of u_matrix (D×d)
/// are the vectors f_k; G is an n×d standard Gaussian core.
struct RandomOperatorSpec {
    Matrix v_matrix;
    Matrix u_matrix;
    NormSpec domain_norm;
    NormSpec range_norm;

    [[nodiscard]] int n() const { return static_cast<int>(v_matrix.rows()); }
    [[nodiscard]] int m() const { return static_cast<int>(v_matrix.cols()); }
    [[nodiscard]] int d() const { return static_cast<int>(u_matrix.cols()); }
    [[nodiscard]] int D() const { return static_cast<int>(u_matrix.rows()); }

    void validate() const;
};

/// ε₂(x*_1..x*_n) = ‖v : E → ℓ₂ⁿ‖.
[[nodiscard]] double epsilon2_domain(const Matrix& v_matrix, const NormSpec& domain_norm);

/// ε₂(f_1..f_d) = ‖u : ℓ₂ᵈ → F‖.
[[nodiscard]] double epsilon2_range(const Matrix& u_matrix, const NormSpec& range_norm);

/// Largest singular value.
[[nodiscard]] double spectral_norm(const Matrix& m);

/// u·Gᵀ·v for a fresh Gaussian core G drawn from the stream.
[[nodiscard]] Matrix realize(const RandomOperatorSpec& spec, const SeedStream& stream);
[[nodiscard]] Matrix realize_with_core(const RandomOperatorSpec& spec, const Matrix& core);

enum class ExtremeMode { Min, Max };

enum class ExtremizeMethod {
    Automatic,  // exact route when one exists, else net oracle (dim ≤ 3), else heuristic
    Heuristic,  // multi-start projected subgradient only
    NetOracle,  // Lipschitz branch-and-bound net, domain dim ≤ 3
};

struct ExtremizeOptions {
    ExtremizeMethod method = ExtremizeMethod::Automatic;
    int starts = 32;
    int iterations = 500;
    double net_tolerance = 1e-3;
    unsigned workers = 1;
    SeedStream stream{};
};

struct ExtremizationResult {
    double value = 0.0;
    Vector argpoint;
    ExtremeMode mode = ExtremeMode::Max;
    bool certified = false;
    bool converged = true;
    std::string route;
};

/// min or max of ‖T x‖_range over {‖x‖_domain = 1}.
[[nodiscard]] ExtremizationResult sphere_extremize(const Matrix& T, const NormSpec& domain_norm,
                                                   const NormSpec& range_norm, ExtremeMode mode,
                                                   const ExtremizeOptions& options = {});

[[nodiscard]] std::string to_string(ExtremeMode mode);

}  // namespace gcomp
