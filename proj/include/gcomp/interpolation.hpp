#pragma once

#include <iosfwd>
#include <vector>

#include "gcomp/family.hpp"
#include "gcomp/inequalities.hpp"
#include "gcomp/montecarlo.hpp"
#include "gcomp/norms.hpp"

namespace gcomp {

struct InterpolationConfig {
    IndexedGaussianFamily famX;
    IndexedGaussianFamily famY;
    IndexedGaussianFamily famG;
    std::vector<LipschitzFn> functions;  // one per index, or one shared
    std::vector<double> theta_grid;
    double beta = 20.0;

    void validate() const;
};

/// Evenly spaced grid on [0, π/2] with `points` entries.
[[nodiscard]] std::vector<double> uniform_theta_grid(int points);

struct InterpolatedSample {
    Matrix y;  // N×d: cos θ·X_i + sin θ·Y_i
    Vector z;  // N:   sin θ·g_i
};

[[nodiscard]] InterpolatedSample interpolate_sample(double theta, const Matrix& x_draw, const Matrix& y_draw,
                                                    const Matrix& g_draw);

/// β⁻¹·log Σ exp(β·αᵢ), evaluated with a max shift.
[[nodiscard]] double smoothed_max(const Vector& alpha, double beta);

/// Softmax weights p = ∇ smoothed_max.
[[nodiscard]] Vector softmax(const Vector& alpha, double beta);

/// β(diag(p) − p pᵀ).
[[nodiscard]] Matrix smoothed_max_hessian(const Vector& alpha, double beta);

struct HCurve {
    std::vector<double> theta;
    std::vector<MCEstimate> values;      // h(θ_k)
    std::vector<MCEstimate> increments;  // h(θ_{k+1}) − h(θ_k), paired draws
    bool hypotheses_satisfied = true;
};

/// h(θ) = E G(F₁(y₁)+z₁, …, F_N(y_N)+z_N) along Z(θ), G = smoothed_max.
/// The same (X, Y, g) draw is reused at every grid point.
[[nodiscard]] HCurve h_curve(const InterpolationConfig& config, const MCOptions& options, const SeedStream& stream);

struct EndpointEstimates {
    MCEstimate start;           // E G(F(X))
    MCEstimate end;             // E G(F(Y) + g)
    MCEstimate unsmoothed_end;  // E max{F(Y) + g}
};

/// Direct estimates of the curve endpoints from a fresh stream.
[[nodiscard]] EndpointEstimates endpoint_estimates(const InterpolationConfig& config, const MCOptions& options,
                                                   const SeedStream& stream);

/// CSV with header `theta,mean,std_error`.
void write_h_curve_csv(const HCurve& curve, std::ostream& out);

}  // namespace gcomp
