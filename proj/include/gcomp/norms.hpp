#pragma once

#include <limits>
#include <memory>
#include <string>

#include "gcomp/rng.hpp"
#include "gcomp/types.hpp"

namespace gcomp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Weighted ℓp norm on R^m: ‖x‖ = ‖diag(w)·x‖_p with w > 0, p ∈ [1, ∞].
/// Plain ℓp has unit weights; euclidean_scaled(c) is ℓ₂ with every weight c.
class NormSpec {
public:
    static NormSpec lp(double p, int dim);
    static NormSpec weighted_lp(double p, Vector weights);
    static NormSpec euclidean_scaled(double scale, int dim);
    static NormSpec l1(int dim) { return lp(1.0, dim); }
    static NormSpec l2(int dim) { return lp(2.0, dim); }
    static NormSpec linf(int dim) { return lp(kInfinity, dim); }

    [[nodiscard]] double p() const noexcept { return p_; }
    [[nodiscard]] int dim() const noexcept { return static_cast<int>(weights_.size()); }
    [[nodiscard]] const Vector& weights() const noexcept { return weights_; }
    [[nodiscard]] bool unit_weights() const;
    [[nodiscard]] bool uniform_weights() const;
    [[nodiscard]] bool is_l1() const noexcept { return p_ == 1.0; }
    [[nodiscard]] bool is_l2() const noexcept { return p_ == 2.0; }
    [[nodiscard]] bool is_linf() const noexcept { return p_ == kInfinity; }

    /// Conjugate exponent with reciprocal weights.
    [[nodiscard]] NormSpec dual() const;

    /// Same exponent, unit weights.
    [[nodiscard]] NormSpec unweighted() const { return lp(p_, dim()); }

    /// sup{‖x‖ : ‖x‖₂ ≤ 1}, the Lipschitz constant with respect to ℓ₂.
    [[nodiscard]] double euclidean_lipschitz() const;

    /// sup{‖x‖₂ : ‖x‖ ≤ 1}.
    [[nodiscard]] double euclidean_radius() const { return dual().euclidean_lipschitz(); }

    [[nodiscard]] std::string describe() const;

    friend bool operator==(const NormSpec& a, const NormSpec& b) {
        return a.p_ == b.p_ && a.weights_.size() == b.weights_.size() && a.weights_ == b.weights_;
    }

private:
    NormSpec(double p, Vector weights) : p_(p), weights_(std::move(weights)) {}

    double p_;
    Vector weights_;
};

[[nodiscard]] double norm_eval(const NormSpec& spec, const Vector& v);

/// sup{⟨v,x⟩ : ‖x‖_spec ≤ 1}.
[[nodiscard]] double dual_norm_eval(const NormSpec& spec, const Vector& v);

/// g with ⟨g,v⟩ = ‖v‖ and ‖g‖_dual ≤ 1. Kinks of ℓ∞ resolve to the smallest
/// index; zero coordinates of ℓ₁ and the origin get zero components.
[[nodiscard]] Vector subgradient(const NormSpec& spec, const Vector& v);

/// Randomized check that ‖x‖ ≤ ‖x‖₂ on `trials` unit vectors (plus the exact
/// ℓ₂-Lipschitz constant). Throws NormDominationViolation.
void validate_dominated_by_euclidean(const NormSpec& spec, const SeedStream& stream, int trials = 10000);

enum class LipschitzKind { Norm, Linear, DistanceToPoint, NegatedNorm, CenteredAbs };

/// A real function on R^d with a known ℓ₂-Lipschitz constant.
class LipschitzFn {
public:
    /// x ↦ scale·‖x‖.
    static LipschitzFn norm(NormSpec spec, double scale = 1.0);
    /// Norm rescaled so its Lipschitz constant is exactly `lipschitz`.
    static LipschitzFn norm_with_constant(NormSpec spec, double lipschitz);
    static LipschitzFn negated_norm(NormSpec spec, double scale = 1.0);
    static LipschitzFn linear(Vector a);
    /// x ↦ ‖x − c‖₂.
    static LipschitzFn distance_to_point(Vector center);
    /// x ↦ |F(x) − μ|.
    static LipschitzFn centered_abs(LipschitzFn inner, double mu);

    [[nodiscard]] LipschitzKind kind() const noexcept { return kind_; }
    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] double lipschitz_constant() const noexcept { return lipschitz_; }
    [[nodiscard]] const NormSpec& norm_spec() const { return *norm_; }
    [[nodiscard]] double scale() const noexcept { return scale_; }
    [[nodiscard]] const Vector& vector_param() const noexcept { return vec_; }
    [[nodiscard]] double mu() const noexcept { return mu_; }
    [[nodiscard]] const LipschitzFn& inner() const { return *inner_; }

    [[nodiscard]] double operator()(const Vector& x) const;
    /// Gradient where it exists, a subgradient at kinks.
    [[nodiscard]] Vector gradient(const Vector& x) const;

    /// True for scale·‖·‖₂ up to uniform weights, where sphere extremes of
    /// f∘T reduce to singular values.
    [[nodiscard]] bool is_euclidean_norm() const;

    [[nodiscard]] std::string describe() const;

private:
    LipschitzFn() = default;

    LipschitzKind kind_ = LipschitzKind::Linear;
    int dim_ = 0;
    double lipschitz_ = 0.0;
    double scale_ = 1.0;
    double mu_ = 0.0;
    std::shared_ptr<const NormSpec> norm_;
    Vector vec_;
    std::shared_ptr<const LipschitzFn> inner_;
};

[[nodiscard]] inline double lipschitz_eval(const LipschitzFn& fn, const Vector& v) { return fn(v); }

}  // namespace gcomp
