#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gcomp/rng.hpp"
#include "gcomp/types.hpp"

namespace gcomp {

/// Finite family {X_t} of R^d-valued centered Gaussian vectors, described by
/// its cross-covariances E[X_t ⊗ X_s].
///
/// Two representations are kept: a scalar kernel K with E[X_t ⊗ X_s] = K(t,s)·Id_d
/// (every family built from points is of this form), or an explicit
/// (N·d)×(N·d) block covariance. PSD validation happens when a sampler is built,
/// so families that violate it can still be inspected by the hypothesis checks.
class IndexedGaussianFamily {
public:
    static IndexedGaussianFamily from_kernel(Matrix kernel, int value_dim,
                                             std::vector<std::string> labels = {});
    static IndexedGaussianFamily from_blocks(Matrix block_cov, int value_dim,
                                             std::vector<std::string> labels = {});

    [[nodiscard]] int size() const noexcept { return static_cast<int>(labels_.size()); }
    [[nodiscard]] int value_dim() const noexcept { return value_dim_; }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
    [[nodiscard]] bool has_kernel() const noexcept { return kernel_.has_value(); }
    [[nodiscard]] const Matrix& kernel() const { return *kernel_; }

    /// E[X_t ⊗ X_s] as a d×d matrix.
    [[nodiscard]] Matrix cross_cov(int t, int s) const;

    /// The full (N·d)×(N·d) block matrix (materialized on demand).
    [[nodiscard]] Matrix block_covariance() const;

    /// Family with every cross-covariance multiplied by factor.
    [[nodiscard]] IndexedGaussianFamily scaled(double factor) const;

private:
    IndexedGaussianFamily() = default;

    int value_dim_ = 0;
    std::vector<std::string> labels_;
    std::optional<Matrix> kernel_;
    std::optional<Matrix> blocks_;
};

/// Low-rank factor L (rows in original order) with S ≈ L·Lᵀ, from a
/// diagonally pivoted Cholesky that stops once every remaining pivot is at
/// most 1e-10·max diag(S). Throws NotPSD if the discarded Schur complement
/// is not negligible.
[[nodiscard]] Matrix pivoted_cholesky(const Matrix& cov);

/// Joint sampler for one family. Construction validates PSD; draw() is const
/// and safe to call concurrently.
class FamilySampler {
public:
    explicit FamilySampler(const IndexedGaussianFamily& family);

    /// One joint draw: row i is X_{t_i} ∈ R^d.
    [[nodiscard]] Matrix draw(Engine& engine) const;

    [[nodiscard]] int size() const noexcept { return size_; }
    [[nodiscard]] int value_dim() const noexcept { return value_dim_; }
    [[nodiscard]] Eigen::Index rank() const noexcept { return factor_.cols(); }

private:
    int size_;
    int value_dim_;
    bool kronecker_;
    Matrix factor_;
};

/// One joint draw of the family.
[[nodiscard]] Matrix sample_family(const IndexedGaussianFamily& family, const SeedStream& stream);

/// X_x = Σ xⁱ X_i over x ∈ points: cross_cov(x,y) = ⟨x,y⟩·Id_d.
[[nodiscard]] IndexedGaussianFamily build_sphere_family(const std::vector<Vector>& points, int value_dim);

/// Y_x = ‖x‖₂·X: cross_cov(x,y) = ‖x‖₂‖y‖₂·Id_d.
[[nodiscard]] IndexedGaussianFamily build_scaled_family(const std::vector<Vector>& points, int value_dim);

}  // namespace gcomp
