#include "gcomp/family.hpp"

#include <cmath>
#include <utility>

#include <unsupported/Eigen/KroneckerProduct>

#include "gcomp/error.hpp"

namespace gcomp {

namespace {

std::vector<std::string> default_labels(int n, std::vector<std::string> labels) {
    if (labels.empty()) {
        labels.reserve(n);
        for (int i = 0; i < n; ++i) {
            labels.push_back("t" + std::to_string(i));
        }
    }
    require(static_cast<int>(labels.size()) == n, ErrorCode::DimensionMismatch,
            "label count does not match the number of index points");
    return labels;
}

void require_finite_symmetric(const Matrix& m, const char* what) {
    require(m.rows() == m.cols(), ErrorCode::DimensionMismatch, std::string(what) + " must be square");
    require(m.allFinite(), ErrorCode::NonFiniteEntries, std::string(what) + " has non-finite entries");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    require((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale, ErrorCode::NotPSD,
            std::string(what) + " is not symmetric");
}

}  // namespace

IndexedGaussianFamily IndexedGaussianFamily::from_kernel(Matrix kernel, int value_dim,
                                                         std::vector<std::string> labels) {
    require(value_dim > 0, ErrorCode::InvalidArgument, "value_dim must be positive");
    require_finite_symmetric(kernel, "kernel");
    require(kernel.rows() > 0, ErrorCode::EmptyIndexSet, "family has no index points");
    IndexedGaussianFamily family;
    family.value_dim_ = value_dim;
    family.labels_ = default_labels(static_cast<int>(kernel.rows()), std::move(labels));
    family.kernel_ = std::move(kernel);
    return family;
}

IndexedGaussianFamily IndexedGaussianFamily::from_blocks(Matrix block_cov, int value_dim,
                                                         std::vector<std::string> labels) {
    require(value_dim > 0, ErrorCode::InvalidArgument, "value_dim must be positive");
    require_finite_symmetric(block_cov, "block covariance");
    require(block_cov.rows() > 0, ErrorCode::EmptyIndexSet, "family has no index points");
    require(block_cov.rows() % value_dim == 0, ErrorCode::DimensionMismatch,
            "block covariance size is not a multiple of value_dim");
    IndexedGaussianFamily family;
    family.value_dim_ = value_dim;
    family.labels_ = default_labels(static_cast<int>(block_cov.rows() / value_dim), std::move(labels));
    family.blocks_ = std::move(block_cov);
    return family;
}

Matrix IndexedGaussianFamily::cross_cov(int t, int s) const {
    require(t >= 0 && t < size() && s >= 0 && s < size(), ErrorCode::IndexMismatch, "index out of range");
    const int d = value_dim_;
    if (kernel_) {
        return (*kernel_)(t, s) * Matrix::Identity(d, d);
    }
    return blocks_->block(static_cast<Eigen::Index>(t) * d, static_cast<Eigen::Index>(s) * d, d, d);
}

Matrix IndexedGaussianFamily::block_covariance() const {
    if (blocks_) {
        return *blocks_;
    }
    return Eigen::kroneckerProduct(*kernel_, Matrix::Identity(value_dim_, value_dim_));
}

IndexedGaussianFamily IndexedGaussianFamily::scaled(double factor) const {
    IndexedGaussianFamily out = *this;
    if (out.kernel_) {
        *out.kernel_ *= factor;
    } else {
        *out.blocks_ *= factor;
    }
    return out;
}

Matrix pivoted_cholesky(const Matrix& cov) {
    const Eigen::Index n = cov.rows();
    require(cov.cols() == n, ErrorCode::DimensionMismatch, "covariance must be square");
    if (n == 0) {
        return Matrix(0, 0);
    }
    const double max_diag = cov.diagonal().maxCoeff();
    const double max_abs = cov.cwiseAbs().maxCoeff();
    require(max_diag >= 0.0, ErrorCode::NotPSD, "negative diagonal entry");
    if (max_abs == 0.0) {
        return Matrix(n, 0);
    }
    require(max_diag > 0.0, ErrorCode::NotPSD, "zero diagonal with nonzero off-diagonal entries");

    const double pivot_tol = 1e-10 * max_diag;
    const double check_tol = 1e-8 * max_diag;

    Matrix factor(n, n);
    Vector residual = cov.diagonal();
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    Eigen::Index rank = 0;
    for (; rank < n; ++rank) {
        Eigen::Index pivot = -1;
        double best = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!used[static_cast<std::size_t>(i)] && residual[i] > best) {
                best = residual[i];
                pivot = i;
            }
        }
        if (best <= pivot_tol) {
            break;
        }
        Vector column = cov.col(pivot);
        if (rank > 0) {
            column.noalias() -= factor.leftCols(rank) * factor.row(pivot).head(rank).transpose();
        }
        column /= std::sqrt(best);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (used[static_cast<std::size_t>(i)]) {
                column[i] = 0.0;
            }
        }
        column[pivot] = std::sqrt(best);
        factor.col(rank) = column;
        residual -= column.cwiseAbs2();
        used[static_cast<std::size_t>(pivot)] = true;
    }
    factor.conservativeResize(n, rank);

    // The discarded Schur complement must itself look like a (tiny) PSD matrix.
    const Matrix remainder = cov - factor * factor.transpose();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (used[static_cast<std::size_t>(i)]) {
            continue;
        }
        require(remainder(i, i) >= -check_tol, ErrorCode::NotPSD,
                "covariance has a negative pivot beyond tolerance");
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!used[static_cast<std::size_t>(j)]) {
                require(std::abs(remainder(i, j)) <= check_tol, ErrorCode::NotPSD,
                        "covariance is not positive semidefinite");
            }
        }
    }
    return factor;
}

FamilySampler::FamilySampler(const IndexedGaussianFamily& family)
    : size_(family.size()), value_dim_(family.value_dim()), kronecker_(family.has_kernel()) {
    factor_ = kronecker_ ? pivoted_cholesky(family.kernel()) : pivoted_cholesky(family.block_covariance());
}

Matrix FamilySampler::draw(Engine& engine) const {
    const Eigen::Index rank = factor_.cols();
    if (kronecker_) {
        const Matrix white = engine.normal_matrix(rank, value_dim_);
        return factor_ * white;
    }
    const Vector joint = factor_ * engine.normal_vector(rank);
    Matrix out(size_, value_dim_);
    for (int i = 0; i < size_; ++i) {
        out.row(i) = joint.segment(static_cast<Eigen::Index>(i) * value_dim_, value_dim_).transpose();
    }
    return out;
}

Matrix sample_family(const IndexedGaussianFamily& family, const SeedStream& stream) {
    FamilySampler sampler(family);
    Engine engine = stream.engine();
    return sampler.draw(engine);
}

namespace {

void validate_points(const std::vector<Vector>& points) {
    require(!points.empty(), ErrorCode::EmptyIndexSet, "index set is empty");
    const Eigen::Index n = points.front().size();
    for (const auto& p : points) {
        require(p.size() == n, ErrorCode::DimensionMismatch, "index points have different dimensions");
        require(p.allFinite(), ErrorCode::NonFiniteEntries, "index point has non-finite coordinates");
    }
}

std::vector<std::string> point_labels(const std::vector<Vector>& points) {
    std::vector<std::string> labels;
    labels.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        labels.push_back("x" + std::to_string(i));
    }
    return labels;
}

}  // namespace

IndexedGaussianFamily build_sphere_family(const std::vector<Vector>& points, int value_dim) {
    validate_points(points);
    const auto n = static_cast<Eigen::Index>(points.size());
    Matrix kernel(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            kernel(i, j) = kernel(j, i) = points[i].dot(points[j]);
        }
    }
    return IndexedGaussianFamily::from_kernel(std::move(kernel), value_dim, point_labels(points));
}

IndexedGaussianFamily build_scaled_family(const std::vector<Vector>& points, int value_dim) {
    validate_points(points);
    const auto n = static_cast<Eigen::Index>(points.size());
    Vector norms(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        norms[i] = points[i].norm();
    }
    Matrix kernel = norms * norms.transpose();
    return IndexedGaussianFamily::from_kernel(std::move(kernel), value_dim, point_labels(points));
}

}  // namespace gcomp
