#include "gcomp/norms.hpp"

#include <cmath>
#include <sstream>

#include "gcomp/error.hpp"

namespace gcomp {

namespace {

void check_dim(const NormSpec& spec, const Vector& v) {
    require(v.size() == spec.dim(), ErrorCode::DimensionMismatch,
            "vector of size " + std::to_string(v.size()) + " for a norm on R^" + std::to_string(spec.dim()));
}

double conjugate(double p) {
    if (p == 1.0) {
        return kInfinity;
    }
    if (p == kInfinity) {
        return 1.0;
    }
    return p / (p - 1.0);
}

double plain_lp(const Vector& y, double p) {
    if (p == 1.0) {
        return y.lpNorm<1>();
    }
    if (p == 2.0) {
        return y.norm();
    }
    if (p == kInfinity) {
        return y.size() == 0 ? 0.0 : y.lpNorm<Eigen::Infinity>();
    }
    // Scale by the max entry to avoid overflow in |y|^p.
    const double top = y.cwiseAbs().maxCoeff();
    if (top == 0.0) {
        return 0.0;
    }
    double s = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        s += std::pow(std::abs(y[i]) / top, p);
    }
    return top * std::pow(s, 1.0 / p);
}

std::string p_string(double p) {
    if (p == kInfinity) {
        return "inf";
    }
    std::ostringstream os;
    os << p;
    return os.str();
}

}  // namespace

NormSpec NormSpec::lp(double p, int dim) {
    require(dim > 0, ErrorCode::InvalidArgument, "norm dimension must be positive");
    return weighted_lp(p, Vector::Ones(dim));
}

NormSpec NormSpec::weighted_lp(double p, Vector weights) {
    require(p >= 1.0, ErrorCode::UnsupportedNorm, "ℓp needs p ≥ 1");
    require(weights.size() > 0, ErrorCode::InvalidArgument, "norm dimension must be positive");
    require(weights.allFinite() && (weights.array() > 0.0).all(), ErrorCode::InvalidArgument,
            "norm weights must be finite and positive");
    return NormSpec(p, std::move(weights));
}

NormSpec NormSpec::euclidean_scaled(double scale, int dim) {
    require(scale > 0.0 && std::isfinite(scale), ErrorCode::InvalidArgument, "scale must be positive");
    require(dim > 0, ErrorCode::InvalidArgument, "norm dimension must be positive");
    return weighted_lp(2.0, Vector::Constant(dim, scale));
}

bool NormSpec::unit_weights() const {
    return (weights_.array() == 1.0).all();
}

bool NormSpec::uniform_weights() const {
    return (weights_.array() == weights_[0]).all();
}

NormSpec NormSpec::dual() const {
    return NormSpec(conjugate(p_), weights_.cwiseInverse());
}

double NormSpec::euclidean_lipschitz() const {
    if (p_ >= 2.0) {
        return weights_.maxCoeff();
    }
    // Hölder: ‖Dx‖_p ≤ ‖w‖_r‖x‖₂ with 1/r = 1/p − 1/2, attained.
    const double r = 1.0 / (1.0 / p_ - 0.5);
    return plain_lp(weights_, r);
}

std::string NormSpec::describe() const {
    std::ostringstream os;
    os << "l" << p_string(p_) << "^" << dim();
    if (!unit_weights()) {
        os << " weighted";
    }
    return os.str();
}

double norm_eval(const NormSpec& spec, const Vector& v) {
    check_dim(spec, v);
    return plain_lp(spec.weights().cwiseProduct(v), spec.p());
}

double dual_norm_eval(const NormSpec& spec, const Vector& v) {
    check_dim(spec, v);
    return norm_eval(spec.dual(), v);
}

Vector subgradient(const NormSpec& spec, const Vector& v) {
    check_dim(spec, v);
    const Vector y = spec.weights().cwiseProduct(v);
    Vector g = Vector::Zero(y.size());
    const double value = plain_lp(y, spec.p());
    if (value == 0.0) {
        return g;
    }
    const double p = spec.p();
    if (p == 1.0) {
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            g[i] = y[i] > 0.0 ? 1.0 : (y[i] < 0.0 ? -1.0 : 0.0);
        }
    } else if (p == 2.0) {
        g = y / value;
    } else if (p == kInfinity) {
        Eigen::Index arg = 0;
        for (Eigen::Index i = 1; i < y.size(); ++i) {
            if (std::abs(y[i]) > std::abs(y[arg])) {
                arg = i;
            }
        }
        g[arg] = y[arg] > 0.0 ? 1.0 : -1.0;
    } else {
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double a = std::abs(y[i]) / value;
            g[i] = std::copysign(std::pow(a, p - 1.0), y[i]);
        }
    }
    return spec.weights().cwiseProduct(g);
}

void validate_dominated_by_euclidean(const NormSpec& spec, const SeedStream& stream, int trials) {
    constexpr double kSlack = 1e-12;
    require(spec.euclidean_lipschitz() <= 1.0 + kSlack, ErrorCode::NormDominationViolation,
            spec.describe() + " exceeds the Euclidean norm (sup over the unit sphere is " +
                std::to_string(spec.euclidean_lipschitz()) + ")");
    Engine engine = stream.engine();
    for (int k = 0; k < trials; ++k) {
        Vector x = engine.normal_vector(spec.dim());
        const double len = x.norm();
        if (len == 0.0) {
            continue;
        }
        x /= len;
        require(norm_eval(spec, x) <= 1.0 + kSlack, ErrorCode::NormDominationViolation,
                spec.describe() + " exceeds the Euclidean norm on a sampled unit vector");
    }
}

// ---------------------------------------------------------------------------

LipschitzFn LipschitzFn::norm(NormSpec spec, double scale) {
    require(std::isfinite(scale) && scale >= 0.0, ErrorCode::InvalidArgument, "norm scale must be ≥ 0");
    LipschitzFn fn;
    fn.kind_ = LipschitzKind::Norm;
    fn.dim_ = spec.dim();
    fn.scale_ = scale;
    fn.lipschitz_ = scale * spec.euclidean_lipschitz();
    fn.norm_ = std::make_shared<const NormSpec>(std::move(spec));
    return fn;
}

LipschitzFn LipschitzFn::norm_with_constant(NormSpec spec, double lipschitz) {
    require(std::isfinite(lipschitz) && lipschitz >= 0.0, ErrorCode::InvalidArgument,
            "Lipschitz constant must be ≥ 0");
    const double base = spec.euclidean_lipschitz();
    LipschitzFn fn = norm(std::move(spec), lipschitz / base);
    fn.lipschitz_ = lipschitz;
    return fn;
}

LipschitzFn LipschitzFn::negated_norm(NormSpec spec, double scale) {
    LipschitzFn fn = norm(std::move(spec), scale);
    fn.kind_ = LipschitzKind::NegatedNorm;
    return fn;
}

LipschitzFn LipschitzFn::linear(Vector a) {
    require(a.size() > 0 && a.allFinite(), ErrorCode::InvalidArgument, "linear functional needs finite coefficients");
    LipschitzFn fn;
    fn.kind_ = LipschitzKind::Linear;
    fn.dim_ = static_cast<int>(a.size());
    fn.lipschitz_ = a.norm();
    fn.vec_ = std::move(a);
    return fn;
}

LipschitzFn LipschitzFn::distance_to_point(Vector center) {
    require(center.size() > 0 && center.allFinite(), ErrorCode::InvalidArgument, "center must be finite");
    LipschitzFn fn;
    fn.kind_ = LipschitzKind::DistanceToPoint;
    fn.dim_ = static_cast<int>(center.size());
    fn.lipschitz_ = 1.0;
    fn.vec_ = std::move(center);
    return fn;
}

LipschitzFn LipschitzFn::centered_abs(LipschitzFn inner, double mu) {
    require(std::isfinite(mu), ErrorCode::InvalidArgument, "centering constant must be finite");
    LipschitzFn fn;
    fn.kind_ = LipschitzKind::CenteredAbs;
    fn.dim_ = inner.dim_;
    fn.lipschitz_ = inner.lipschitz_;
    fn.mu_ = mu;
    fn.inner_ = std::make_shared<const LipschitzFn>(std::move(inner));
    return fn;
}

double LipschitzFn::operator()(const Vector& x) const {
    require(x.size() == dim_, ErrorCode::DimensionMismatch,
            "function on R^" + std::to_string(dim_) + " evaluated at a vector of size " + std::to_string(x.size()));
    switch (kind_) {
        case LipschitzKind::Norm:
            return scale_ * norm_eval(*norm_, x);
        case LipschitzKind::NegatedNorm:
            return -scale_ * norm_eval(*norm_, x);
        case LipschitzKind::Linear:
            return vec_.dot(x);
        case LipschitzKind::DistanceToPoint:
            return (x - vec_).norm();
        case LipschitzKind::CenteredAbs:
            return std::abs((*inner_)(x) - mu_);
    }
    return 0.0;
}

Vector LipschitzFn::gradient(const Vector& x) const {
    require(x.size() == dim_, ErrorCode::DimensionMismatch, "gradient dimension mismatch");
    switch (kind_) {
        case LipschitzKind::Norm:
            return scale_ * subgradient(*norm_, x);
        case LipschitzKind::NegatedNorm:
            return -scale_ * subgradient(*norm_, x);
        case LipschitzKind::Linear:
            return vec_;
        case LipschitzKind::DistanceToPoint: {
            const Vector diff = x - vec_;
            const double len = diff.norm();
            return len == 0.0 ? Vector(Vector::Zero(dim_)) : Vector(diff / len);
        }
        case LipschitzKind::CenteredAbs: {
            const double centered = (*inner_)(x) - mu_;
            if (centered == 0.0) {
                return Vector::Zero(dim_);
            }
            return (centered > 0.0 ? 1.0 : -1.0) * inner_->gradient(x);
        }
    }
    return Vector::Zero(dim_);
}

bool LipschitzFn::is_euclidean_norm() const {
    return kind_ == LipschitzKind::Norm && norm_->is_l2() && norm_->uniform_weights();
}

std::string LipschitzFn::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case LipschitzKind::Norm:
            os << scale_ << "*" << norm_->describe();
            break;
        case LipschitzKind::NegatedNorm:
            os << "-" << scale_ << "*" << norm_->describe();
            break;
        case LipschitzKind::Linear:
            os << "linear^" << dim_;
            break;
        case LipschitzKind::DistanceToPoint:
            os << "distance^" << dim_;
            break;
        case LipschitzKind::CenteredAbs:
            os << "|" << inner_->describe() << " - " << mu_ << "|";
            break;
    }
    return os.str();
}

}  // namespace gcomp
