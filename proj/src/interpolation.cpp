#include "gcomp/interpolation.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "gcomp/error.hpp"
#include "gcomp/format.hpp"

namespace gcomp {

namespace {

const LipschitzFn& function_for(const std::vector<LipschitzFn>& functions, Eigen::Index i) {
    return functions.size() == 1 ? functions.front() : functions[static_cast<std::size_t>(i)];
}

Vector lipschitz_images(const std::vector<LipschitzFn>& functions, const Matrix& y, const Vector& z) {
    Vector alpha(y.rows());
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
        alpha[i] = function_for(functions, i)(y.row(i).transpose()) + z[i];
    }
    return alpha;
}

}  // namespace

void InterpolationConfig::validate() const {
    require(famX.size() == famY.size() && famX.size() == famG.size(), ErrorCode::IndexMismatch,
            "families have different index sets");
    require(famX.value_dim() == famY.value_dim() && famG.value_dim() == 1, ErrorCode::IndexMismatch,
            "family value dimensions are inconsistent");
    require(functions.size() == 1 || static_cast<int>(functions.size()) == famX.size(), ErrorCode::DimensionMismatch,
            "need one function per index or a single shared function");
    for (const auto& fn : functions) {
        require(fn.dim() == famX.value_dim(), ErrorCode::DimensionMismatch, "function dimension differs from d");
        require(fn.lipschitz_constant() <= 1.0 + 1e-12, ErrorCode::LipschitzViolation,
                fn.describe() + " is not 1-Lipschitz");
    }
    require(std::isfinite(beta) && beta > 0.0, ErrorCode::InvalidArgument, "beta must be finite and positive");
    require(theta_grid.size() >= 2, ErrorCode::InvalidArgument, "theta grid needs at least two points");
    require(theta_grid.front() == 0.0, ErrorCode::InvalidArgument, "theta grid must start at 0");
    require(std::abs(theta_grid.back() - std::numbers::pi / 2) <= 1e-12, ErrorCode::InvalidArgument,
            "theta grid must end at pi/2");
    for (std::size_t k = 1; k < theta_grid.size(); ++k) {
        require(theta_grid[k] > theta_grid[k - 1], ErrorCode::InvalidArgument, "theta grid must be increasing");
    }
}

std::vector<double> uniform_theta_grid(int points) {
    require(points >= 2, ErrorCode::InvalidArgument, "theta grid needs at least two points");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) {
        grid[static_cast<std::size_t>(k)] = (std::numbers::pi / 2) * k / (points - 1);
    }
    grid.back() = std::numbers::pi / 2;
    return grid;
}

InterpolatedSample interpolate_sample(double theta, const Matrix& x_draw, const Matrix& y_draw, const Matrix& g_draw) {
    require(x_draw.rows() == y_draw.rows() && x_draw.cols() == y_draw.cols(), ErrorCode::DimensionMismatch,
            "X and Y draws differ in shape");
    require(g_draw.rows() == x_draw.rows() && g_draw.cols() == 1, ErrorCode::DimensionMismatch,
            "g draw must be N×1");
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {c * x_draw + s * y_draw, s * g_draw.col(0)};
}

double smoothed_max(const Vector& alpha, double beta) {
    require(beta > 0.0, ErrorCode::InvalidArgument, "beta must be positive");
    require(alpha.size() > 0, ErrorCode::InvalidArgument, "empty argument");
    const double top = alpha.maxCoeff();
    const double sum = (beta * (alpha.array() - top)).exp().sum();
    return top + std::log(sum) / beta;
}

Vector softmax(const Vector& alpha, double beta) {
    require(beta > 0.0, ErrorCode::InvalidArgument, "beta must be positive");
    const double top = alpha.maxCoeff();
    Vector w = (beta * (alpha.array() - top)).exp().matrix();
    return w / w.sum();
}

Matrix smoothed_max_hessian(const Vector& alpha, double beta) {
    const Vector p = softmax(alpha, beta);
    Matrix h = -beta * p * p.transpose();
    h.diagonal() += beta * p;
    return h;
}

HCurve h_curve(const InterpolationConfig& config, const MCOptions& options, const SeedStream& stream) {
    config.validate();
    HCurve curve;
    curve.theta = config.theta_grid;
    curve.hypotheses_satisfied = verify_slepian_conditions(config.famX, config.famY, config.famG).satisfied;

    const FamilySampler xs(config.famX);
    const FamilySampler ys(config.famY);
    const FamilySampler gs(config.famG);
    const std::size_t points = config.theta_grid.size();
    const std::size_t outputs = 2 * points - 1;

    const auto estimates = estimate_joint(outputs, options, stream, [&](Engine& engine, std::span<double> out) {
        const Matrix x = xs.draw(engine);
        const Matrix y = ys.draw(engine);
        const Matrix g = gs.draw(engine);
        for (std::size_t k = 0; k < points; ++k) {
            const auto z = interpolate_sample(config.theta_grid[k], x, y, g);
            out[k] = smoothed_max(lipschitz_images(config.functions, z.y, z.z), config.beta);
        }
        for (std::size_t k = 0; k + 1 < points; ++k) {
            out[points + k] = out[k + 1] - out[k];
        }
    });
    curve.values.assign(estimates.begin(), estimates.begin() + static_cast<std::ptrdiff_t>(points));
    curve.increments.assign(estimates.begin() + static_cast<std::ptrdiff_t>(points), estimates.end());
    return curve;
}

EndpointEstimates endpoint_estimates(const InterpolationConfig& config, const MCOptions& options,
                                     const SeedStream& stream) {
    config.validate();
    const FamilySampler xs(config.famX);
    const FamilySampler ys(config.famY);
    const FamilySampler gs(config.famG);
    const int n = config.famX.size();

    EndpointEstimates e;
    e.start = estimate_scalar(options, stream.child(1), [&](Engine& engine) {
        return smoothed_max(lipschitz_images(config.functions, xs.draw(engine), Vector::Zero(n)), config.beta);
    });
    const auto end = estimate_joint(2, options, stream.child(2), [&](Engine& engine, std::span<double> out) {
        const Matrix y = ys.draw(engine);
        const Matrix g = gs.draw(engine);
        const Vector alpha = lipschitz_images(config.functions, y, g.col(0));
        out[0] = smoothed_max(alpha, config.beta);
        out[1] = alpha.maxCoeff();
    });
    e.end = end[0];
    e.unsmoothed_end = end[1];
    return e;
}

void write_h_curve_csv(const HCurve& curve, std::ostream& out) {
    out << "theta,mean,std_error\n";
    for (std::size_t k = 0; k < curve.theta.size(); ++k) {
        out << format_number(curve.theta[k]) << ',' << format_number(curve.values[k].mean) << ','
            << format_number(curve.values[k].std_error) << '\n';
    }
}

}  // namespace gcomp
