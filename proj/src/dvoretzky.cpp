#include "gcomp/dvoretzky.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gcomp/error.hpp"
#include "gcomp/inequalities.hpp"

namespace gcomp {

int dvoretzky_dimension(double epsilon, double mu, double lipschitz) {
    require(std::isfinite(epsilon) && std::isfinite(mu) && std::isfinite(lipschitz), ErrorCode::InvalidArgument,
            "epsilon, mu and L must be finite");
    require(lipschitz > 0.0, ErrorCode::InvalidArgument, "Lipschitz constant must be positive");
    const double t = epsilon * mu / lipschitz;
    require(t > 2.0, ErrorCode::DegenerateRegime,
            "epsilon*mu/L = " + std::to_string(t) + " must exceed 2 for a section dimension");
    const double n = std::floor(t * (t - 2.0));
    require(n < static_cast<double>(std::numeric_limits<int>::max()), ErrorCode::InvalidArgument,
            "section dimension overflows");
    return static_cast<int>(n);
}

double failure_bound(double epsilon, double mu, double lipschitz, int n) {
    require(epsilon > 0.0 && mu > 0.0 && lipschitz > 0.0 && n >= 0, ErrorCode::InvalidArgument,
            "failure bound needs positive epsilon, mu, L and n ≥ 0");
    return lipschitz / (epsilon * mu) * (1.0 + std::sqrt(static_cast<double>(n)));
}

namespace {

double deviation(const LipschitzFn& f, const Matrix& T, const Vector& x, double mu) {
    return std::abs(f(T * x) - mu);
}

}  // namespace

SectionCheck check_section_operator(const LipschitzFn& f, const Matrix& T, double mu, const SeedStream& stream,
                                    int sphere_samples) {
    require(f.dim() == T.rows(), ErrorCode::DimensionMismatch, "operator range differs from the function domain");
    require(T.cols() >= 1, ErrorCode::DimensionMismatch, "section dimension must be at least 1");

    if (f.is_euclidean_norm()) {
        // ‖Tx‖ sweeps [s_min, s_max] on the sphere, so the extremes are exact.
        const double c = f.scale() * f.norm_spec().weights()[0];
        const Vector sv = Eigen::JacobiSVD<Matrix>(T).singularValues();
        const double s_max = sv[0];
        const double s_min = T.cols() > T.rows() ? 0.0 : sv[sv.size() - 1];
        return {std::max(std::abs(c * s_max - mu), std::abs(c * s_min - mu)), "exact_svd"};
    }

    const Eigen::Index n = T.cols();
    Engine engine = stream.engine();
    struct Probe {
        double dev;
        Vector x;
    };
    std::vector<Probe> probes;
    probes.reserve(static_cast<std::size_t>(sphere_samples));
    for (int k = 0; k < sphere_samples; ++k) {
        Vector x = engine.normal_vector(n);
        x.normalize();
        probes.push_back({deviation(f, T, x, mu), std::move(x)});
    }
    constexpr std::size_t kAscentStarts = 8;
    const std::size_t keep = std::min(kAscentStarts, probes.size());
    std::partial_sort(probes.begin(), probes.begin() + static_cast<std::ptrdiff_t>(keep), probes.end(),
                      [](const Probe& a, const Probe& b) { return a.dev > b.dev; });
    double worst = probes.empty() ? deviation(f, T, Vector::Unit(n, 0), mu) : probes.front().dev;

    for (std::size_t s = 0; s < keep; ++s) {
        Vector x = probes[s].x;
        for (int k = 1; k <= 300; ++k) {
            const Vector image = T * x;
            const double centered = f(image) - mu;
            Vector g = T.transpose() * f.gradient(image);
            g -= g.dot(x) * x;  // tangent component
            const double len = g.norm();
            if (len == 0.0) {
                break;
            }
            x += (centered >= 0.0 ? 1.0 : -1.0) * (0.5 / std::sqrt(static_cast<double>(k))) * g / len;
            x.normalize();
            worst = std::max(worst, deviation(f, T, x, mu));
        }
    }
    return {worst, "sampled_ascent"};
}

Matrix section_candidate(int ambient_dim, int section_dim, const SeedStream& stream, int attempt) {
    Engine engine = stream.child(2).engine(static_cast<std::uint64_t>(attempt));
    return engine.normal_matrix(ambient_dim, section_dim);
}

SectionCertificate find_section(const LipschitzFn& f, double epsilon, const SectionSearchOptions& options,
                                const SeedStream& stream) {
    require(epsilon > 0.0 && std::isfinite(epsilon), ErrorCode::InvalidArgument, "epsilon must be positive");
    require(options.max_attempts >= 1, ErrorCode::InvalidArgument, "max_attempts must be at least 1");

    SectionCertificate cert;
    cert.ambient_dim = f.dim();
    cert.epsilon = epsilon;
    cert.lipschitz = f.lipschitz_constant();
    cert.stream = stream;
    require(cert.lipschitz > 0.0, ErrorCode::DegenerateRegime, "constant functions admit no section dimension");

    const MCOptions mu_options{options.mu_samples, options.confidence, options.exec};
    const int N = f.dim();
    cert.mu = estimate_scalar(mu_options, stream.child(1),
                              [&](Engine& engine) { return f(engine.normal_vector(N)); });
    cert.section_dim = dvoretzky_dimension(epsilon, cert.mu.mean, cert.lipschitz);
    require(cert.section_dim >= 1, ErrorCode::DegenerateRegime,
            "epsilon*mu/L is below 1 + sqrt(2); the dimension formula gives n = 0");
    cert.failure_bound = failure_bound(epsilon, cert.mu.mean, cert.lipschitz, cert.section_dim);
    cert.threshold = epsilon * cert.mu.mean + kSlackSigmas * cert.mu.std_error;

    const unsigned batch = std::max(1U, options.exec.workers);
    int best_index = -1;
    double best_dev = std::numeric_limits<double>::infinity();
    std::string best_tier;
    for (int start = 0; start < options.max_attempts; start += static_cast<int>(batch)) {
        const int count = std::min(static_cast<int>(batch), options.max_attempts - start);
        std::vector<SectionCheck> checks(static_cast<std::size_t>(count));
        parallel_for(static_cast<std::size_t>(count), options.exec.workers, [&](std::size_t i) {
            const int attempt = start + static_cast<int>(i);
            const Matrix op = section_candidate(N, cert.section_dim, stream, attempt);
            checks[i] = check_section_operator(f, op, cert.mu.mean, stream.child(3).child(attempt),
                                               options.sphere_samples);
        });
        for (int i = 0; i < count; ++i) {
            const auto& check = checks[static_cast<std::size_t>(i)];
            if (check.worst_deviation < best_dev) {
                best_dev = check.worst_deviation;
                best_index = start + i;
                best_tier = check.tier;
            }
            if (check.worst_deviation <= cert.threshold) {
                cert.verified = true;
                cert.attempt_index = start + i;
                cert.attempts_used = start + i + 1;
                cert.worst_deviation = check.worst_deviation;
                cert.tier = check.tier;
                cert.op = section_candidate(N, cert.section_dim, stream, cert.attempt_index);
                return cert;
            }
        }
    }
    cert.attempts_used = options.max_attempts;
    cert.attempt_index = best_index;
    cert.worst_deviation = best_dev;
    cert.tier = best_tier;
    cert.op = section_candidate(N, cert.section_dim, stream, best_index);
    return cert;
}

}  // namespace gcomp
