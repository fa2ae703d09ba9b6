#include "gcomp/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "gcomp/error.hpp"

namespace gcomp {

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body) {
    const std::size_t threads = std::min<std::size_t>(std::max(1U, workers), count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (count + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) {
                    body(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

double z_value(double confidence) {
    require(confidence > 0.0 && confidence < 1.0, ErrorCode::InvalidArgument, "confidence must lie in (0,1)");
    const boost::math::normal standard;
    return boost::math::quantile(standard, 0.5 * (1.0 + confidence));
}

double chi_mean(int m) {
    require(m > 0, ErrorCode::InvalidArgument, "chi mean needs a positive dimension");
    return std::sqrt(2.0) * std::exp(std::lgamma(0.5 * (m + 1)) - std::lgamma(0.5 * m));
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) {
            s += v;
        }
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

MCEstimate summarize(std::span<const double> values, double confidence) {
    require(values.size() >= 2, ErrorCode::InvalidArgument, "need at least two samples");
    const auto n = static_cast<double>(values.size());
    const double mean = pairwise_sum(values) / n;
    std::vector<double> sq(values.size());
    std::transform(values.begin(), values.end(), sq.begin(), [mean](double v) { return (v - mean) * (v - mean); });
    const double variance = pairwise_sum(sq) / (n - 1.0);
    return {mean, std::sqrt(variance / n), values.size(), confidence};
}

std::vector<MCEstimate> estimate_joint(std::size_t outputs, const MCOptions& options, const SeedStream& stream,
                                       const SampleKernel& kernel, std::vector<double>* raw) {
    require(options.samples >= 2, ErrorCode::InvalidArgument, "samples must be at least 2");
    require(outputs >= 1, ErrorCode::InvalidArgument, "at least one output is required");
    const std::size_t samples = options.samples;
    std::vector<double> values(samples * outputs);
    parallel_for(samples, options.exec.workers, [&](std::size_t i) {
        Engine engine = stream.engine(i);
        std::span<double> out(values.data() + i * outputs, outputs);
        kernel(engine, out);
        for (double v : out) {
            require(std::isfinite(v), ErrorCode::NonFiniteSample,
                    "functional returned a non-finite value at sample " + std::to_string(i));
        }
    });

    std::vector<MCEstimate> estimates;
    estimates.reserve(outputs);
    std::vector<double> column(samples);
    for (std::size_t k = 0; k < outputs; ++k) {
        for (std::size_t i = 0; i < samples; ++i) {
            column[i] = values[i * outputs + k];
        }
        estimates.push_back(summarize(column, options.confidence));
    }
    if (raw != nullptr) {
        *raw = std::move(values);
    }
    return estimates;
}

MCEstimate estimate_scalar(const MCOptions& options, const SeedStream& stream,
                           const std::function<double(Engine&)>& value) {
    return estimate_joint(1, options, stream, [&](Engine& engine, std::span<double> out) {
        out[0] = value(engine);
    }).front();
}

MCEstimate mc_estimate(const FamilyFunctional& functional, const IndexedGaussianFamily& family,
                       const MCOptions& options, const SeedStream& stream) {
    const FamilySampler sampler(family);
    return estimate_scalar(options, stream, [&](Engine& engine) { return functional(sampler.draw(engine)); });
}

MCEstimate expected_max_g(const std::vector<Vector>& points, const MCOptions& options, const SeedStream& stream) {
    const IndexedGaussianFamily family = build_sphere_family(points, 1);
    return mc_estimate([](const Matrix& sample) { return sample.col(0).maxCoeff(); }, family, options, stream);
}

}  // namespace gcomp
