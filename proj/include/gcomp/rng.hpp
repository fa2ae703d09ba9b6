#pragma once

#include <cstdint>
#include <limits>

#include "gcomp/types.hpp"

namespace gcomp {

/// SplitMix64 finalizer. Used to derive independent substream seeds from
/// (master_seed, stream_id, counter) triples.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// xoshiro256** seeded through SplitMix64. Satisfies UniformRandomBitGenerator.
class Engine {
public:
    using result_type = std::uint64_t;

    explicit Engine(std::uint64_t seed) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform in the open interval (0, 1).
    double uniform() noexcept;

    /// Standard normal via Box-Muller; the second variate of each pair is cached.
    double normal() noexcept;

    Vector normal_vector(Eigen::Index n);
    Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols);

private:
    std::uint64_t s_[4];
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// Counter-based seed derivation. A draw is fully determined by
/// (master_seed, stream_id, counter + index), so work can be split across
/// threads without changing any sample.
struct SeedStream {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
    std::uint64_t counter = 0;

    /// Engine for the index-th draw of this stream.
    [[nodiscard]] Engine engine(std::uint64_t index = 0) const noexcept {
        const std::uint64_t key =
            mix64(master_seed ^ mix64(stream_id ^ mix64(counter + index + 0x632be59bd9b4e019ULL)));
        return Engine(key);
    }

    /// Independent stream labelled by tag.
    [[nodiscard]] SeedStream child(std::uint64_t tag) const noexcept {
        return {master_seed, mix64(stream_id * 0x9e3779b97f4a7c15ULL + mix64(tag + 1)), counter};
    }

    [[nodiscard]] SeedStream advanced(std::uint64_t n) const noexcept {
        return {master_seed, stream_id, counter + n};
    }

    friend bool operator==(const SeedStream&, const SeedStream&) = default;
};

}  // namespace gcomp
