#pragma once

#include <array>
#include <cstdint>

namespace tcgm {

/**
 * Counter-based random stream.
 *
 * Every draw is Philox4x32-10 applied to the block (counter, stream_id) under
 * the key master_seed, after which the counter is incremented. A stream is a
 * plain value: copying it forks an identical sequence, and no state is shared
 * between streams. Distinct (master_seed, stream_id) pairs select disjoint
 * counter spaces, so stream ids may be sparse.
 */
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id, std::uint64_t counter = 0) noexcept
        : master_seed_(master_seed), stream_id_(stream_id), counter_(counter) {}

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }
    std::uint64_t counter() const noexcept { return counter_; }

    /// Raw 128-bit block for the current counter; advances the counter.
    std::array<std::uint64_t, 2> next_block() noexcept;

    std::uint64_t next_u64() noexcept { return next_block()[0]; }

    /// Uniform on the open interval (0, 1) with 53 bits of resolution.
    double uniform() noexcept;

    /// Child stream keyed by a value drawn from this stream and `tag`.
    /// Advances this stream by one block.
    RngStream split(std::uint64_t tag) noexcept;

    friend bool operator==(const RngStream&, const RngStream&) = default;

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::uint64_t counter_;
};

/// Philox4x32 with 10 rounds. Exposed for known-answer testing.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept;

double sample_std_normal(RngStream& stream) noexcept;

double sample_exponential(RngStream& stream) noexcept;

/// Gamma(shape, rate 1). Marsaglia-Tsang, boosted through shape + 1 when shape < 1.
double sample_gamma(RngStream& stream, double shape);

/// Positive alpha-stable variate with Laplace transform exp(-scale * u^alpha).
double sample_stable_subordinator_increment(RngStream& stream, double alpha, double scale);

/// Increment over a time span `dt` of the tempered stable subordinator with
/// Laplace transform exp(-dt * ((lambda + u)^alpha - lambda^alpha)).
/// Builds a TemperedStableSampler; reuse one of those for repeated draws.
double sample_tempered_stable_increment(RngStream& stream, double alpha, double lambda, double dt);

}  // namespace tcgm
