#include "tcgm/randkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tcgm/errors.hpp"
#include "tcgm/stable.hpp"

namespace tcgm {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

inline std::uint32_t lo32(std::uint64_t x) noexcept { return static_cast<std::uint32_t>(x); }
inline std::uint32_t hi32(std::uint64_t x) noexcept { return static_cast<std::uint32_t>(x >> 32); }

inline double to_open_unit(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

std::array<std::uint64_t, 2> RngStream::next_block() noexcept {
    const auto out = philox4x32_10({lo32(counter_), hi32(counter_), lo32(stream_id_), hi32(stream_id_)},
                                   {lo32(master_seed_), hi32(master_seed_)});
    ++counter_;
    return {(static_cast<std::uint64_t>(out[1]) << 32) | out[0],
            (static_cast<std::uint64_t>(out[3]) << 32) | out[2]};
}

double RngStream::uniform() noexcept { return to_open_unit(next_u64()); }

RngStream RngStream::split(std::uint64_t tag) noexcept {
    return RngStream(mix64(next_u64()), tag);
}

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept {
    return RngStream(master_seed, stream_id);
}

double sample_std_normal(RngStream& stream) noexcept {
    // Box-Muller on the two halves of one block; the sine branch is discarded
    // so that one draw consumes exactly one counter value.
    const auto block = stream.next_block();
    const double u1 = to_open_unit(block[0]);
    const double u2 = to_open_unit(block[1]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double sample_exponential(RngStream& stream) noexcept { return -std::log(stream.uniform()); }

double sample_gamma(RngStream& stream, double shape) {
    detail::require(shape > 0.0 && std::isfinite(shape), "sample_gamma: shape must be positive and finite");

    const bool boosted = shape < 1.0;
    const double d = (boosted ? shape + 1.0 : shape) - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    double v;
    for (;;) {
        double z, w;
        do {
            z = sample_std_normal(stream);
            w = 1.0 + c * z;
        } while (w <= 0.0);
        v = w * w * w;
        const double u = stream.uniform();
        if (u < 1.0 - 0.0331 * z * z * z * z) break;
        if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) break;
    }
    if (!boosted) return d * v;

    // X * U^(1/shape), in logs; values below the smallest normal double are clamped.
    const double log_x = std::log(d * v) + std::log(stream.uniform()) / shape;
    return std::max(std::exp(log_x), std::numeric_limits<double>::min());
}

double sample_stable_subordinator_increment(RngStream& stream, double alpha, double scale) {
    detail::require(alpha > 0.0 && alpha < 1.0, "stable increment: alpha must lie in (0, 1)");
    detail::require(scale > 0.0 && std::isfinite(scale), "stable increment: scale must be positive");

    const double u = std::numbers::pi * stream.uniform();
    const double e = sample_exponential(stream);
    const double b = (1.0 - alpha) / alpha;
    const double log_a = log_zolotarev(u, alpha) / (1.0 - alpha);
    const double log_x = std::log(scale) / alpha + b * (log_a - std::log(e));
    return std::max(std::exp(log_x), std::numeric_limits<double>::min());
}

double sample_tempered_stable_increment(RngStream& stream, double alpha, double lambda, double dt) {
    return TemperedStableSampler(alpha, lambda, dt)(stream);
}

}  // namespace tcgm
