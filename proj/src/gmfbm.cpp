#include "tcgm/gmfbm.hpp"

#include <cmath>

#include "tcgm/errors.hpp"

namespace tcgm {

namespace {

// Tags for sub-streams of one path stream.
constexpr std::uint64_t kFirstFbmTag = 1;
constexpr std::uint64_t kSecondFbmTag = 2;
constexpr std::uint64_t kClockTag = 3;

double moment_or_zero(const SubordinatorSpec& spec, double t, double q) {
    return t == 0.0 ? 0.0 : subordinator_moment(spec, t, q);
}

double block(const SubordinatorSpec& spec, double s, double t, double q) {
    return 0.5 * (moment_or_zero(spec, t, q) + moment_or_zero(spec, s, q) - moment_or_zero(spec, std::abs(t - s), q));
}

}  // namespace

GmfbmParams::GmfbmParams(double a, double b, HurstIndex h1, HurstIndex h2) : a_(a), b_(b), h1_(h1), h2_(h2) {
    detail::require(std::isfinite(a) && std::isfinite(b), "gmfBm: coefficients must be finite");
    detail::require(a != 0.0 || b != 0.0, "gmfBm: a and b must not both be zero");
    if (h2_ < h1_) {
        std::swap(a_, b_);
        std::swap(h1_, h2_);
    }
}

double gmfbm_cov(double s, double t, const GmfbmParams& p) {
    return p.a() * p.a() * fbm_cov(s, t, p.h1()) + p.b() * p.b() * fbm_cov(s, t, p.h2());
}

std::vector<double> sample_gmfbm_at_times(std::span<const double> times, const GmfbmParams& p, RngStream& stream) {
    RngStream first = stream.split(kFirstFbmTag);
    RngStream second = stream.split(kSecondFbmTag);
    const auto x1 = sample_fbm_at_times(times, p.h1(), first);
    const auto x2 = sample_fbm_at_times(times, p.h2(), second);
    std::vector<double> out(times.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = p.a() * x1[i] + p.b() * x2[i];
    return out;
}

std::vector<double> sample_gmfbm_at(const TimeGrid& grid, const GmfbmParams& p, RngStream& stream) {
    return sample_gmfbm_at_times(grid.times(), p, stream);
}

TimeChangedPairSampler::TimeChangedPairSampler(const TimeChangedSpec& spec, double s, double t)
    : params_(spec.gmfbm),
      first_(spec.subordinator, s > 0.0 ? s : 1.0),
      second_(spec.subordinator, t > s ? t - s : 1.0) {
    detail::require(s > 0.0 && std::isfinite(t), "time-changed pair: requires s > 0");
    if (!(s < t)) throw ArgumentOrderError("time-changed pair: requires s < t");
}

std::pair<double, double> TimeChangedPairSampler::operator()(RngStream& stream) const {
    const double u = first_(stream);
    const double v = u + second_(stream);
    const auto [b1u, b1v] = sample_fbm_pair(u, v, params_.h1(), stream);
    const auto [b2u, b2v] = sample_fbm_pair(u, v, params_.h2(), stream);
    return {params_.a() * b1u + params_.b() * b2u, params_.a() * b1v + params_.b() * b2v};
}

std::pair<double, double> sample_timechanged_pair(const TimeChangedSpec& spec, double s, double t, RngStream& stream) {
    return TimeChangedPairSampler(spec, s, t)(stream);
}

ProcessPath compose_timechanged_path(const GmfbmParams& p, const SubordinatorPath& clock, RngStream& stream) {
    detail::require(clock.values.size() == clock.grid.size(), "clock path: values and grid differ in length");
    return {clock.grid, sample_gmfbm_at_times(clock.values, p, stream)};
}

TimeChangedPath sample_timechanged_path(const TimeChangedSpec& spec, const TimeGrid& grid, RngStream& stream) {
    RngStream clock_stream = stream.split(kClockTag);
    auto clock = sample_path(spec.subordinator, grid, clock_stream);
    auto process = compose_timechanged_path(spec.gmfbm, clock, stream);
    return {std::move(clock), std::move(process)};
}

double exact_cov_oracle(const TimeChangedSpec& spec, double s, double t) {
    detail::require(s > 0.0 && t > 0.0, "exact_cov_oracle: times must be positive");
    const auto& p = spec.gmfbm;
    return p.a() * p.a() * block(spec.subordinator, s, t, 2.0 * p.h1().value())
           + p.b() * p.b() * block(spec.subordinator, s, t, 2.0 * p.h2().value());
}

double exact_var_oracle(const TimeChangedSpec& spec, double t) {
    detail::require(t > 0.0, "exact_var_oracle: t must be positive");
    const auto& p = spec.gmfbm;
    return p.a() * p.a() * subordinator_moment(spec.subordinator, t, 2.0 * p.h1().value())
           + p.b() * p.b() * subordinator_moment(spec.subordinator, t, 2.0 * p.h2().value());
}

double exact_increment_second_moment(const TimeChangedSpec& spec, double s, double t) {
    detail::require(s > 0.0, "exact_increment_second_moment: s must be positive");
    if (!(s < t)) throw ArgumentOrderError("exact_increment_second_moment: requires s < t");
    return exact_var_oracle(spec, t) + exact_var_oracle(spec, s) - 2.0 * exact_cov_oracle(spec, s, t);
}

}  // namespace tcgm
