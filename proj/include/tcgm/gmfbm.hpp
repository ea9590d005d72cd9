#pragma once

#include <span>
#include <utility>
#include <vector>

#include "tcgm/fbm.hpp"
#include "tcgm/subordinators.hpp"

namespace tcgm {

/**
 * Parameters of N_t = a B_t^{H1} + b B_t^{H2} with independent fBms.
 *
 * Construction enforces h1 <= h2 by swapping (a, h1) with (b, h2) when needed;
 * the law of N is unchanged by the swap. a and b may not both be zero.
 */
class GmfbmParams {
public:
    GmfbmParams(double a, double b, HurstIndex h1, HurstIndex h2);
    GmfbmParams(double a, double b, double h1, double h2) : GmfbmParams(a, b, HurstIndex(h1), HurstIndex(h2)) {}

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    HurstIndex h1() const noexcept { return h1_; }
    HurstIndex h2() const noexcept { return h2_; }

private:
    double a_;
    double b_;
    HurstIndex h1_;
    HurstIndex h2_;
};

struct TimeChangedSpec {
    GmfbmParams gmfbm;
    SubordinatorSpec subordinator;
};

struct ProcessPath {
    TimeGrid grid;
    std::vector<double> values;
};

/// a^2 fbm_cov(s,t,H1) + b^2 fbm_cov(s,t,H2)
double gmfbm_cov(double s, double t, const GmfbmParams& p);

/// gmfBm at nondecreasing, possibly repeating, nonnegative times.
std::vector<double> sample_gmfbm_at_times(std::span<const double> times, const GmfbmParams& p, RngStream& stream);

std::vector<double> sample_gmfbm_at(const TimeGrid& grid, const GmfbmParams& p, RngStream& stream);

/// Exact O(1) sampler of (Y_s, Y_t) for fixed 0 < s < t; the two subordinator
/// increment samplers are built once and reused.
class TimeChangedPairSampler {
public:
    TimeChangedPairSampler(const TimeChangedSpec& spec, double s, double t);
    std::pair<double, double> operator()(RngStream& stream) const;

private:
    GmfbmParams params_;
    IncrementSampler first_;
    IncrementSampler second_;
};

std::pair<double, double> sample_timechanged_pair(const TimeChangedSpec& spec, double s, double t, RngStream& stream);

/// Composes a gmfBm with an already sampled clock path. The clock values are
/// the evaluation times; the grid is carried through unchanged.
ProcessPath compose_timechanged_path(const GmfbmParams& p, const SubordinatorPath& clock, RngStream& stream);

struct TimeChangedPath {
    SubordinatorPath clock;
    ProcessPath process;
};

TimeChangedPath sample_timechanged_path(const TimeChangedSpec& spec, const TimeGrid& grid, RngStream& stream);

/// Cov(Y_s, Y_t) from the conditioning identity
///   (a^2/2)[m(t,2H1) + m(s,2H1) - m(|t-s|,2H1)] + (b^2/2)[same with H2],
/// m = subordinator_moment.
double exact_cov_oracle(const TimeChangedSpec& spec, double s, double t);

/// a^2 m(t,2H1) + b^2 m(t,2H2)
double exact_var_oracle(const TimeChangedSpec& spec, double t);

/// E[(Y_t - Y_s)^2] = Var Y_t + Var Y_s - 2 Cov(Y_s, Y_t), 0 < s < t.
double exact_increment_second_moment(const TimeChangedSpec& spec, double s, double t);

}  // namespace tcgm
