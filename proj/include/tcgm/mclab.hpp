#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tcgm/gmfbm.hpp"
#include "tcgm/theory.hpp"

namespace tcgm {

struct MomentEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
};

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_std_error = 0.0;
    double r_squared = 0.0;
};

struct CurvePoint {
    double t;
    double value;
};

struct McCurvePoint {
    double t;
    double value;
    double std_error;
};

/// Monte Carlo controls. Results depend only on (arguments, master_seed);
/// `workers` affects wall time only. 0 selects the hardware concurrency.
struct McOptions {
    unsigned workers = 0;
};

/// Stream id reserved for bootstrap resampling; path i uses stream id i.
inline constexpr std::uint64_t kBootstrapStreamId = ~std::uint64_t{0};
inline constexpr int kBootstrapResamples = 200;
inline constexpr std::size_t kMinPaths = 100;

/// n_paths independent draws of (Y_s, Y_t); path i uses derive_stream(master_seed, i).
std::vector<std::pair<double, double>> sample_pairs(const TimeChangedSpec& spec, double s, double t,
                                                    std::size_t n_paths, std::uint64_t master_seed,
                                                    McOptions options = {});

/// Sample covariance; std_error from the spread of the per-path products.
MomentEstimate estimate_cov(const TimeChangedSpec& spec, double s, double t, std::size_t n_paths,
                            std::uint64_t master_seed, McOptions options = {});

/// Pearson correlation; std_error from 200 bootstrap resamples.
MomentEstimate estimate_corr(const TimeChangedSpec& spec, double s, double t, std::size_t n_paths,
                             std::uint64_t master_seed, McOptions options = {});

/// Mean of (Y_t - Y_s)^2.
MomentEstimate estimate_increment_sm(const TimeChangedSpec& spec, double s, double t, std::size_t n_paths,
                                     std::uint64_t master_seed, McOptions options = {});

/// Pearson correlation of a paired sample and its bootstrap standard error.
MomentEstimate pearson_with_bootstrap(std::span<const std::pair<double, double>> pairs, std::uint64_t master_seed);

/// Oracle correlation exact_cov / sqrt(var_t var_s) at each t in `t_grid` (all > s).
std::vector<CurvePoint> corr_curve_oracle(const TimeChangedSpec& spec, double s, std::span<const double> t_grid);

/// OLS of log(value) on log(t). Needs >= 5 points with t, value > 0.
DecayFit fit_decay(std::span<const CurvePoint> points);

struct LrdReport {
    double s = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t master_seed = 0;
    DecayPrediction predicted{};
    std::vector<CurvePoint> oracle_curve;
    DecayFit oracle_fit;
    std::vector<McCurvePoint> mc_curve;   // empty when n_paths == 0
    std::optional<DecayFit> mc_fit;       // absent if MC is skipped or a value is nonpositive
    bool lrd = false;
};

/// n_paths == 0 skips the Monte Carlo curve.
LrdReport lrd_report(const TimeChangedSpec& spec, double s, std::span<const double> t_grid, std::size_t n_paths,
                     std::uint64_t master_seed, McOptions options = {});

/// Sum in a fixed pairwise order, independent of how values were produced.
double pairwise_sum(std::span<const double> values);

}  // namespace tcgm
