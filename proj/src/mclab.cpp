#include "tcgm/mclab.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <tuple>

#include "tcgm/errors.hpp"

namespace tcgm {

namespace {

unsigned resolve_workers(McOptions options, std::size_t n) {
    unsigned w = options.workers != 0 ? options.workers : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(n, 1)));
}

// Runs fn(i) for i in [0, n) on contiguous chunks. fn must only write to slot i.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn fn) {
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        threads.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : threads) th.join();
    if (error) std::rethrow_exception(error);
}

void check_estimator_args(double s, double t, std::size_t n_paths) {
    detail::require(s > 0.0, "estimator: s must be positive");
    if (!(s < t)) throw ArgumentOrderError("estimator: requires s < t");
    detail::require(n_paths >= kMinPaths, "estimator: n_paths must be at least 100");
}

double mean_of(std::span<const double> v) { return pairwise_sum(v) / static_cast<double>(v.size()); }

// Sample variance (n - 1 denominator) given the mean.
double variance_of(std::span<const double> v, double mean) {
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
    return pairwise_sum(sq) / static_cast<double>(v.size() - 1);
}

double pearson(std::span<const double> x, std::span<const double> y) {
    const double mx = mean_of(x), my = mean_of(y);
    std::vector<double> xy(x.size()), xx(x.size()), yy(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        xy[i] = dx * dy;
        xx[i] = dx * dx;
        yy[i] = dy * dy;
    }
    const double denom = std::sqrt(pairwise_sum(xx) * pairwise_sum(yy));
    if (!(denom > 0.0)) throw NumericalError("pearson correlation: degenerate sample variance");
    return std::clamp(pairwise_sum(xy) / denom, -1.0, 1.0);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

std::vector<std::pair<double, double>> sample_pairs(const TimeChangedSpec& spec, double s, double t,
                                                    std::size_t n_paths, std::uint64_t master_seed,
                                                    McOptions options) {
    const TimeChangedPairSampler sampler(spec, s, t);
    std::vector<std::pair<double, double>> pairs(n_paths);
    parallel_for(n_paths, resolve_workers(options, n_paths), [&](std::size_t i) {
        RngStream stream = derive_stream(master_seed, i);
        pairs[i] = sampler(stream);
    });
    return pairs;
}

MomentEstimate estimate_cov(const TimeChangedSpec& spec, double s, double t, std::size_t n_paths,
                            std::uint64_t master_seed, McOptions options) {
    check_estimator_args(s, t, n_paths);
    const auto pairs = sample_pairs(spec, s, t, n_paths, master_seed, options);
    std::vector<double> xs(n_paths), ys(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) std::tie(xs[i], ys[i]) = pairs[i];
    const double mx = mean_of(xs), my = mean_of(ys);
    std::vector<double> products(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) products[i] = (xs[i] - mx) * (ys[i] - my);
    const double n = static_cast<double>(n_paths);
    const double value = pairwise_sum(products) / (n - 1.0);
    const double spread = variance_of(products, pairwise_sum(products) / n);
    return {value, std::sqrt(spread / n), n_paths};
}

MomentEstimate pearson_with_bootstrap(std::span<const std::pair<double, double>> pairs, std::uint64_t master_seed) {
    const std::size_t n = pairs.size();
    detail::require(n >= 2, "pearson: need at least two pairs");
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) std::tie(xs[i], ys[i]) = pairs[i];
    const double value = pearson(xs, ys);

    RngStream boot = derive_stream(master_seed, kBootstrapStreamId);
    std::vector<double> rx(n), ry(n), stats(kBootstrapResamples);
    for (int r = 0; r < kBootstrapResamples; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto k = std::min(n - 1, static_cast<std::size_t>(boot.uniform() * static_cast<double>(n)));
            rx[i] = xs[k];
            ry[i] = ys[k];
        }
        stats[static_cast<std::size_t>(r)] = pearson(rx, ry);
    }
    const double boot_mean = mean_of(stats);
    return {value, std::sqrt(variance_of(stats, boot_mean)), n};
}

MomentEstimate estimate_corr(const TimeChangedSpec& spec, double s, double t, std::size_t n_paths,
                             std::uint64_t master_seed, McOptions options) {
    if (s == t && s > 0.0) return {1.0, 0.0, n_paths};
    check_estimator_args(s, t, n_paths);
    const auto pairs = sample_pairs(spec, s, t, n_paths, master_seed, options);
    return pearson_with_bootstrap(pairs, master_seed);
}

MomentEstimate estimate_increment_sm(const TimeChangedSpec& spec, double s, double t, std::size_t n_paths,
                                     std::uint64_t master_seed, McOptions options) {
    check_estimator_args(s, t, n_paths);
    const auto pairs = sample_pairs(spec, s, t, n_paths, master_seed, options);
    std::vector<double> sq(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) {
        const double d = pairs[i].second - pairs[i].first;
        sq[i] = d * d;
    }
    const double mean = mean_of(sq);
    return {mean, std::sqrt(variance_of(sq, mean) / static_cast<double>(n_paths)), n_paths};
}

std::vector<CurvePoint> corr_curve_oracle(const TimeChangedSpec& spec, double s, std::span<const double> t_grid) {
    detail::require(s > 0.0, "corr_curve_oracle: s must be positive");
    const double var_s = exact_var_oracle(spec, s);
    std::vector<CurvePoint> curve;
    curve.reserve(t_grid.size());
    for (double t : t_grid) {
        if (!(t > s)) throw ArgumentOrderError("corr_curve_oracle: every t must exceed s");
        curve.push_back({t, exact_cov_oracle(spec, s, t) / std::sqrt(exact_var_oracle(spec, t) * var_s)});
    }
    return curve;
}

DecayFit fit_decay(std::span<const CurvePoint> points) {
    detail::require(points.size() >= 5, "fit_decay: need at least 5 points");
    const std::size_t n = points.size();
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        detail::require(points[i].t > 0.0 && points[i].value > 0.0,
                        "fit_decay: power-law fit needs strictly positive t and values");
        x[i] = std::log(points[i].t);
        y[i] = std::log(points[i].value);
    }
    const double mx = mean_of(x), my = mean_of(y);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    detail::require(sxx > 0.0, "fit_decay: t values must not all coincide");
    DecayFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ssr += r * r;
    }
    fit.slope_std_error = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
    return fit;
}

LrdReport lrd_report(const TimeChangedSpec& spec, double s, std::span<const double> t_grid, std::size_t n_paths,
                     std::uint64_t master_seed, McOptions options) {
    LrdReport report;
    report.s = s;
    report.n_paths = n_paths;
    report.master_seed = master_seed;
    report.predicted = corr_decay_prediction(spec.gmfbm);
    report.lrd = is_lrd(spec.gmfbm);
    report.oracle_curve = corr_curve_oracle(spec, s, t_grid);
    report.oracle_fit = fit_decay(report.oracle_curve);

    if (n_paths == 0) return report;
    std::vector<CurvePoint> positive;
    bool all_positive = true;
    for (double t : t_grid) {
        const auto est = estimate_corr(spec, s, t, n_paths, master_seed, options);
        report.mc_curve.push_back({t, est.value, est.std_error});
        all_positive = all_positive && est.value > 0.0;
        positive.push_back({t, est.value});
    }
    if (all_positive) report.mc_fit = fit_decay(positive);
    return report;
}

}  // namespace tcgm
