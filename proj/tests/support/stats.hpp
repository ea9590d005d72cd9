#pragma once

// Test-only statistical helpers. Deliberately independent of the library's
// estimators so they can serve as oracles.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace tcgm::testing {

struct Summary {
    double mean;
    double variance;  // n - 1 denominator
    double std_error; // of the mean
};

inline Summary summarize(std::span<const double> xs) {
    long double sum = 0.0L;
    for (double x : xs) sum += x;
    const long double mean = sum / xs.size();
    long double ss = 0.0L;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double var = static_cast<double>(ss / (xs.size() - 1));
    return {static_cast<double>(mean), var, std::sqrt(var / xs.size())};
}

/// Standard error of the sample variance, sqrt((m4 - m2^2) / n).
inline double variance_std_error(std::span<const double> xs) {
    const auto s = summarize(xs);
    long double m4 = 0.0L;
    for (double x : xs) m4 += std::pow(x - s.mean, 4);
    m4 /= xs.size();
    return std::sqrt(static_cast<double>(m4 - s.variance * s.variance) / xs.size());
}

inline double correlation(std::span<const double> x, std::span<const double> y) {
    const auto sx = summarize(x), sy = summarize(y);
    long double sxy = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - sx.mean) * (y[i] - sy.mean);
    return static_cast<double>(sxy / (x.size() - 1)) / std::sqrt(sx.variance * sy.variance);
}

inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// One-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    return d;
}

/// 1% critical value of the KS statistic, asymptotic form c(0.01) = 1.628.
inline double ks_critical_1pct(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }
inline double ks_critical_1pct(std::size_t n, std::size_t m) {
    return 1.628 * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * m));
}

/// z-score bound for Monte Carlo checks in unit tests. Many checks run per binary,
/// so 3 sigma would fail by chance on a fixed seed every few runs.
inline constexpr double kMcZ = 4.0;

/// Entrywise second moments E[X_i X_j] of zero-mean vectors with standard errors.
struct MomentMatrix {
    std::size_t dim = 0;
    std::vector<double> mean;       // row-major dim x dim
    std::vector<double> std_error;
};

inline MomentMatrix second_moments(const std::vector<std::vector<double>>& paths) {
    MomentMatrix m;
    m.dim = paths.front().size();
    m.mean.assign(m.dim * m.dim, 0.0);
    m.std_error.assign(m.dim * m.dim, 0.0);
    std::vector<double> prod(paths.size());
    for (std::size_t i = 0; i < m.dim; ++i) {
        for (std::size_t j = 0; j < m.dim; ++j) {
            for (std::size_t p = 0; p < paths.size(); ++p) prod[p] = paths[p][i] * paths[p][j];
            const auto sm = summarize(prod);
            m.mean[i * m.dim + j] = sm.mean;
            m.std_error[i * m.dim + j] = sm.std_error;
        }
    }
    return m;
}

/// Mean of g(X_i) with its standard error.
template <class G>
Summary mean_of(std::span<const double> xs, G g) {
    std::vector<double> v(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) v[i] = g(xs[i]);
    return summarize(v);
}

}  // namespace tcgm::testing
