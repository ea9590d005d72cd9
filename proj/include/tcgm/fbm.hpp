#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tcgm/randkit.hpp"

namespace tcgm {

/// Hurst index, validated to lie in the open interval (0, 1).
class HurstIndex {
public:
    explicit HurstIndex(double h);
    double value() const noexcept { return h_; }
    friend bool operator==(HurstIndex, HurstIndex) = default;
    friend auto operator<=>(HurstIndex, HurstIndex) = default;

private:
    double h_;
};

/// Strictly increasing list of nonnegative times.
class TimeGrid {
public:
    explicit TimeGrid(std::vector<double> times);

    static TimeGrid regular(std::size_t n, double dt);             // dt, 2dt, ..., n dt
    static TimeGrid geometric(double t_min, double t_max, std::size_t count);

    std::span<const double> times() const noexcept { return times_; }
    std::size_t size() const noexcept { return times_.size(); }
    double operator[](std::size_t i) const noexcept { return times_[i]; }

private:
    std::vector<double> times_;
};

double fbm_cov(double s, double t, HurstIndex h);

Eigen::MatrixXd fbm_cov_matrix(const TimeGrid& grid, HurstIndex h);

struct CholeskyResult {
    Eigen::MatrixXd lower;
    double jitter = 0.0;  // absolute diagonal shift that was needed
};

/// Cholesky factor of a covariance matrix. On failure a diagonal shift of
/// 1e-12 * max diagonal is added, escalating by 10x up to 1e-8 * max diagonal,
/// after which NumericalError is thrown.
CholeskyResult cholesky_with_jitter(const Eigen::MatrixXd& cov);

/**
 * Exact fBm sampler at a fixed set of times.
 *
 * `times` must be nondecreasing and nonnegative. Zeros map to B_0 = 0 and
 * repeated times are collapsed before factorization, so the returned vector has
 * one value per input time with duplicates sharing a value.
 */
class FbmCholeskySampler {
public:
    FbmCholeskySampler(std::span<const double> times, HurstIndex h);

    std::vector<double> operator()(RngStream& stream) const;
    void sample_into(RngStream& stream, std::span<double> out) const;

    std::size_t size() const noexcept { return index_.size(); }
    double jitter() const noexcept { return jitter_; }

private:
    std::vector<std::ptrdiff_t> index_;  // position in the unique-time vector, -1 for t = 0
    Eigen::MatrixXd lower_;
    double jitter_ = 0.0;
};

std::vector<double> sample_fbm_at(const TimeGrid& grid, HurstIndex h, RngStream& stream);

/// Same as sample_fbm_at for a nondecreasing (possibly repeating) time list.
std::vector<double> sample_fbm_at_times(std::span<const double> times, HurstIndex h, RngStream& stream);

/// Fractional Gaussian noise on a regular grid via circulant embedding
/// (Davies-Harte), with a Cholesky fallback if the embedding has a negative
/// eigenvalue.
class FgnCirculantSampler {
public:
    FgnCirculantSampler(std::size_t n, double dt, HurstIndex h);

    std::vector<double> operator()(RngStream& stream) const;

    bool uses_fallback() const noexcept { return fallback_.has_value(); }

private:
    struct Plan;

    std::size_t n_;
    double scale_;                      // dt^H
    std::vector<double> sqrt_eigen_;    // sqrt(eigenvalue / m), length m = 2n
    std::shared_ptr<const Plan> plan_;
    std::optional<FbmCholeskySampler> fallback_;
};

std::vector<double> sample_fgn_regular(std::size_t n, double dt, HurstIndex h, RngStream& stream);

/// fGn autocovariance at integer lag k for unit step.
double fgn_autocov(std::size_t k, HurstIndex h);

/// Exact draw of (B_u, B_v) for 0 <= u <= v.
std::pair<double, double> sample_fbm_pair(double u, double v, HurstIndex h, RngStream& stream);

}  // namespace tcgm
