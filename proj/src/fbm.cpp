#include "tcgm/fbm.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <string>

#include <fftw3.h>

#include "tcgm/errors.hpp"

namespace tcgm {

HurstIndex::HurstIndex(double h) : h_(h) {
    detail::require(h > 0.0 && h < 1.0, "Hurst index must lie in (0, 1), got " + std::to_string(h));
}

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
    detail::require(!times_.empty(), "time grid must not be empty");
    detail::require(std::isfinite(times_.front()) && times_.front() >= 0.0, "time grid must start at t >= 0");
    for (std::size_t i = 1; i < times_.size(); ++i) {
        detail::require(std::isfinite(times_[i]) && times_[i] > times_[i - 1],
                        "time grid must be strictly increasing");
    }
}

TimeGrid TimeGrid::regular(std::size_t n, double dt) {
    detail::require(n >= 1 && dt > 0.0, "regular grid needs n >= 1 and dt > 0");
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = dt * static_cast<double>(i + 1);
    return TimeGrid(std::move(t));
}

TimeGrid TimeGrid::geometric(double t_min, double t_max, std::size_t count) {
    detail::require(t_min > 0.0 && t_max > t_min && count >= 2, "geometric grid needs 0 < t_min < t_max, count >= 2");
    std::vector<double> t(count);
    const double log_ratio = std::log(t_max / t_min) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) t[i] = t_min * std::exp(log_ratio * static_cast<double>(i));
    t.front() = t_min;
    t.back() = t_max;
    return TimeGrid(std::move(t));
}

double fbm_cov(double s, double t, HurstIndex h) {
    detail::require(s >= 0.0 && t >= 0.0, "fbm_cov: times must be nonnegative");
    const double two_h = 2.0 * h.value();
    return 0.5 * (std::pow(s, two_h) + std::pow(t, two_h) - std::pow(std::abs(t - s), two_h));
}

Eigen::MatrixXd fbm_cov_matrix(const TimeGrid& grid, HurstIndex h) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            cov(i, j) = cov(j, i) = fbm_cov(grid[static_cast<std::size_t>(i)], grid[static_cast<std::size_t>(j)], h);
        }
    }
    return cov;
}

CholeskyResult cholesky_with_jitter(const Eigen::MatrixXd& cov) {
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() == Eigen::Success) return {llt.matrixL(), 0.0};

    const double max_diag = cov.diagonal().maxCoeff();
    for (double rel = 1e-12; rel <= 1e-8 * 1.0000001; rel *= 10.0) {
        Eigen::MatrixXd shifted = cov;
        shifted.diagonal().array() += rel * max_diag;
        llt.compute(shifted);
        if (llt.info() == Eigen::Success) return {llt.matrixL(), rel * max_diag};
    }
    throw NumericalError("Cholesky factorization failed after diagonal jitter of 1e-8 * max diagonal (n = "
                         + std::to_string(cov.rows()) + ")");
}

FbmCholeskySampler::FbmCholeskySampler(std::span<const double> times, HurstIndex h) {
    std::vector<double> unique;
    index_.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        detail::require(std::isfinite(t) && t >= 0.0, "fBm sampler: times must be nonnegative");
        detail::require(i == 0 || t >= times[i - 1], "fBm sampler: times must be nondecreasing");
        if (t == 0.0) {
            index_.push_back(-1);
            continue;
        }
        if (unique.empty() || unique.back() != t) unique.push_back(t);
        index_.push_back(static_cast<std::ptrdiff_t>(unique.size()) - 1);
    }
    if (unique.empty()) return;
    auto factor = cholesky_with_jitter(fbm_cov_matrix(TimeGrid(std::move(unique)), h));
    lower_ = std::move(factor.lower);
    jitter_ = factor.jitter;
}

void FbmCholeskySampler::sample_into(RngStream& stream, std::span<double> out) const {
    detail::require(out.size() == index_.size(), "fBm sampler: output size mismatch");
    const Eigen::Index m = lower_.rows();
    Eigen::VectorXd z(m);
    for (Eigen::Index i = 0; i < m; ++i) z(i) = sample_std_normal(stream);
    const Eigen::VectorXd x = lower_.triangularView<Eigen::Lower>() * z;
    for (std::size_t i = 0; i < index_.size(); ++i) out[i] = index_[i] < 0 ? 0.0 : x(index_[i]);
}

std::vector<double> FbmCholeskySampler::operator()(RngStream& stream) const {
    std::vector<double> out(index_.size());
    sample_into(stream, out);
    return out;
}

std::vector<double> sample_fbm_at(const TimeGrid& grid, HurstIndex h, RngStream& stream) {
    return FbmCholeskySampler(grid.times(), h)(stream);
}

std::vector<double> sample_fbm_at_times(std::span<const double> times, HurstIndex h, RngStream& stream) {
    return FbmCholeskySampler(times, h)(stream);
}

double fgn_autocov(std::size_t k, HurstIndex h) {
    const double two_h = 2.0 * h.value();
    const double kk = static_cast<double>(k);
    if (k == 0) return 1.0;
    return 0.5 * (std::pow(kk + 1.0, two_h) - 2.0 * std::pow(kk, two_h) + std::pow(kk - 1.0, two_h));
}

namespace {

// The FFTW planner is not reentrant.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

struct FgnCirculantSampler::Plan {
    explicit Plan(std::size_t m) : size(m) {
        std::lock_guard lock(fftw_planner_mutex());
        auto* in = fftw_alloc_complex(m);
        auto* out = fftw_alloc_complex(m);
        plan = fftw_plan_dft_1d(static_cast<int>(m), in, out, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(in);
        fftw_free(out);
        if (plan == nullptr) throw NumericalError("FFTW planning failed");
    }
    ~Plan() {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    void forward(std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out) const {
        // Planned with FFTW_UNALIGNED, so any std::complex<double> buffer of the
        // planned size may be passed.
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
    }

    std::size_t size;
    fftw_plan plan;
};

FgnCirculantSampler::FgnCirculantSampler(std::size_t n, double dt, HurstIndex h)
    : n_(n), scale_(0.0) {
    detail::require(n >= 1, "fGn sampler: n must be positive");
    detail::require(dt > 0.0 && std::isfinite(dt), "fGn sampler: dt must be positive");
    scale_ = std::pow(dt, h.value());

    const std::size_t m = 2 * n;
    std::vector<std::complex<double>> row(m), eig(m);
    for (std::size_t k = 0; k <= n; ++k) row[k] = fgn_autocov(k, h);
    for (std::size_t k = n + 1; k < m; ++k) row[k] = fgn_autocov(m - k, h);

    plan_ = std::make_shared<const Plan>(m);
    plan_->forward(row, eig);

    const double tol = 1e-12 * std::abs(eig[0].real());
    sqrt_eigen_.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double lam = eig[k].real();
        if (lam < -tol) {
            sqrt_eigen_.clear();
            plan_.reset();
            fallback_.emplace(TimeGrid::regular(n, dt).times(), h);
            return;
        }
        sqrt_eigen_[k] = std::sqrt(std::max(lam, 0.0) / static_cast<double>(m));
    }
}

std::vector<double> FgnCirculantSampler::operator()(RngStream& stream) const {
    std::vector<double> out(n_);
    if (fallback_) {
        const auto path = (*fallback_)(stream);
        double prev = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            out[i] = path[i] - prev;
            prev = path[i];
        }
        return out;
    }

    const std::size_t m = 2 * n_;
    std::vector<std::complex<double>> w(m), x(m);
    w[0] = sqrt_eigen_[0] * sample_std_normal(stream);
    w[n_] = sqrt_eigen_[n_] * sample_std_normal(stream);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t k = 1; k < n_; ++k) {
        const double re = sample_std_normal(stream);
        const double im = sample_std_normal(stream);
        w[k] = sqrt_eigen_[k] * inv_sqrt2 * std::complex<double>(re, im);
        w[m - k] = std::conj(w[k]);
    }
    plan_->forward(w, x);
    for (std::size_t i = 0; i < n_; ++i) out[i] = scale_ * x[i].real();
    return out;
}

std::vector<double> sample_fgn_regular(std::size_t n, double dt, HurstIndex h, RngStream& stream) {
    return FgnCirculantSampler(n, dt, h)(stream);
}

std::pair<double, double> sample_fbm_pair(double u, double v, HurstIndex h, RngStream& stream) {
    detail::require(u >= 0.0, "sample_fbm_pair: times must be nonnegative");
    if (u > v) throw ArgumentOrderError("sample_fbm_pair: requires u <= v");

    const double two_h = 2.0 * h.value();
    const double z1 = sample_std_normal(stream);
    const double z2 = sample_std_normal(stream);
    if (u == 0.0) return {0.0, std::pow(v, h.value()) * z2};
    const double var_u = std::pow(u, two_h);
    const double bu = std::sqrt(var_u) * z1;
    if (u == v) return {bu, bu};
    const double cov = fbm_cov(u, v, h);
    const double cond_var = std::max(std::pow(v, two_h) - cov * cov / var_u, 0.0);
    return {bu, cov / var_u * bu + std::sqrt(cond_var) * z2};
}

}  // namespace tcgm
