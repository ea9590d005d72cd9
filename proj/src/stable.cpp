#include "tcgm/stable.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "tcgm/errors.hpp"

namespace tcgm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kPiecesPerCell = 5;
// theta-width of one cell, in units of (1 - alpha). Within a cell the joint
// density varies by at most exp(-width / (1 - alpha) * psi / psi(1)).
constexpr double kCellWidth = 0.2;
constexpr int kCells = 150;

inline double sinc(double x) noexcept { return x == 0.0 ? 1.0 : std::sin(x) / x; }

}  // namespace

double log_zolotarev(double u, double alpha) noexcept {
    const double beta = 1.0 - alpha;
    return alpha * std::log(alpha * sinc(alpha * u)) + beta * std::log(beta * sinc(beta * u))
           - std::log(sinc(u));
}

TemperedStableSampler::TemperedStableSampler(double alpha, double lambda, double dt)
    : alpha_(alpha), lambda_(lambda), dt_(dt) {
    detail::require(alpha > 0.0 && alpha < 1.0, "tempered stable: alpha must lie in (0, 1)");
    detail::require(lambda > 0.0 && std::isfinite(lambda), "tempered stable: lambda must be positive");
    detail::require(dt > 0.0 && std::isfinite(dt), "tempered stable: dt must be positive");

    lambda_pow_ = dt * std::pow(lambda, alpha);
    const double n = std::max(1.0, std::ceil(lambda_pow_ / std::numbers::ln2));
    if (n <= kMaxSubsteps) {
        method_ = Method::substep_rejection;
        substeps_ = static_cast<int>(n);
        substep_dt_ = dt / n;
    } else {
        method_ = Method::zolotarev_cells;
        build_cells();
    }
}

double TemperedStableSampler::operator()(RngStream& stream) const {
    return method_ == Method::substep_rejection ? sample_substeps(stream) : sample_cells(stream);
}

double TemperedStableSampler::sample_substeps(RngStream& stream) const {
    double total = 0.0;
    for (int k = 0; k < substeps_; ++k) {
        double x;
        do {
            x = sample_stable_subordinator_increment(stream, alpha_, substep_dt_);
        } while (stream.uniform() > std::exp(-lambda_ * x));
        total += x;
    }
    return total;
}

void TemperedStableSampler::build_cells() {
    b_ = (1.0 - alpha_) / alpha_;
    psi_min_ = 1.0 / (1.0 - alpha_);
    const double log_scale = alpha_ * std::log(b_) + std::log(lambda_pow_);
    auto theta_at = [&](double u) { return std::exp(log_scale + log_zolotarev(u, alpha_)); };
    auto psi = [&](double y) { return y + std::pow(y, -b_) / b_; };
    auto dpsi = [&](double y) { return 1.0 - std::pow(y, -b_ - 1.0); };

    const double theta0 = theta_at(0.0);
    const double width = kCellWidth * (1.0 - alpha_);

    // Cell boundaries uniform in theta; theta(u) is increasing so bisection applies.
    std::vector<double> u_edges{0.0};
    for (int k = 1; k <= kCells; ++k) {
        const double target = theta0 + k * width;
        double lo = u_edges.back(), hi = std::numbers::pi;
        for (int it = 0; it < 64 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (theta_at(mid) < target ? lo : hi) = mid;
        }
        u_edges.push_back(hi);
    }
    u_edges.push_back(std::numbers::pi);

    std::vector<double> log_weights;
    cells_.clear();
    pieces_.clear();
    for (std::size_t k = 0; k + 1 < u_edges.size(); ++k) {
        const double theta = theta_at(u_edges[k]);
        // Tangents of f(y) = theta (psi(y) - psi(1)) around the mode y = 1.
        const double sigma = std::sqrt(alpha_ / theta);
        const std::array<double, kPiecesPerCell> ys{std::max(1.0 - 2.0 * sigma, 0.25),
                                                    std::max(1.0 - sigma, 0.5), 1.0, 1.0 + sigma,
                                                    1.0 + 2.0 * sigma};
        std::array<double, kPiecesPerCell> fv{}, fd{};
        for (std::size_t j = 0; j < kPiecesPerCell; ++j) {
            fv[j] = theta * (psi(ys[j]) - psi_min_);
            fd[j] = theta * dpsi(ys[j]);
        }
        fd[2] = 0.0;

        const std::size_t first = pieces_.size();
        double log_mass_total = -kInf;
        double lo = 0.0;
        for (std::size_t j = 0; j < kPiecesPerCell; ++j) {
            double hi = kInf;
            if (j + 1 < kPiecesPerCell) {
                hi = (fv[j + 1] - fv[j] - ys[j + 1] * fd[j + 1] + ys[j] * fd[j]) / (fd[j] - fd[j + 1]);
            }
            const double s = fd[j];
            const double at_lo = fv[j] + s * (lo - ys[j]);
            Piece piece{lo, hi, s, at_lo, 0.0};
            if (s > 0.0) {
                piece.log_mass = -at_lo + std::log(-std::expm1(-s * (hi - lo)) / s);
            } else if (s < 0.0) {
                piece.value_lo = fv[j] + s * (hi - ys[j]);
                piece.log_mass = -piece.value_lo + std::log(-std::expm1(s * (hi - lo)) / -s);
            } else {
                piece.log_mass = -at_lo + std::log(hi - lo);
            }
            const double m = std::max(log_mass_total, piece.log_mass);
            log_mass_total = m + std::log(std::exp(log_mass_total - m) + std::exp(piece.log_mass - m));
            pieces_.push_back(piece);
            lo = hi;
        }
        // Store cumulative piece probabilities in log_mass (overwritten below).
        double cum = 0.0;
        for (std::size_t j = first; j < pieces_.size(); ++j) {
            cum += std::exp(pieces_[j].log_mass - log_mass_total);
            pieces_[j].log_mass = cum;
        }
        pieces_.back().log_mass = 1.0;

        const double u_width = u_edges[k + 1] - u_edges[k];
        cells_.push_back(Cell{u_edges[k], u_width, theta, 0.0, first});
        log_weights.push_back(std::log(u_width) + std::log(theta) - theta * psi_min_ + log_mass_total);
    }

    const double max_w = *std::max_element(log_weights.begin(), log_weights.end());
    double total = 0.0;
    for (double w : log_weights) total += std::exp(w - max_w);
    double cum = 0.0;
    for (std::size_t k = 0; k < cells_.size(); ++k) {
        cum += std::exp(log_weights[k] - max_w) / total;
        cells_[k].cdf = cum;
    }
    cells_.back().cdf = 1.0;
}

double TemperedStableSampler::sample_cells(RngStream& stream) const {
    const double log_scale = alpha_ * std::log(b_) + std::log(lambda_pow_);
    for (;;) {
        const double pick = stream.uniform();
        const auto cell_it = std::lower_bound(cells_.begin(), cells_.end(), pick,
                                              [](const Cell& c, double v) { return c.cdf < v; });
        const Cell& cell = *cell_it;
        const double u = cell.u_lo + cell.u_width * stream.uniform();

        const auto first = pieces_.begin() + static_cast<std::ptrdiff_t>(cell.first_piece);
        const auto last = first + kPiecesPerCell;
        const double pick_piece = stream.uniform();
        const auto piece_it = std::lower_bound(first, last, pick_piece,
                                               [](const Piece& p, double v) { return p.log_mass < v; });
        const Piece& piece = piece_it == last ? *(last - 1) : *piece_it;

        const double v = stream.uniform();
        double y, envelope_exponent;
        if (piece.slope > 0.0) {
            y = piece.lo - std::log1p(v * std::expm1(-piece.slope * (piece.hi - piece.lo))) / piece.slope;
            envelope_exponent = piece.value_lo + piece.slope * (y - piece.lo);
        } else if (piece.slope < 0.0) {
            const double s = -piece.slope;
            y = piece.hi + std::log1p(v * std::expm1(-s * (piece.hi - piece.lo))) / s;
            envelope_exponent = piece.value_lo + piece.slope * (y - piece.hi);
        } else {
            y = piece.lo + v * (piece.hi - piece.lo);
            envelope_exponent = piece.value_lo;
        }
        if (!(y > 0.0)) continue;

        const double log_z = log_zolotarev(u, alpha_);
        const double theta = std::exp(log_scale + log_z);
        const double psi = y + std::pow(y, -b_) / b_;
        const double log_accept = std::log(theta / cell.theta) - (theta * psi - cell.theta * psi_min_)
                                  + envelope_exponent;
        if (std::log(stream.uniform()) > log_accept) continue;

        const double log_a = log_z / (1.0 - alpha_);
        const double log_s = b_ * (log_a - std::log(theta) - std::log(y));
        return std::max(std::exp(std::log(dt_) / alpha_ + log_s), std::numeric_limits<double>::min());
    }
}

}  // namespace tcgm
