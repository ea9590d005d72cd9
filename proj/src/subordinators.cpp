#include "tcgm/subordinators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "tcgm/errors.hpp"

namespace tcgm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

constexpr double kQuadTolerance = 1e-12;
constexpr double kQuadAcceptRel = 1e-8;
constexpr double kQuadAcceptAbs = 1e-14;
// Below this v the integrands are replaced by their leading power term.
constexpr double kTinyV = 1e-60;
constexpr double kLogSegment = 10.0;
// Above this log v, (phi - 1 + v) / v equals 1 in double precision.
constexpr double kUnitExcessLogV = 700.0;

void check_moment_args(double t, double q, double q_max) {
    detail::require(t > 0.0 && std::isfinite(t), "moment: t must be positive");
    detail::require(q > 0.0 && q <= q_max, "moment: q out of range");
}

// sum_{k >= order} (-x)^k / k!, accurate for small x
double exp_series_tail(double x, int order) {
    if (std::abs(x) < 0.5) {
        double term = 1.0;
        for (int k = 1; k <= order; ++k) term *= -x / k;
        double sum = 0.0;
        for (int k = order; k < order + 30; ++k) {
            sum += term;
            term *= -x / (k + 1);
        }
        return sum;
    }
    double head = 0.0, term = 1.0;
    for (int k = 0; k < order; ++k) {
        head += term;
        term *= -x / (k + 1);
    }
    return std::exp(-x) - head;
}

// -sum_{k >= order} binom(alpha, k) z^k for z >= 0, accurate for small z
double binomial_series_tail(double alpha, double z, int order) {
    double coeff = 1.0, zk = 1.0;
    if (z < 0.5) {
        for (int k = 0; k < order; ++k) {
            coeff *= (alpha - k) / (k + 1);
            zk *= z;
        }
        double sum = 0.0;
        for (int k = order; k < order + 80; ++k) {
            sum += coeff * zk;
            coeff *= (alpha - k) / (k + 1);
            zk *= z;
        }
        return -sum;
    }
    double head = 0.0;
    for (int k = 0; k < order; ++k) {
        head += coeff * zk;
        coeff *= (alpha - k) / (k + 1);
        zk *= z;
    }
    return -(std::exp(alpha * std::log1p(z)) - head);
}

struct Quadrature {
    double value;
    double error;
};

template <class F>
Quadrature integrate_finite(F f, double lo, double hi) {
    if (!(hi > lo)) return {0.0, 0.0};
    boost::math::quadrature::tanh_sinh<double> ts;
    double err = 0.0;
    const double value = ts.integrate(f, lo, hi, kQuadTolerance, &err);
    return {value, err};
}

Quadrature operator+(Quadrature x, Quadrature y) { return {x.value + y.value, x.error + y.error}; }

// int_lo^hi g(x) dx in segments of at most kLogSegment units. Used with x = log v
// for power-law integrands spanning many decades.
template <class G>
Quadrature integrate_segmented(G g, double lo, double hi) {
    Quadrature total{0.0, 0.0};
    if (!(hi > lo)) return total;
    const int segments = std::max(1, static_cast<int>(std::ceil((hi - lo) / kLogSegment)));
    const double width = (hi - lo) / segments;
    for (int k = 0; k < segments; ++k) {
        const double a = lo + k * width;
        const double b = k + 1 == segments ? hi : a + width;
        total = total + integrate_finite(g, a, b);
    }
    return total;
}

// int_0^width f(v) dv, integrated over the unit interval; keeps the
// quadrature's node spacing independent of the width.
template <class F>
Quadrature integrate_scaled(F f, double width) {
    const auto unit = integrate_finite([&](double z) { return f(z * width); }, 0.0, 1.0);
    return {unit.value * width, unit.error * width};
}

template <class F>
Quadrature integrate_tail(F f, double lo) {
    boost::math::quadrature::exp_sinh<double> es;
    double err = 0.0;
    const double value = es.integrate(f, lo, std::numeric_limits<double>::infinity(), kQuadTolerance, &err);
    return {value, err};
}

double accept(double value, double error, double t, double q) {
    if (!std::isfinite(value) || !std::isfinite(error) || error > kQuadAcceptRel * std::abs(value) + kQuadAcceptAbs) {
        std::ostringstream os;
        os << "tss_moment: quadrature did not converge (t=" << t << ", q=" << q << ", value=" << value
           << ", error=" << error << ")";
        throw NumericalError(os.str());
    }
    return value;
}

}  // namespace

TssParams::TssParams(double alpha, double lambda) : alpha_(alpha), lambda_(lambda) {
    detail::require(alpha > 0.0 && alpha < 1.0, "TSS: alpha must lie in (0, 1)");
    detail::require(lambda > 0.0 && std::isfinite(lambda), "TSS: lambda must be positive");
}

double TssParams::mean(double t) const { return t * alpha_ * std::pow(lambda_, alpha_ - 1.0); }

double TssParams::variance(double t) const {
    return t * alpha_ * (1.0 - alpha_) * std::pow(lambda_, alpha_ - 2.0);
}

double TssParams::laplace(double t, double u) const {
    const double exponent = std::pow(lambda_, alpha_) * std::expm1(alpha_ * std::log1p(u / lambda_));
    return std::exp(-t * exponent);
}

GammaParams::GammaParams(double nu) : nu_(nu) {
    detail::require(nu > 0.0 && std::isfinite(nu), "Gamma process: nu must be positive");
}

double GammaParams::laplace(double t, double u) const { return std::exp(-shape(t) * std::log1p(u)); }

std::string subordinator_name(const SubordinatorSpec& spec) {
    return std::holds_alternative<TssParams>(spec) ? "tss" : "gamma";
}

IncrementSampler::IncrementSampler(const SubordinatorSpec& spec, double dt)
    : dt_(dt),
      impl_(std::visit(overloaded{
                           [&](const TssParams& p) -> std::variant<TemperedStableSampler, double> {
                               return TemperedStableSampler(p.alpha(), p.lambda(), dt);
                           },
                           [&](const GammaParams& p) -> std::variant<TemperedStableSampler, double> {
                               detail::require(dt > 0.0 && std::isfinite(dt), "Gamma increment: dt must be positive");
                               return p.shape(dt);
                           },
                       },
                       spec)) {}

double IncrementSampler::operator()(RngStream& stream) const {
    if (const auto* tss = std::get_if<TemperedStableSampler>(&impl_)) return (*tss)(stream);
    return sample_gamma(stream, std::get<double>(impl_));
}

SubordinatorPathSampler::SubordinatorPathSampler(const SubordinatorSpec& spec, TimeGrid grid)
    : grid_(std::move(grid)), starts_at_zero_(grid_[0] == 0.0) {
    double prev = 0.0;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        if (grid_[i] > prev) gaps_.emplace_back(spec, grid_[i] - prev);
        prev = grid_[i];
    }
}

SubordinatorPath SubordinatorPathSampler::operator()(RngStream& stream) const {
    std::vector<double> values(grid_.size(), 0.0);
    double level = 0.0;
    std::size_t gap = 0;
    for (std::size_t i = starts_at_zero_ ? 1 : 0; i < grid_.size(); ++i) {
        level += gaps_[gap++](stream);
        values[i] = level;
    }
    return {grid_, std::move(values)};
}

SubordinatorPath sample_path(const SubordinatorSpec& spec, const TimeGrid& grid, RngStream& stream) {
    return SubordinatorPathSampler(spec, grid)(stream);
}

double gamma_moment(const GammaParams& params, double t, double q) {
    check_moment_args(t, q, std::numeric_limits<double>::infinity());
    const double x = params.shape(t);
    return boost::math::tgamma_ratio(x + q, x);
}

double gamma_moment_asymptotic(const GammaParams& params, double t, double q) {
    check_moment_args(t, q, std::numeric_limits<double>::infinity());
    return std::pow(params.shape(t), q);
}

double tss_moment(const TssParams& params, double t, double q) {
    check_moment_args(t, q, 2.0);
    const double m1 = params.mean(t);
    if (q == 1.0) return m1;
    if (q == 2.0) return m1 * m1 + params.variance(t);

    const double alpha = params.alpha();
    const double lambda = params.lambda();
    const double scale = t * std::pow(lambda, alpha);
    const double knee = m1 * lambda;  // v at which u reaches lambda
    // Integration variable v = m1 u; E(v) is the Laplace exponent, phi = exp(-E).
    const double log_knee = std::log(knee);
    // E as a function of x = log v; finite for every finite x.
    auto exponent_log = [&](double x) {
        const double r = x - log_knee;
        const double log1p_w = r < 23.0 ? std::log1p(std::exp(r)) : r + std::log1p(std::exp(-r));
        return scale * std::expm1(alpha * log1p_w);
    };
    auto exponent = [&](double v) { return exponent_log(std::log(v)); };
    // v - E(v) >= 0
    auto linear_gap = [&](double v) {
        const double w = v / knee;
        return w <= 1.0 ? scale * binomial_series_tail(alpha, w, 2) : v - exponent(v);
    };
    // (phi - 1 + v) / v at v = e^x
    auto excess_ratio = [&](double x) {
        if (x > kUnitExcessLogV) return 1.0;
        const double v = std::exp(x);
        return (exp_series_tail(exponent(v), 2) + linear_gap(v)) / v;
    };
    const double half_m2 = 0.5 * (1.0 + params.variance(t) / (m1 * m1));

    // [0, eps]: leading terms subtracted analytically; [eps, big]: quadrature in log v;
    // [big, inf): exp-sinh. big is where E reaches 1, so phi decays beyond it.
    const double eps = std::min(1.0, knee);
    const double log_eps = std::log(eps);
    const double stretch = std::log1p(1.0 / scale) / alpha;  // log1p(w) at E = 1
    const double log_big = std::max(0.0, log_knee + (stretch < 40.0 ? std::log(std::expm1(stretch)) : stretch));

    // int_big^inf v^(-q-1) phi dv in y = alpha log(v / big), where phi decays
    // double-exponentially at unit scale.
    auto tail_phi = [&](double y) {
        const double x = log_big + y / alpha;
        return std::exp(-q * x - exponent_log(x)) / alpha;
    };
    const auto tail = integrate_tail(tail_phi, 0.0);

    if (q < 1.0) {
        // int_0^inf v^(-q-1) (1 - phi) =
        //   eps^(1-q)/(1-q) - int_0^eps v^(-q-1) (phi - 1 + v)
        //   + int_eps^big v^(-q-1) (1 - phi) + big^(-q)/q - int_big^inf v^(-q-1) phi
        auto head = [&](double v) {
            if (v <= 0.0) return 0.0;
            if (v < kTinyV) return half_m2 * std::pow(v, 1.0 - q);
            return std::pow(v, -q) * excess_ratio(std::log(v));
        };
        auto middle = [&](double x) { return std::exp(-q * x) * -std::expm1(-exponent_log(x)); };
        const auto h = integrate_scaled(head, eps);
        const auto m = integrate_segmented(middle, log_eps, log_big);
        const double inv_gamma = 1.0 / std::tgamma(1.0 - q);
        const double value = q * std::exp((1.0 - q) * log_eps) / std::tgamma(2.0 - q)
                             + inv_gamma * (std::exp(-q * log_big) + q * (m.value - h.value - tail.value));
        const double error = q * inv_gamma * (h.error + m.error + tail.error);
        return std::pow(m1, q) * accept(value, error, t, q);
    }

    // int_0^inf v^(-q-1) (phi - 1 + v) =
    //   half_m2 eps^(2-q)/(2-q) + int_0^eps v^(-q-1) r + int_eps^big v^(-q-1) (phi - 1 + v)
    //   + int_big^inf v^(-q-1) phi + big^(1-q)/(q-1) - big^(-q)/q
    // with r = phi - 1 + v - half_m2 v^2 = O(v^3).
    const double k1 = m1;
    const double k2 = params.variance(t);
    const double k3 = t * alpha * (1.0 - alpha) * (2.0 - alpha) * std::pow(lambda, alpha - 3.0);
    const double third = -(k3 + 3.0 * k1 * k2 + k1 * k1 * k1) / (6.0 * k1 * k1 * k1);
    auto head = [&](double v) {
        if (v <= 0.0) return 0.0;
        if (v < kTinyV) return third * std::pow(v, 2.0 - q);
        const double e = exponent(v);
        const double gap = linear_gap(v);
        const double r = exp_series_tail(e, 3) - 0.5 * gap * (e + v) + scale * binomial_series_tail(alpha, v / knee, 3);
        return std::pow(v, 2.0 - q) * (r / v / v / v);
    };
    auto middle = [&](double x) { return std::exp((1.0 - q) * x) * excess_ratio(x); };
    const auto h = integrate_scaled(head, eps);
    const auto m = integrate_segmented(middle, log_eps, log_big);
    const double coeff = q * (q - 1.0) / std::tgamma(2.0 - q);
    const double value = half_m2 * q * (q - 1.0) * std::exp((2.0 - q) * log_eps) / std::tgamma(3.0 - q)
                         + q * std::exp((1.0 - q) * log_big) / std::tgamma(2.0 - q)
                         + coeff * (h.value + m.value + tail.value - std::exp(-q * log_big) / q);
    const double error = coeff * (h.error + m.error + tail.error);
    return std::pow(m1, q) * accept(value, error, t, q);
}

double tss_moment_asymptotic(const TssParams& params, double t, double q) {
    check_moment_args(t, q, std::numeric_limits<double>::infinity());
    return std::pow(params.mean(t), q);
}

double subordinator_moment(const SubordinatorSpec& spec, double t, double q) {
    return std::visit(overloaded{[&](const TssParams& p) { return tss_moment(p, t, q); },
                                 [&](const GammaParams& p) { return gamma_moment(p, t, q); }},
                      spec);
}

double subordinator_moment_asymptotic(const SubordinatorSpec& spec, double t, double q) {
    return std::visit(overloaded{[&](const TssParams& p) { return tss_moment_asymptotic(p, t, q); },
                                 [&](const GammaParams& p) { return gamma_moment_asymptotic(p, t, q); }},
                      spec);
}

}  // namespace tcgm
