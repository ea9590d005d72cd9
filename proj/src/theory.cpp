#include "tcgm/theory.hpp"

#include <algorithm>
#include <cmath>

#include "tcgm/errors.hpp"

namespace tcgm {

namespace {

void check_times(double s, double t) {
    detail::require(s > 0.0, "asymptotic formula: s must be positive");
    if (!(t > s)) throw ArgumentOrderError("asymptotic formula: requires t > s");
}

double cov_block(double coeff2, double h, double rate_pow, double s, double t) {
    return coeff2 * h * s * rate_pow * std::pow(t, 2.0 * h - 1.0);
}

double incr_block_tss(double coeff2, double h, double c, double s, double t) {
    const double k = coeff2 * h * std::pow(c, 2.0 * h);
    return k * std::pow(t, 2.0 * h) - 2.0 * k * std::pow(t, 2.0 * h - 1.0) + k * std::pow(s, 2.0 * h);
}

double incr_block_gamma(double coeff2, double h, double nu, double s, double t) {
    const double k = coeff2 * h / std::pow(nu, 2.0 * h);
    return 2.0 * k * std::pow(t, 2.0 * h) - 4.0 * k * s * std::pow(t, 2.0 * h - 1.0) + 2.0 * k * std::pow(s, 2.0 * h);
}

}  // namespace

double cov_asymptotic_tss(const GmfbmParams& p, const TssParams& tss, double s, double t) {
    check_times(s, t);
    const double c = tss.alpha() * std::pow(tss.lambda(), tss.alpha() - 1.0);
    const double h1 = p.h1().value(), h2 = p.h2().value();
    return cov_block(p.a() * p.a(), h1, std::pow(c, 2.0 * h1), s, t)
           + cov_block(p.b() * p.b(), h2, std::pow(c, 2.0 * h2), s, t);
}

double cov_asymptotic_gamma(const GmfbmParams& p, const GammaParams& gamma, double s, double t) {
    check_times(s, t);
    const double h1 = p.h1().value(), h2 = p.h2().value();
    return cov_block(2.0 * p.a() * p.a(), h1, std::pow(gamma.nu(), -2.0 * h1), s, t)
           + cov_block(2.0 * p.b() * p.b(), h2, std::pow(gamma.nu(), -2.0 * h2), s, t);
}

double cov_asymptotic(const TimeChangedSpec& spec, double s, double t) {
    if (const auto* tss = std::get_if<TssParams>(&spec.subordinator)) return cov_asymptotic_tss(spec.gmfbm, *tss, s, t);
    return cov_asymptotic_gamma(spec.gmfbm, std::get<GammaParams>(spec.subordinator), s, t);
}

double increment_sm_asymptotic_tss(const GmfbmParams& p, const TssParams& tss, double s, double t) {
    check_times(s, t);
    const double c = tss.alpha() * std::pow(tss.lambda(), tss.alpha() - 1.0);
    return incr_block_tss(p.a() * p.a(), p.h1().value(), c, s, t)
           + incr_block_tss(p.b() * p.b(), p.h2().value(), c, s, t);
}

double increment_sm_asymptotic_gamma(const GmfbmParams& p, const GammaParams& gamma, double s, double t) {
    check_times(s, t);
    return incr_block_gamma(p.a() * p.a(), p.h1().value(), gamma.nu(), s, t)
           + incr_block_gamma(p.b() * p.b(), p.h2().value(), gamma.nu(), s, t);
}

double increment_sm_asymptotic(const TimeChangedSpec& spec, double s, double t) {
    if (const auto* tss = std::get_if<TssParams>(&spec.subordinator)) {
        return increment_sm_asymptotic_tss(spec.gmfbm, *tss, s, t);
    }
    return increment_sm_asymptotic_gamma(spec.gmfbm, std::get<GammaParams>(spec.subordinator), s, t);
}

DecayPrediction corr_decay_prediction(const GmfbmParams& p) {
    const double h1 = p.h1().value(), h2 = p.h2().value();
    const double mixed = 2.0 * h1 - h2 - 1.0;
    const double pure = h2 - 1.0;
    return {mixed, pure, std::max(mixed, pure), is_lrd(p)};
}

bool is_lrd(const GmfbmParams& p) { return 2.0 * p.h1().value() - p.h2().value() < 1.0; }

}  // namespace tcgm
