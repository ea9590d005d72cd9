#pragma once

#include "tcgm/gmfbm.hpp"

namespace tcgm {

/// Correlation decay exponents predicted for the time-changed gmfBm.
struct DecayPrediction {
    double exponent_mixed;  // 2 H1 - H2 - 1
    double exponent_pure;   // H2 - 1
    double dominant;        // max of the two
    bool lrd_condition_holds;
};

// The evaluators below reproduce the published two-term asymptotic displays
// literally, including their constants. They are compared against the exact
// oracles in gmfbm.hpp, not used in place of them.

/// a^2 H1 s c^{2H1} t^{2H1-1} + b^2 H2 s c^{2H2} t^{2H2-1},  c = alpha lambda^(alpha-1)
double cov_asymptotic_tss(const GmfbmParams& p, const TssParams& tss, double s, double t);

/// 2 a^2 H1 s nu^{-2H1} t^{2H1-1} + 2 b^2 H2 s nu^{-2H2} t^{2H2-1}
double cov_asymptotic_gamma(const GmfbmParams& p, const GammaParams& gamma, double s, double t);

/// Dispatches on the subordinator kind.
double cov_asymptotic(const TimeChangedSpec& spec, double s, double t);

/// Per block: H c^{2H} t^{2H} - 2 H c^{2H} t^{2H-1} + H c^{2H} s^{2H}, weighted by a^2 / b^2.
/// Note the middle term carries no factor s, exactly as printed.
double increment_sm_asymptotic_tss(const GmfbmParams& p, const TssParams& tss, double s, double t);

/// Per block: 2H nu^{-2H} t^{2H} - 4 H s nu^{-2H} t^{2H-1} + 2H nu^{-2H} s^{2H}.
double increment_sm_asymptotic_gamma(const GmfbmParams& p, const GammaParams& gamma, double s, double t);

double increment_sm_asymptotic(const TimeChangedSpec& spec, double s, double t);

DecayPrediction corr_decay_prediction(const GmfbmParams& p);

/// 2 H1 - H2 < 1 under the canonical ordering H1 <= H2. Under that ordering
/// the condition always holds (2 H1 - H2 <= H2 < 1); it is evaluated as stated.
bool is_lrd(const GmfbmParams& p);

}  // namespace tcgm
