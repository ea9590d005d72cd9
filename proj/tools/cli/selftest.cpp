#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "tcgm/errors.hpp"
#include "tcgm/fbm.hpp"
#include "tcgm/mclab.hpp"
#include "tcgm/theory.hpp"

namespace tcgm::cli {

namespace {

struct CheckResult {
    bool pass;
    std::string detail;
};

struct Check {
    const char* name;
    std::function<CheckResult(std::uint64_t seed)> run;
};

std::string num(double x) {
    std::ostringstream os;
    os.precision(4);
    os << x;
    return os.str();
}

const GmfbmParams kMixed(1.0, 1.0, 0.55, 0.8);
const TimeChangedSpec kTss{kMixed, TssParams(0.7, 1.0)};
const TimeChangedSpec kGamma{kMixed, GammaParams(1.0)};

CheckResult fbm_covariance(std::uint64_t seed) {
    // Variance of B_16 and Cov(B_1, B_16) at H = 0.75 from 20000 Cholesky paths.
    const auto grid = TimeGrid::regular(16, 1.0);
    const HurstIndex h(0.75);
    const FbmCholeskySampler sampler(grid.times(), h);
    const std::size_t n = 20000;
    std::vector<double> var(n), cov(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto stream = derive_stream(seed, i);
        const auto x = sampler(stream);
        var[i] = x[15] * x[15];
        cov[i] = x[0] * x[15];
    }
    double worst = 0.0;
    for (const auto& [values, truth] : {std::pair{&var, fbm_cov(16, 16, h)}, std::pair{&cov, fbm_cov(1, 16, h)}}) {
        const double mean = pairwise_sum(*values) / n;
        double ss = 0.0;
        for (double v : *values) ss += (v - mean) * (v - mean);
        const double se = std::sqrt(ss / (n - 1) / n);
        worst = std::max(worst, std::abs(mean - truth) / se);
    }
    return {worst < 3.0, "max |z| = " + num(worst)};
}

CheckResult gamma_identity(std::uint64_t) {
    const double err = std::abs(gamma_moment(GammaParams(2.0), 2.0, 0.5) - std::sqrt(std::numbers::pi) / 2.0);
    return {err < 1e-12, "|error| = " + num(err)};
}

CheckResult tss_cumulants(std::uint64_t) {
    const TssParams p(0.7, 1.0);
    const double e1 = std::abs(tss_moment(p, 10.0, 1.0) / 7.0 - 1.0);
    const double e2 = std::abs(tss_moment(p, 10.0, 2.0) / 51.1 - 1.0);
    const double near = std::abs(tss_moment(p, 10.0, 1.999999) / 51.1 - 1.0);
    return {e1 < 1e-8 && e2 < 1e-8 && near < 1e-4, "relative errors " + num(e1) + ", " + num(e2) + ", " + num(near)};
}

CheckResult moment_ratios(std::uint64_t) {
    const double tss = tss_moment(TssParams(0.7, 1.0), 1e4, 1.6) / tss_moment_asymptotic(TssParams(0.7, 1.0), 1e4, 1.6);
    const double gam = gamma_moment(GammaParams(1.0), 1e4, 1.6) / gamma_moment_asymptotic(GammaParams(1.0), 1e4, 1.6);
    return {std::abs(tss - 1.0) < 0.05 && std::abs(gam - 1.0) < 0.02, "ratios at t=1e4: tss " + num(tss) + ", gamma " + num(gam)};
}

CheckResult covariance_identity(std::uint64_t seed) {
    double worst = 0.0;
    for (const auto* spec : {&kTss, &kGamma}) {
        const auto est = estimate_cov(*spec, 1.0, 10.0, 20000, seed);
        worst = std::max(worst, std::abs(est.value - exact_cov_oracle(*spec, 1.0, 10.0)) / est.std_error);
    }
    return {worst < 3.0, "max |z| = " + num(worst)};
}

CheckResult increment_identity(std::uint64_t) {
    const double exact = exact_increment_second_moment(kTss, 2.0, 20.0);
    const double direct = subordinator_moment(kTss.subordinator, 18.0, 1.1) + subordinator_moment(kTss.subordinator, 18.0, 1.6);
    const double rel = std::abs(exact / direct - 1.0);
    return {rel < 1e-6, "relative gap " + num(rel)};
}

CheckResult covariance_asymptotic(std::uint64_t) {
    const double r3 = exact_cov_oracle(kTss, 1.0, 1e3) / cov_asymptotic(kTss, 1.0, 1e3);
    const double r5 = exact_cov_oracle(kTss, 1.0, 1e5) / cov_asymptotic(kTss, 1.0, 1e5);
    return {std::abs(r3 - 1.0) < 0.10 && std::abs(r5 - 1.0) < 0.03, "ratio " + num(r3) + " at 1e3, " + num(r5) + " at 1e5"};
}

CheckResult decay_exponent(std::uint64_t) {
    const auto grid = TimeGrid::geometric(100.0, 1e4, 12);
    double worst = 0.0;
    for (const auto* spec : {&kTss, &kGamma}) {
        const auto fit = fit_decay(corr_curve_oracle(*spec, 1.0, grid.times()));
        worst = std::max(worst, std::abs(fit.slope - corr_decay_prediction(spec->gmfbm).dominant));
    }
    return {worst <= kSlopeTolerance && is_lrd(kMixed), "max |slope - predicted| = " + num(worst)};
}

CheckResult brownian_degeneracy(std::uint64_t) {
    const TimeChangedSpec spec{GmfbmParams(1.0, 1.0, 0.5, 0.5), GammaParams(1.0)};
    double worst = 0.0;
    for (double t : {2.0, 10.0, 1e3}) {
        const double corr = exact_cov_oracle(spec, 1.0, t) / std::sqrt(exact_var_oracle(spec, 1.0) * exact_var_oracle(spec, t));
        worst = std::max(worst, std::abs(corr - std::sqrt(1.0 / t)));
    }
    return {worst < 1e-10, "max |corr - sqrt(s/t)| = " + num(worst)};
}

CheckResult worker_independence(std::uint64_t seed) {
    const auto one = estimate_cov(kTss, 1.0, 5.0, 2000, seed, {1});
    const auto many = estimate_cov(kTss, 1.0, 5.0, 2000, seed, {4});
    return {one.value == many.value && one.std_error == many.std_error, "1 vs 4 workers bit-identical"};
}

}  // namespace

int cmd_selftest(const RunConfig& config, std::ostream& os) {
    const std::vector<Check> checks{
        {"fbm-covariance", fbm_covariance},
        {"gamma-moment-identity", gamma_identity},
        {"tss-moment-cumulants", tss_cumulants},
        {"moment-asymptotic-ratios", moment_ratios},
        {"covariance-identity-mc", covariance_identity},
        {"increment-identity", increment_identity},
        {"covariance-asymptotic", covariance_asymptotic},
        {"decay-exponent", decay_exponent},
        {"brownian-degeneracy", brownian_degeneracy},
        {"worker-independence", worker_independence},
    };
    int failures = 0;
    for (const auto& check : checks) {
        const auto start = std::chrono::steady_clock::now();
        CheckResult r;
        try {
            r = check.run(config.seed);
        } catch (const std::exception& e) {
            r = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !r.pass;
        os << (r.pass ? "PASS " : "FAIL ") << check.name << "  " << r.detail << "  (" << num(secs) << " s)\n";
    }
    os << (failures == 0 ? "selftest: all " : "selftest: ") << (failures == 0 ? checks.size() : failures)
       << (failures == 0 ? " checks passed\n" : " check(s) failed\n");
    return failures == 0 ? kExitOk : kExitVerify;
}

}  // namespace tcgm::cli
