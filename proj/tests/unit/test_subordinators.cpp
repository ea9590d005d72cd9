#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "support/stats.hpp"
#include "tcgm/errors.hpp"
#include "tcgm/subordinators.hpp"

using namespace tcgm;
using tcgm::testing::kMcZ;

namespace {

std::vector<double> increments(const SubordinatorSpec& spec, double dt, std::size_t n, std::uint64_t seed) {
    const IncrementSampler sampler(spec, dt);
    auto s = derive_stream(seed, 0);
    std::vector<double> xs(n);
    for (auto& x : xs) x = sampler(s);
    return xs;
}

// E[X^q] for the alpha = 1/2 tempered stable law, integrated against its density
// exp(-lambda x + sqrt(lambda) t) * t / (2 sqrt(pi)) x^(-3/2) exp(-t^2 / (4x)).
double half_stable_moment_by_density(double lambda, double t, double q) {
    const auto density = [=](double x) {
        if (x <= 0.0) return 0.0;
        const double log_f = -lambda * x + std::sqrt(lambda) * t + std::log(t / (2.0 * std::sqrt(std::numbers::pi)))
                             - 1.5 * std::log(x) - t * t / (4.0 * x);
        return std::exp(q * std::log(x) + log_f);
    };
    boost::math::quadrature::tanh_sinh<double> head;
    boost::math::quadrature::exp_sinh<double> tail;
    const double split = t * t;
    return head.integrate(density, 0.0, split) + tail.integrate(density, split, std::numeric_limits<double>::infinity());
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(TssParams(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(TssParams(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(TssParams(0.5, 0.0), DomainError);
    CHECK_THROWS_AS(GammaParams(0.0), DomainError);
    CHECK_THROWS_AS(gamma_moment(GammaParams(1.0), 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(gamma_moment(GammaParams(1.0), 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(tss_moment(TssParams(0.5, 1.0), 1.0, 2.5), DomainError);
    CHECK(subordinator_name(TssParams(0.5, 1.0)) == "tss");
    CHECK(subordinator_name(GammaParams(1.0)) == "gamma");
}

TEST_CASE("gamma moment examples") {
    const GammaParams g1(1.0), g2(2.0);
    CHECK(gamma_moment(g1, 1, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gamma_moment(g1, 2, 1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::abs(gamma_moment(g2, 2, 0.5) - std::sqrt(std::numbers::pi) / 2.0) < 1e-12);
    CHECK(std::abs(gamma_moment(g1, 1000, 1.6) / gamma_moment_asymptotic(g1, 1000, 1.6) - 1.0) < 1e-3);
    CHECK(gamma_moment_asymptotic(g1, 1, 1) == gamma_moment(g1, 1, 1));
    CHECK(gamma_moment_asymptotic(g2, 20, 2) == doctest::Approx(100.0));
    // Very large shapes stay finite.
    CHECK(std::isfinite(gamma_moment(g1, 1e12, 1.9)));
}

TEST_CASE("tss moment cumulant cases") {
    const TssParams p(0.7, 1.0);
    CHECK(tss_moment(p, 10, 1) == doctest::Approx(7.0).epsilon(1e-14));
    CHECK(tss_moment(p, 10, 2) == doctest::Approx(51.1).epsilon(1e-14));
    CHECK(tss_moment_asymptotic(p, 10, 1) == doctest::Approx(7.0));
    const TssParams r(0.3, 2.5);
    CHECK(tss_moment(r, 3, 1) == doctest::Approx(3 * 0.3 * std::pow(2.5, -0.7)).epsilon(1e-14));
}

TEST_CASE("tss moment is continuous across the integer cases") {
    const TssParams p(0.6, 1.5);
    for (double t : {0.1, 5.0, 300.0}) {
        CAPTURE(t);
        CHECK(tss_moment(p, t, 1.0 - 1e-7) == doctest::Approx(tss_moment(p, t, 1.0)).epsilon(1e-6));
        CHECK(tss_moment(p, t, 1.0 + 1e-7) == doctest::Approx(tss_moment(p, t, 1.0)).epsilon(1e-6));
        CHECK(tss_moment(p, t, 2.0 - 1e-7) == doctest::Approx(tss_moment(p, t, 2.0)).epsilon(1e-6));
    }
}

TEST_CASE("tss moment agrees with integration against the density") {
    for (double lambda : {0.5, 1.0, 3.0}) {
        for (double t : {0.3, 2.0, 20.0}) {
            for (double q : {0.2, 0.6, 1.3, 1.6, 1.95}) {
                CAPTURE(lambda);
                CAPTURE(t);
                CAPTURE(q);
                const double by_density = half_stable_moment_by_density(lambda, t, q);
                CHECK(tss_moment(TssParams(0.5, lambda), t, q) == doctest::Approx(by_density).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("tss moment asymptotic examples") {
    CHECK(std::abs(tss_moment(TssParams(0.5, 2.0), 1e3, 0.8) / tss_moment_asymptotic(TssParams(0.5, 2.0), 1e3, 0.8) - 1) < 0.05);
    const TssParams p(0.7, 1.0);
    CHECK(std::abs(tss_moment(p, 100, 1.1) / tss_moment_asymptotic(p, 100, 1.1) - 1) < 0.1);
    CHECK(std::abs(tss_moment(p, 1e4, 1.4) / tss_moment_asymptotic(p, 1e4, 1.4) - 1) < 0.02);
}

TEST_CASE("moment ratios approach one monotonically") {
    const std::vector<SubordinatorSpec> specs{TssParams(0.7, 1.0), TssParams(0.4, 2.0), GammaParams(1.0), GammaParams(3.0)};
    for (const auto& spec : specs) {
        for (double q : {0.6, 1.1, 1.6}) {
            double prev_gap = INFINITY;
            for (double t : {10.0, 1e2, 1e3, 1e4}) {
                const double gap = std::abs(subordinator_moment(spec, t, q) / subordinator_moment_asymptotic(spec, t, q) - 1);
                CAPTURE(q);
                CAPTURE(t);
                CHECK(gap < prev_gap);
                prev_gap = gap;
            }
        }
    }
}

TEST_CASE("moments increase in t") {
    const std::vector<SubordinatorSpec> specs{TssParams(0.7, 1.0), GammaParams(2.0)};
    for (const auto& spec : specs) {
        for (double q : {0.3, 1.0, 1.7}) {
            double prev = 0.0;
            for (double t = 0.05; t < 1e4; t *= 1.7) {
                const double m = subordinator_moment(spec, t, q);
                REQUIRE(m > prev);
                prev = m;
            }
        }
    }
}

TEST_CASE("dispatch") {
    CHECK(subordinator_moment(GammaParams(2.0), 3.0, 0.7) == gamma_moment(GammaParams(2.0), 3.0, 0.7));
    CHECK(subordinator_moment(TssParams(0.7, 1.0), 3.0, 0.7) == tss_moment(TssParams(0.7, 1.0), 3.0, 0.7));
    CHECK(subordinator_moment_asymptotic(GammaParams(2.0), 3.0, 0.7) == gamma_moment_asymptotic(GammaParams(2.0), 3.0, 0.7));
    CHECK(subordinator_moment_asymptotic(TssParams(0.7, 1.0), 3.0, 0.7) == tss_moment_asymptotic(TssParams(0.7, 1.0), 3.0, 0.7));
}

TEST_CASE("sampled increments match the moment oracles") {
    struct Case {
        SubordinatorSpec spec;
        double t;
    };
    const std::vector<Case> cases{{TssParams(0.7, 1.0), 10.0}, {GammaParams(1.0), 1.0}, {GammaParams(1.0), 10.0}};
    std::uint64_t seed = 200;
    for (const auto& c : cases) {
        const auto xs = increments(c.spec, c.t, 100000, seed++);
        for (double q : {0.6, 1.0, 1.6}) {
            CAPTURE(subordinator_name(c.spec));
            CAPTURE(c.t);
            CAPTURE(q);
            const auto sum = tcgm::testing::mean_of(xs, [q](double x) { return std::pow(x, q); });
            CHECK(std::abs(sum.mean - subordinator_moment(c.spec, c.t, q)) < kMcZ * sum.std_error);
        }
    }
}

TEST_CASE("sample_path examples") {
    auto s = derive_stream(211, 0);
    const SubordinatorPathSampler gamma(GammaParams(1.0), TimeGrid({1.0}));
    const SubordinatorPathSampler tss(TssParams(0.7, 1.0), TimeGrid({10.0}));
    std::vector<double> g(100000), h(100000);
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] = gamma(s).values[0];
        h[i] = tss(s).values[0];
    }
    const auto gs = tcgm::testing::summarize(g), hs = tcgm::testing::summarize(h);
    CHECK(std::abs(gs.mean - 1.0) < kMcZ * gs.std_error);
    CHECK(std::abs(hs.mean - 7.0) < kMcZ * hs.std_error);
}

TEST_CASE("paths are nondecreasing and start at zero on a zero grid point") {
    const std::vector<SubordinatorSpec> specs{TssParams(0.3, 0.2), TssParams(0.9, 5.0), GammaParams(0.1), GammaParams(50.0)};
    const auto grid = TimeGrid({0.0, 1e-4, 0.01, 0.5, 0.5001, 3.0, 100.0, 1e4});
    for (const auto& spec : specs) {
        const SubordinatorPathSampler sampler(spec, grid);
        for (std::uint64_t id = 0; id < 500; ++id) {
            auto s = derive_stream(223, id);
            const auto path = sampler(s);
            REQUIRE(path.values.size() == grid.size());
            REQUIRE(path.values[0] == 0.0);
            for (std::size_t i = 1; i < path.values.size(); ++i) REQUIRE(path.values[i] >= path.values[i - 1]);
        }
    }
}

TEST_CASE("increments are stationary") {
    const std::vector<SubordinatorSpec> specs{TssParams(0.7, 1.0), GammaParams(1.0)};
    std::uint64_t seed = 227;
    for (const auto& spec : specs) {
        const SubordinatorPathSampler sampler(spec, TimeGrid({1.0, 3.0}));
        std::vector<double> diffs(10000);
        auto s = derive_stream(seed++, 0);
        for (auto& d : diffs) {
            const auto p = sampler(s);
            d = p.values[1] - p.values[0];
        }
        const auto direct = increments(spec, 2.0, 10000, seed++);
        CAPTURE(subordinator_name(spec));
        CHECK(tcgm::testing::ks_two_sample(diffs, direct) < tcgm::testing::ks_critical_1pct(10000, 10000));
    }
}

TEST_CASE("tss moment over extreme parameters satisfies Lyapunov's inequality") {
    const std::vector<double> qs{0.01, 0.3, 0.999, 1.0, 1.001, 1.5, 1.999, 2.0};
    for (double alpha : {0.05, 0.3, 0.7, 0.95}) {
        for (double lambda : {0.01, 1.0, 100.0}) {
            for (double t : {1e-12, 1e-6, 1e-3, 1.0, 1e5, 1e9}) {
                CAPTURE(alpha);
                CAPTURE(lambda);
                CAPTURE(t);
                const TssParams p(alpha, lambda);
                double prev_norm = 0.0;
                for (double q : qs) {
                    CAPTURE(q);
                    double m = 0.0;
                    REQUIRE_NOTHROW(m = tss_moment(p, t, q));
                    REQUIRE(m > 0.0);
                    const double norm = std::pow(m, 1.0 / q);
                    CHECK(norm >= prev_norm * (1.0 - 1e-9));
                    prev_norm = norm;
                }
            }
        }
    }
}

TEST_CASE("tss moment satisfies Jensen's inequality at random parameters") {
    auto s = derive_stream(229, 0);
    for (int k = 0; k < 3000; ++k) {
        const double alpha = 0.02 + 0.96 * s.uniform();
        const double lambda = std::pow(10.0, -3.0 + 6.0 * s.uniform());
        const double t = std::pow(10.0, -12.0 + 22.0 * s.uniform());
        const double q = 2.0 * s.uniform();
        CAPTURE(alpha);
        CAPTURE(lambda);
        CAPTURE(t);
        CAPTURE(q);
        const TssParams p(alpha, lambda);
        double m = 0.0;
        REQUIRE_NOTHROW(m = tss_moment(p, t, q));
        const double jensen = std::pow(p.mean(t), q);
        if (q < 1.0) REQUIRE(m <= jensen * (1.0 + 1e-9));
        else REQUIRE(m >= jensen * (1.0 - 1e-9));
    }
}
