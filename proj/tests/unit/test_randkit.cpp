#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "support/stats.hpp"
#include "tcgm/errors.hpp"
#include "tcgm/randkit.hpp"
#include "tcgm/stable.hpp"
#include "tcgm/subordinators.hpp"

using namespace tcgm;
using tcgm::testing::summarize;

namespace {

std::vector<double> draw(std::size_t n, auto&& gen) {
    std::vector<double> xs(n);
    for (auto& x : xs) x = gen();
    return xs;
}

// Empirical E[exp(-u X)] against the closed form, within 3 standard errors.
void check_laplace(std::span<const double> xs, double u, double expected) {
    const auto lt = tcgm::testing::mean_of(xs, [u](double x) { return std::exp(-u * x); });
    INFO("u = " << u << " empirical " << lt.mean << " expected " << expected << " se " << lt.std_error);
    CHECK(std::abs(lt.mean - expected) < tcgm::testing::kMcZ * lt.std_error + 1e-300);
}

}  // namespace

TEST_CASE("philox known-answer vectors") {
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}) == A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0})
          == A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("derive_stream is deterministic and seed sensitive") {
    auto a = derive_stream(1, 0), b = derive_stream(1, 0);
    for (int i = 0; i < 100; ++i) REQUIRE(a.uniform() == b.uniform());
    CHECK(a.counter() == 100);

    auto c = derive_stream(1, 0), d = derive_stream(2, 0);
    CHECK(c.next_u64() != d.next_u64());

    // Replaying from a saved counter reproduces the same draw.
    auto e = derive_stream(7, 3);
    e.uniform();
    RngStream saved = e;
    CHECK(sample_std_normal(e) == sample_std_normal(saved));
}

TEST_CASE("streams with different ids are uncorrelated") {
    auto s0 = derive_stream(1, 0), s1 = derive_stream(1, 1);
    const auto x = draw(10000, [&] { return sample_std_normal(s0); });
    const auto y = draw(10000, [&] { return sample_std_normal(s1); });
    CHECK(std::abs(tcgm::testing::correlation(x, y)) < 0.05);

    // Sparse ids are as good as adjacent ones.
    auto far = derive_stream(1, 1ull << 40);
    const auto z = draw(10000, [&] { return sample_std_normal(far); });
    CHECK(std::abs(tcgm::testing::correlation(x, z)) < 0.05);
}

TEST_CASE("split streams are independent of the parent") {
    auto parent = derive_stream(5, 9);
    auto child = parent.split(1);
    auto child2 = parent.split(1);  // parent advanced, so a different child
    CHECK(child.next_u64() != child2.next_u64());
    const auto x = draw(10000, [&] { return sample_std_normal(parent); });
    const auto y = draw(10000, [&] { return sample_std_normal(child); });
    CHECK(std::abs(tcgm::testing::correlation(x, y)) < 0.05);
}

TEST_CASE("uniform stays in the open unit interval") {
    auto s = derive_stream(3, 0);
    for (int i = 0; i < 100000; ++i) {
        const double u = s.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("standard normal moments and KS") {
    auto s = derive_stream(11, 0);
    const auto xs = draw(100000, [&] { return sample_std_normal(s); });
    const auto sum = summarize(xs);
    CHECK(std::abs(sum.mean) < 0.01);
    CHECK(std::abs(sum.variance - 1.0) < 0.015);

    const std::vector<double> head(xs.begin(), xs.begin() + 10000);
    CHECK(tcgm::testing::ks_statistic(head, tcgm::testing::std_normal_cdf) < 0.0163);
}

TEST_CASE("gamma sampler") {
    auto s = derive_stream(13, 0);
    SUBCASE("shape 1") {
        const auto xs = draw(100000, [&] { return sample_gamma(s, 1.0); });
        CHECK(std::abs(summarize(xs).mean - 1.0) < 0.01);
    }
    SUBCASE("shape 2") {
        const auto xs = draw(100000, [&] { return sample_gamma(s, 2.0); });
        CHECK(std::abs(summarize(xs).mean - 2.0) < 0.014);
    }
    SUBCASE("shape 0.3 exercises the boosted branch") {
        const auto xs = draw(100000, [&] { return sample_gamma(s, 0.3); });
        CHECK(std::abs(summarize(xs).mean - 0.3) < 0.006);
        // Var = shape
        CHECK(std::abs(summarize(xs).variance - 0.3) < 0.02);
        for (double x : xs) REQUIRE(x > 0.0);
        check_laplace(xs, 1.0, std::pow(2.0, -0.3));
    }
    SUBCASE("tiny shape stays positive") {
        for (int i = 0; i < 10000; ++i) REQUIRE(sample_gamma(s, 1e-3) > 0.0);
    }
    CHECK_THROWS_AS(sample_gamma(s, 0.0), DomainError);
    CHECK_THROWS_AS(sample_gamma(s, -1.0), DomainError);
}

TEST_CASE("Zolotarev function is increasing on (0, pi)") {
    for (double alpha : {0.1, 0.5, 0.7, 0.95}) {
        CHECK(std::exp(log_zolotarev(0.0, alpha)) == doctest::Approx(std::pow(alpha, alpha) * std::pow(1 - alpha, 1 - alpha)));
        double prev = log_zolotarev(0.0, alpha);
        for (int k = 1; k < 1000; ++k) {
            const double cur = log_zolotarev(std::numbers::pi * k / 1000.0, alpha);
            REQUIRE(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("positive stable sampler matches its Laplace transform") {
    auto s = derive_stream(17, 0);
    SUBCASE("alpha 0.5, scale 1") {
        const auto xs = draw(100000, [&] { return sample_stable_subordinator_increment(s, 0.5, 1.0); });
        check_laplace(xs, 1.0, std::exp(-1.0));
        check_laplace(xs, 0.5, std::exp(-std::sqrt(0.5)));
        check_laplace(xs, 2.0, std::exp(-std::sqrt(2.0)));
        for (double x : xs) REQUIRE(x > 0.0);
    }
    SUBCASE("alpha 0.7, scale 2") {
        const auto xs = draw(100000, [&] { return sample_stable_subordinator_increment(s, 0.7, 2.0); });
        check_laplace(xs, 1.0, std::exp(-2.0));
        for (double x : xs) REQUIRE(x > 0.0);
    }
    CHECK_THROWS_AS(sample_stable_subordinator_increment(s, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(sample_stable_subordinator_increment(s, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(sample_stable_subordinator_increment(s, 0.5, 0.0), DomainError);
}

TEST_CASE("tempered stable increments: cumulants and Laplace transform") {
    struct Case {
        double alpha, lambda, dt;
    };
    // Covers both methods: dt * lambda^alpha below and above 4 ln 2.
    for (const auto c : {Case{0.7, 1.0, 10.0}, Case{0.5, 1.0, 1.0}, Case{0.5, 1.0, 2.5}, Case{0.3, 2.0, 5.0},
                         Case{0.9, 0.5, 40.0}, Case{0.7, 1.0, 1e4}}) {
        CAPTURE(c.alpha);
        CAPTURE(c.lambda);
        CAPTURE(c.dt);
        const TemperedStableSampler sampler(c.alpha, c.lambda, c.dt);
        const TssParams params(c.alpha, c.lambda);
        auto s = derive_stream(19, 0);
        const auto xs = draw(100000, [&] { return sampler(s); });
        const auto sum = summarize(xs);
        CHECK(std::abs(sum.mean - params.mean(c.dt)) < tcgm::testing::kMcZ * sum.std_error);
        const double var = params.variance(c.dt);
        CHECK(std::abs(sum.variance - var) < tcgm::testing::kMcZ * tcgm::testing::variance_std_error(xs));
        for (double u : {0.5, 1.0, 2.0}) {
            const double scaled = u / std::sqrt(var);  // keeps exp(-uX) away from underflow for large dt
            check_laplace(xs, scaled, params.laplace(c.dt, scaled));
        }
        for (double x : xs) REQUIRE(x > 0.0);
    }
}

TEST_CASE("tempered stable spec examples") {
    auto s = derive_stream(23, 0);
    const auto a = draw(100000, [&] { return sample_tempered_stable_increment(s, 0.5, 1.0, 1.0); });
    check_laplace(a, 1.0, std::exp(-(std::sqrt(2.0) - 1.0)));

    const TemperedStableSampler sampler(0.7, 1.0, 10.0);
    CHECK(sampler.method() == TemperedStableSampler::Method::zolotarev_cells);
    const auto b = draw(100000, [&] { return sampler(s); });
    const auto sum = summarize(b);
    CHECK(std::abs(sum.mean - 7.0) < tcgm::testing::kMcZ * sum.std_error);

    CHECK(TemperedStableSampler(0.5, 1.0, 1.0).method() == TemperedStableSampler::Method::substep_rejection);
    CHECK(TemperedStableSampler(0.5, 1.0, 2.5).substeps() == 4);
    CHECK_THROWS_AS(TemperedStableSampler(1.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(TemperedStableSampler(0.5, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(TemperedStableSampler(0.5, 1.0, 0.0), DomainError);
}

TEST_CASE("tempering with lambda -> 0 converges to the untempered stable law") {
    auto s1 = derive_stream(29, 0), s2 = derive_stream(29, 1);
    const TemperedStableSampler tempered(0.6, 1e-9, 1.0);
    const auto xs = draw(100000, [&] { return tempered(s1); });
    const auto ys = draw(100000, [&] { return sample_stable_subordinator_increment(s2, 0.6, 1.0); });
    for (double u : {0.5, 1.0, 2.0}) {
        const auto a = tcgm::testing::mean_of(xs, [u](double x) { return std::exp(-u * x); });
        const auto b = tcgm::testing::mean_of(ys, [u](double x) { return std::exp(-u * x); });
        CHECK(std::abs(a.mean - b.mean) < tcgm::testing::kMcZ * std::hypot(a.std_error, b.std_error));
    }
}

TEST_CASE("samplers are pure functions of the stream state") {
    auto a = derive_stream(31, 4), b = derive_stream(31, 4);
    const TemperedStableSampler big(0.7, 1.0, 500.0);
    for (int i = 0; i < 1000; ++i) {
        REQUIRE(big(a) == big(b));
        REQUIRE(sample_gamma(a, 0.4) == sample_gamma(b, 0.4));
        REQUIRE(sample_tempered_stable_increment(a, 0.5, 1.0, 1.0) == sample_tempered_stable_increment(b, 0.5, 1.0, 1.0));
    }
}
