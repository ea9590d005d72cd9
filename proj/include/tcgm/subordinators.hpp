#pragma once

#include <string>
#include <variant>
#include <vector>

#include "tcgm/fbm.hpp"
#include "tcgm/randkit.hpp"
#include "tcgm/stable.hpp"

namespace tcgm {

/// Tempered stable subordinator parameters: stability index alpha in (0, 1)
/// and tempering lambda > 0.
class TssParams {
public:
    TssParams(double alpha, double lambda);
    double alpha() const noexcept { return alpha_; }
    double lambda() const noexcept { return lambda_; }

    /// E[S_t] = t alpha lambda^(alpha - 1)
    double mean(double t) const;
    /// Var[S_t] = t alpha (1 - alpha) lambda^(alpha - 2)
    double variance(double t) const;
    /// E[exp(-u S_t)] = exp(-t ((lambda + u)^alpha - lambda^alpha))
    double laplace(double t, double u) const;

private:
    double alpha_;
    double lambda_;
};

/// Gamma process: the increment over a span t is Gamma(shape t / nu, rate 1).
class GammaParams {
public:
    explicit GammaParams(double nu);
    double nu() const noexcept { return nu_; }

    double shape(double t) const { return t / nu_; }
    double laplace(double t, double u) const;

private:
    double nu_;
};

using SubordinatorSpec = std::variant<TssParams, GammaParams>;

std::string subordinator_name(const SubordinatorSpec& spec);

struct SubordinatorPath {
    TimeGrid grid;
    std::vector<double> values;  // nondecreasing, same length as grid
};

/// Draws the increment of the subordinator over a fixed span `dt`.
class IncrementSampler {
public:
    IncrementSampler(const SubordinatorSpec& spec, double dt);
    double operator()(RngStream& stream) const;
    double dt() const noexcept { return dt_; }

private:
    double dt_;
    std::variant<TemperedStableSampler, double> impl_;  // double: Gamma shape
};

/// Path sampler for a fixed grid; the per-gap increment samplers are built once.
/// The first increment runs from time 0 to grid[0] (skipped when grid[0] == 0).
class SubordinatorPathSampler {
public:
    SubordinatorPathSampler(const SubordinatorSpec& spec, TimeGrid grid);
    SubordinatorPath operator()(RngStream& stream) const;
    const TimeGrid& grid() const noexcept { return grid_; }

private:
    TimeGrid grid_;
    std::vector<IncrementSampler> gaps_;
    bool starts_at_zero_;
};

SubordinatorPath sample_path(const SubordinatorSpec& spec, const TimeGrid& grid, RngStream& stream);

/// Gamma(t/nu + q) / Gamma(t/nu): exact q-th moment of Gamma(t/nu, 1).
double gamma_moment(const GammaParams& params, double t, double q);
/// (t / nu)^q
double gamma_moment_asymptotic(const GammaParams& params, double t, double q);

/**
 * E[S_t^q] for the tempered stable subordinator, q in (0, 2].
 *
 * q = 1 and q = 2 come from the cumulants. Otherwise the moment is recovered
 * from the Laplace transform phi:
 *   q in (0,1):  E X^q = q / Gamma(1-q)       * int u^(-q-1) (1 - phi(u)) du
 *   q in (1,2):  E X^q = q(q-1) / Gamma(2-q)  * int u^(-q-1) (phi(u) - 1 + m1 u) du
 * The integral is taken in v = m1 u, split at v = 1 (tanh-sinh on [0,1],
 * exp-sinh on [1, inf) with the algebraic part integrated in closed form).
 * Throws NumericalError if the error estimate exceeds 1e-8 relative.
 */
double tss_moment(const TssParams& params, double t, double q);
/// (alpha lambda^(alpha-1) t)^q
double tss_moment_asymptotic(const TssParams& params, double t, double q);

double subordinator_moment(const SubordinatorSpec& spec, double t, double q);
double subordinator_moment_asymptotic(const SubordinatorSpec& spec, double t, double q);

}  // namespace tcgm
