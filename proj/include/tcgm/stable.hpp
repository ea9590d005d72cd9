#pragma once

#include <cstddef>
#include <vector>

#include "tcgm/randkit.hpp"

namespace tcgm {

/// log of Zolotarev's function raised to (1 - alpha):
///   sin(alpha u)^alpha sin((1 - alpha) u)^(1 - alpha) / sin(u),  u in [0, pi).
/// Increasing in u; equals alpha^alpha (1 - alpha)^(1 - alpha) at u = 0.
double log_zolotarev(double u, double alpha) noexcept;

/**
 * Exact sampler for one tempered stable subordinator increment.
 *
 * The increment over `dt` has Laplace transform
 *     exp(-dt * ((lambda + u)^alpha - lambda^alpha)).
 * Two exact methods are used depending on the tilting mass dt * lambda^alpha:
 *
 *  - substep rejection: dt is split into n pieces with dt' * lambda^alpha <= ln 2.
 *    On each piece a Kanter stable proposal with scale dt' is accepted with
 *    probability exp(-lambda X). Cost grows linearly with dt * lambda^alpha.
 *  - Zolotarev cells: Kanter's representation S = (a(U)/E)^((1-alpha)/alpha) is
 *    tilted jointly in (U, E). After the substitution E = theta(U) * Y the joint
 *    target is theta(u) exp(-theta(u) psi(y)) with psi(y) = y + y^(-b)/b, which
 *    is bounded on cells of constant theta-width by a piecewise exponential
 *    envelope. Cost is bounded independently of dt.
 */
class TemperedStableSampler {
public:
    enum class Method { substep_rejection, zolotarev_cells };

    TemperedStableSampler(double alpha, double lambda, double dt);

    double operator()(RngStream& stream) const;

    Method method() const noexcept { return method_; }
    double alpha() const noexcept { return alpha_; }
    double lambda() const noexcept { return lambda_; }
    double dt() const noexcept { return dt_; }
    int substeps() const noexcept { return substeps_; }

    /// Largest number of substeps handled by substep rejection before the
    /// cell method takes over.
    static constexpr int kMaxSubsteps = 4;

private:
    struct Piece {
        double lo;
        double hi;         // +inf for the last piece
        double slope;      // of the tangent line
        double value_lo;   // tangent value at lo (hi when slope < 0)
        double log_mass;
    };

    struct Cell {
        double u_lo;
        double u_width;
        double theta;
        double cdf;        // cumulative selection probability, last cell == 1
        std::size_t first_piece;
    };

    double sample_substeps(RngStream& stream) const;
    double sample_cells(RngStream& stream) const;
    void build_cells();

    double alpha_;
    double lambda_;
    double dt_;
    Method method_;
    int substeps_ = 0;
    double substep_dt_ = 0.0;

    // Zolotarev cell state.
    double lambda_pow_ = 0.0;   // (lambda * dt^(1/alpha))^alpha = dt * lambda^alpha
    double b_ = 0.0;            // (1 - alpha) / alpha
    double psi_min_ = 0.0;      // psi(1) = 1 / (1 - alpha)
    std::vector<Cell> cells_;
    std::vector<Piece> pieces_; // kPiecesPerCell per cell
};

}  // namespace tcgm
