#pragma once

// Dyadic decomposition of the projector kernel Z_k by geodesic distance.
//
// Piece j >= 1 is Z_k(cos d) beta(lambda_k 2^{-j} d) with beta the indicator of [1/2, 1),
// so it lives on 2^{j-1}/lambda_k <= d < 2^j/lambda_k; piece 0 is the remainder near the
// pole, d < 1/lambda_k. The pieces sum to Z_k exactly.

#include "sphres/kernel.hpp"
#include "sphres/norm_estimate.hpp"
#include "sphres/regression.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphres {

/// Littlewood-Paley profile: sum_j beta(2^{-j} t) = 1 for t >= 1/2, one term per t.
inline double bump(double t)
{
    return (t >= 0.5 && t < 1.0) ? 1.0 : 0.0;
}

struct DyadicPiece {
    int base = 0;        ///< harmonic degree k
    int j = 0;           ///< dyadic index; 0 is the near-pole remainder
    double lo = 0.0;     ///< support [lo, hi) in geodesic distance
    double hi = 0.0;
    ZonalKernel kernel;

    bool empty() const noexcept { return !(lo < std::numbers::pi); }
};

/// Number of the last piece: J = ceil(log2(pi lambda_k)) + 1.
inline int dyadic_count(const SphereSpec& spec, int k)
{
    return static_cast<int>(std::ceil(std::log2(std::numbers::pi * eigenvalue(spec, k)))) + 1;
}

/// Pieces j = 0..J of Z_k. Pieces whose support starts beyond pi are kept (and vanish).
inline std::vector<DyadicPiece> dyadic_decompose(const SphereSpec& spec, int k)
{
    if (k < 1) {
        throw std::domain_error("dyadic_decompose: k >= 1 is required");
    }
    const double lam = eigenvalue(spec, k);
    const int big_j = dyadic_count(spec, k);
    std::vector<DyadicPiece> out;
    for (int j = 0; j <= big_j; ++j) {
        const double lo = (j == 0) ? 0.0 : std::ldexp(1.0, j - 1) / lam;
        const double hi = std::ldexp(1.0, j) / lam;
        Profile profile = [spec, k](double d) { return cplx(zonal_value(spec, k, std::cos(d)), 0.0); };
        auto kernel = ZonalKernel::pointwise(spec, std::move(profile), lo, hi, {lo, hi}, KernelKind::dyadic_piece,
                                             "T_" + std::to_string(j) + "(H_" + std::to_string(k) + ")", 1.0 / lam);
        kernel.set_base_degree(k);
        out.push_back({k, j, lo, std::min(hi, std::numbers::pi), std::move(kernel)});
    }
    return out;
}

/// Pieces usable for slope fits: j >= 1 with 2^j/lambda_k <= 3 pi/4, the range where the
/// kernel has its oscillatory form (away from the pole and the antipode).
inline std::vector<int> fit_range(const SphereSpec& spec, int k)
{
    const double lam = eigenvalue(spec, k);
    std::vector<int> js;
    for (int j = 1; j <= dyadic_count(spec, k); ++j) {
        if (std::ldexp(1.0, j) / lam <= 0.75 * std::numbers::pi) {
            js.push_back(j);
        }
    }
    return js;
}

/// Grid for dyadic work: the finest piece has width 1/lambda_k and must be resolved.
inline GridPtr dyadic_grid(const SphereSpec& spec, int k, int points_per_wavelength = 8)
{
    const int points = std::max(4 * k + 16, static_cast<int>(std::ceil(points_per_wavelength * eigenvalue(spec, k) *
                                                                       std::numbers::pi / 2.0)));
    return make_grid(spec, points, (points - 1) / 2);
}

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0; ///< log2 of the fitted constant M
    double residual = 0.0;
    std::vector<int> j;
    std::vector<double> norms;
};

struct PieceSlopes {
    SlopeFit at_p;
    SlopeFit at_q;
};

inline SlopeFit fit_log2_norms(const std::vector<int>& js, const std::vector<double>& norms)
{
    if (js.size() < 3) {
        throw std::invalid_argument("piece_norm_slopes: fewer than 3 usable dyadic pieces");
    }
    std::vector<double> x(js.begin(), js.end());
    std::vector<double> y;
    for (double v : norms) {
        y.push_back(std::log2(v));
    }
    const auto line = least_squares(x, y);
    return {line.slope, line.intercept, line.residual, js, norms};
}

/// Least-squares slopes of log2 ||T_j|| against j at the exponent points P and Q.
inline PieceSlopes piece_norm_slopes(const SphereSpec& spec, int k, ExponentPoint p, ExponentPoint q,
                                     const AscentOptions& opt = {}, GridPtr grid = nullptr)
{
    const auto pieces = dyadic_decompose(spec, k);
    const auto js = fit_range(spec, k);
    if (js.size() < 3) {
        throw std::invalid_argument("piece_norm_slopes: fewer than 3 usable dyadic pieces");
    }
    if (!grid) {
        grid = dyadic_grid(spec, k);
    }
    std::vector<double> np;
    std::vector<double> nq;
    for (int j : js) {
        const auto op = discretize(pieces[j].kernel, grid);
        np.push_back(norm_lower(op, p.r(), p.y > 0.0 ? p.s() : infinity, opt).value);
        nq.push_back(norm_lower(op, q.r(), q.y > 0.0 ? q.s() : infinity, opt).value);
    }
    return {fit_log2_norms(js, np), fit_log2_norms(js, nq)};
}

} // namespace sphres
