#pragma once

// Bourgain's summation trick: pieces T_j with ||T_j|| <= M1 2^{beta1 j} at (1/p1, 1/q1) and
// ||T_j|| <= M2 2^{-beta2 j} at (1/p2, 1/q2) give a restricted weak-type bound for the sum
// at the interpolated point, theta = beta2/(beta1 + beta2). The proof splits the sum at an
// integer rho balancing the two geometric series.

#include "sphres/dyadic.hpp"
#include "sphres/exponents.hpp"
#include "sphres/kernel.hpp"
#include "sphres/norms.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphres {

struct InterpolationData {
    ExponentPoint growth;  ///< (1/p1, 1/q1)
    ExponentPoint decay;   ///< (1/p2, 1/q2)
    double M1 = 1.0;
    double M2 = 1.0;
    double beta1 = 1.0;
    double beta2 = 1.0;
    double theta = 0.5;
    ExponentPoint target;  ///< (1/p, 1/q)
};

inline InterpolationData make_interp(ExponentPoint growth, ExponentPoint decay, double M1, double M2, double beta1,
                                     double beta2)
{
    if (!(beta1 > 0.0) || !(beta2 > 0.0)) {
        throw std::invalid_argument("make_interp: rates beta1, beta2 must be positive");
    }
    if (!(M1 > 0.0) || !(M2 > 0.0)) {
        throw std::invalid_argument("make_interp: constants M1, M2 must be positive");
    }
    for (const auto& e : {growth, decay}) {
        if (!(e.x >= 0.0 && e.x <= 1.0 && e.y >= 0.0 && e.y <= 1.0)) {
            throw std::invalid_argument("make_interp: exponents must lie in [1, inf]");
        }
    }
    InterpolationData d{growth, decay, M1, M2, beta1, beta2, 0.0, {}};
    d.theta = beta2 / (beta1 + beta2);
    d.target = {d.theta * growth.x + (1.0 - d.theta) * decay.x, d.theta * growth.y + (1.0 - d.theta) * decay.y};
    return d;
}

/// Endpoints and rates of the dyadic interpolation for the sigma-line: growth at Q = (sigma, 0)
/// with rate (n+1)/2 - n sigma, decay at P with rate (n+1) sigma/2 - 1. On sigma = 2/(n+1)
/// the pair is A (growth 1/2) and B (decay (n-1)/2).
struct DyadicRates {
    ExponentPoint growth;
    ExponentPoint decay;
    double beta1 = 0.0;
    double beta2 = 0.0;
};

inline DyadicRates dyadic_rates(int n, double sigma)
{
    if (n < 2) {
        throw std::domain_error("dyadic_rates: n >= 2 is required");
    }
    if (std::abs(sigma - 2.0 / (n + 1.0)) < 1e-12) {
        const auto sp = special_points(n);
        return {sp.A, sp.B, 0.5, 0.5 * (n - 1.0)};
    }
    const double b1 = 0.5 * (n + 1.0) - n * sigma;
    const double b2 = 0.5 * (n + 1.0) * sigma - 1.0;
    if (!(b1 > 0.0) || !(b2 > 0.0)) {
        throw std::domain_error("dyadic_rates: both rates must be positive for this sigma");
    }
    const auto st = stein_point(n, sigma);
    return {st.Q, st.P, b1, b2};
}

/// Constant M of the bound M 2^{slope j} fitted by least squares in log2 with the slope fixed.
inline double fit_constant(const std::vector<int>& js, const std::vector<double>& norms, double slope)
{
    if (js.empty() || js.size() != norms.size()) {
        throw std::invalid_argument("fit_constant: matching nonempty inputs are required");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < js.size(); ++i) {
        if (!(norms[i] > 0.0)) {
            throw std::invalid_argument("fit_constant: norms must be positive");
        }
        acc += std::log2(norms[i]) - slope * js[i];
    }
    return std::exp2(acc / static_cast<double>(js.size()));
}

enum class SplitBranch { split, tail_only };

inline std::string to_string(SplitBranch b)
{
    return b == SplitBranch::split ? "split" : "tail-only";
}

struct Split {
    int rho = 0;
    SplitBranch branch = SplitBranch::tail_only;
    double quantity = 0.0; ///< (M1/M2 mu(E)^{1/p2-1/p1} mu(A)^{1/q2'-1/q1'})^{1/(beta1+beta2)}
};

/// The integer split: 2^rho < quantity <= 2^{rho+1} when quantity > 1, otherwise rho = 0.
inline Split optimal_split(const InterpolationData& d, double mu_e, double mu_a)
{
    if (!(mu_e > 0.0) || !(mu_a > 0.0) || !std::isfinite(mu_e) || !std::isfinite(mu_a)) {
        throw std::invalid_argument("optimal_split: measures must be finite and positive");
    }
    // 1/q2' - 1/q1' = (1 - 1/q2) - (1 - 1/q1)
    const double log2q = (std::log2(d.M1 / d.M2) + (d.decay.x - d.growth.x) * std::log2(mu_e) +
                          (d.growth.y - d.decay.y) * std::log2(mu_a)) /
                         (d.beta1 + d.beta2);
    Split s;
    s.quantity = std::exp2(log2q);
    if (!(s.quantity > 1.0)) {
        return s;
    }
    s.branch = SplitBranch::split;
    int rho = std::max(0, static_cast<int>(std::ceil(log2q)) - 1);
    while (rho > 0 && !(std::ldexp(1.0, rho) < s.quantity)) {
        --rho;
    }
    while (!(s.quantity <= std::ldexp(1.0, rho + 1))) {
        ++rho;
    }
    s.rho = rho;
    return s;
}

/// A piece operator with its dyadic index.
struct IndexedPiece {
    int j = 0;
    const DiscreteOperator* op = nullptr;
};

struct CapCertificate {
    double theta0 = 0.0;
    double measure = 0.0;       ///< grid measure of E
    double weak = 0.0;          ///< ||T 1_E||_{q, inf}
    double constant = 0.0;      ///< weak / (M1^theta M2^{1-theta} mu(E)^{1/p})
    double level = 0.0;         ///< level t* attaining the weak norm
    double level_measure = 0.0; ///< mu(A), A = {|T 1_E| >= t*}
    double pairing = 0.0;       ///< |<T 1_E, sgn(T 1_E) 1_A>| >= t* mu(A)
    Split split;
    double finite_part = 0.0;   ///< sum_{j <= rho} M1 2^{beta1 j} mu(E)^{1/p1} mu(A)^{1/q1'}
    double tail_part = 0.0;     ///< sum_{j > rho} M2 2^{-beta2 j} mu(E)^{1/p2} mu(A)^{1/q2'}
    std::vector<int> violations; ///< pieces whose action on 1_E exceeds an assumed bound
};

struct RestrictedWeakReport {
    double c_obs = 0.0;
    std::vector<CapCertificate> caps;
};

namespace detail {

inline double exponent_of(double inv)
{
    return inv > 0.0 ? 1.0 / inv : infinity;
}

} // namespace detail

/// Restricted weak-type certificate for T = sum of the given pieces at data.target, tested
/// on the caps of the given radii. Each cap's assembled T 1_E is swept exactly over its
/// node values; the split bound of the proof is evaluated at the maximizing level set.
inline RestrictedWeakReport certify_restricted_weak(const std::vector<IndexedPiece>& pieces, const InterpolationData& d,
                                                    const std::vector<double>& radii, double slack = 1e-9)
{
    if (pieces.empty() || radii.empty()) {
        throw std::invalid_argument("certify_restricted_weak: pieces and caps must be nonempty");
    }
    const GridPtr grid = pieces.front().op->grid();
    const double q = detail::exponent_of(d.target.y);
    const double scale = std::pow(d.M1, d.theta) * std::pow(d.M2, 1.0 - d.theta);
    RestrictedWeakReport report;
    for (double theta0 : radii) {
        const Cap e = cap(grid, theta0);
        CapCertificate c;
        c.theta0 = theta0;
        c.measure = e.discrete_measure;
        if (!(c.measure > 0.0)) {
            throw std::invalid_argument("certify_restricted_weak: cap contains no grid node");
        }
        Eigen::VectorXcd total = Eigen::VectorXcd::Zero(grid->size());
        for (const auto& pc : pieces) {
            const Eigen::VectorXcd tj = pc.op->apply(e.indicator.values);
            total += tj;
            const ZonalFunction f(grid, tj);
            const double n1 = lp_norm(f, detail::exponent_of(d.growth.y));
            const double n2 = lp_norm(f, detail::exponent_of(d.decay.y));
            const double b1 = d.M1 * std::exp2(d.beta1 * pc.j) * std::pow(c.measure, d.growth.x);
            const double b2 = d.M2 * std::exp2(-d.beta2 * pc.j) * std::pow(c.measure, d.decay.x);
            if (n1 > b1 * (1.0 + slack) || n2 > b2 * (1.0 + slack)) {
                c.violations.push_back(pc.j);
            }
        }
        const ZonalFunction tf(grid, total);
        c.weak = std::isinf(q) ? lp_norm(tf, infinity) : weak_lq(tf, q);
        c.constant = c.weak / (scale * std::pow(c.measure, d.target.x));

        // Level attaining the weak norm, and the pairing with its level set.
        double best = -1.0;
        for (int i = 0; i < grid->size(); ++i) {
            const double t = std::abs(total[i]);
            if (!(t > 0.0)) {
                continue;
            }
            const double mu = level_set_measure(tf, t * (1.0 - 1e-15));
            const double v = std::isinf(q) ? t : t * std::pow(mu, 1.0 / q);
            if (v > best) {
                best = v;
                c.level = t;
                c.level_measure = mu;
            }
        }
        if (c.level_measure > 0.0) {
            double pairing = 0.0;
            for (int i = 0; i < grid->size(); ++i) {
                if (std::abs(total[i]) >= c.level * (1.0 - 1e-15)) {
                    pairing += grid->weights()[i] * std::abs(total[i]);
                }
            }
            c.pairing = pairing;
            c.split = optimal_split(d, c.measure, c.level_measure);
            const double a1 = std::pow(c.measure, d.growth.x) * std::pow(c.level_measure, 1.0 - d.growth.y);
            const double a2 = std::pow(c.measure, d.decay.x) * std::pow(c.level_measure, 1.0 - d.decay.y);
            for (const auto& pc : pieces) {
                const int j = pc.j;
                if (j <= c.split.rho) {
                    c.finite_part += d.M1 * std::exp2(d.beta1 * j) * a1;
                } else {
                    c.tail_part += d.M2 * std::exp2(-d.beta2 * j) * a2;
                }
            }
        }
        report.c_obs = std::max(report.c_obs, c.constant);
        report.caps.push_back(std::move(c));
    }
    return report;
}

struct DyadicCertificate {
    int k = 0;
    double sigma = 0.0;
    DyadicRates rates;
    std::vector<int> fit_j;
    std::vector<double> growth_norms; ///< lower bounds of ||T_j|| at the growth endpoint
    std::vector<double> decay_norms;  ///< lower bounds of ||T_j|| at the decay endpoint
    InterpolationData data;
    RestrictedWeakReport report;
};

/// Restricted weak-type certification of sum_{j >= 1} T_j(H_k): piece norms are measured over
/// the fit range, M1 and M2 are fitted with the rates held fixed, and the caps are tested.
/// Norms from L^1 are exact column norms; the others are ascent lower bounds.
inline DyadicCertificate certify_dyadic(const SphereSpec& spec, int k, double sigma, const std::vector<double>& radii,
                                        const AscentOptions& opt = {}, GridPtr grid = nullptr)
{
    DyadicCertificate out;
    out.k = k;
    out.sigma = sigma;
    out.rates = dyadic_rates(spec.n(), sigma);
    if (!grid) {
        grid = dyadic_grid(spec, k);
    }
    const auto pieces = dyadic_decompose(spec, k);
    std::vector<DiscreteOperator> ops;
    ops.reserve(pieces.size());
    for (const auto& p : pieces) {
        ops.push_back(discretize(p.kernel, grid));
    }
    auto measure = [&opt](const DiscreteOperator& op, const ExponentPoint& e) {
        const double s = e.y > 0.0 ? e.s() : infinity;
        return e.x >= 1.0 ? AnchorNorms(op).one_to(s) : norm_lower(op, e.r(), s, opt).value;
    };
    out.fit_j = fit_range(spec, k);
    if (out.fit_j.empty()) {
        throw std::invalid_argument("certify_dyadic: no dyadic piece in the fit range");
    }
    for (int j : out.fit_j) {
        out.growth_norms.push_back(measure(ops[j], out.rates.growth));
        out.decay_norms.push_back(measure(ops[j], out.rates.decay));
    }
    const double m1 = fit_constant(out.fit_j, out.growth_norms, out.rates.beta1);
    const double m2 = fit_constant(out.fit_j, out.decay_norms, -out.rates.beta2);
    out.data = make_interp(out.rates.growth, out.rates.decay, m1, m2, out.rates.beta1, out.rates.beta2);
    std::vector<IndexedPiece> summed;
    for (const auto& p : pieces) {
        if (p.j >= 1 && !p.empty()) {
            summed.push_back({p.j, &ops[p.j]});
        }
    }
    out.report = certify_restricted_weak(summed, out.data, radii);
    return out;
}

} // namespace sphres
