#pragma once

// One-dimensional Gauss rules and composite integration.

#include "sphres/specfun.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sphres {

/// Nodes and weights of a Gauss rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

class numerical_failure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// N-point Gauss rule for the weight (1 - t^2)^{nu - 1/2} on [-1, 1] (nu > 0), i.e. the
/// symmetric Gauss-Jacobi rule with alpha = beta = nu - 1/2. Nodes are the zeros of C_N^nu,
/// bracketed by sign changes on an angular sample and polished by safeguarded Newton steps.
/// Nodes are returned in decreasing order of t (increasing angle).
inline GaussRule gauss_gegenbauer(int points, double nu)
{
    if (points < 1) {
        throw std::invalid_argument("gauss_gegenbauer: at least one node is required");
    }
    if (!(nu > 0.0)) {
        throw std::domain_error("gauss_gegenbauer: nu > 0 is required");
    }
    const int n = points;
    auto value_and_slope = [n, nu](double t) {
        // C_n and C_{n-1} by recurrence, derivative from
        // (1 - t^2) C_n' = -n t C_n + (n + 2 nu - 1) C_{n-1}.
        double prev = 1.0;
        double cur = 2.0 * nu * t;
        if (n == 1) {
            return std::pair{cur, 2.0 * nu};
        }
        for (int j = 1; j < n; ++j) {
            const double next = (2.0 * (j + nu) * t * cur - (j + 2.0 * nu - 1.0) * prev) / (j + 1.0);
            prev = cur;
            cur = next;
        }
        const double slope = (-n * t * cur + (n + 2.0 * nu - 1.0) * prev) / ((1.0 - t) * (1.0 + t));
        return std::pair{cur, slope};
    };

    GaussRule rule;
    rule.nodes.reserve(n);
    const int samples = 8 * (n + 1);
    double t_left = std::cos(0.5 * std::numbers::pi / samples);
    double f_left = value_and_slope(t_left).first;
    for (int m = 1; m <= samples && static_cast<int>(rule.nodes.size()) < n; ++m) {
        const double t_right = std::cos((m + 0.5) * std::numbers::pi / samples);
        const double f_right = (m == samples) ? f_left : value_and_slope(t_right).first;
        if (m < samples && (f_left == 0.0 || (f_left < 0.0) != (f_right < 0.0))) {
            // Root in [t_right, t_left]: Newton from the midpoint, bisection whenever Newton leaves the bracket.
            double lo = t_right;
            double hi = t_left;
            const bool lo_negative = f_right < 0.0;
            double t = 0.5 * (lo + hi);
            for (int it = 0; it < 100; ++it) {
                auto [f, df] = value_and_slope(t);
                if (f == 0.0) {
                    break;
                }
                if ((f < 0.0) == lo_negative) {
                    lo = t;
                } else {
                    hi = t;
                }
                double step = f / df;
                double next = t - step;
                if (!(next > lo && next < hi)) {
                    next = 0.5 * (lo + hi);
                    step = t - next;
                }
                t = next;
                if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
                    break;
                }
            }
            rule.nodes.push_back(t);
        }
        t_left = t_right;
        f_left = f_right;
    }
    if (static_cast<int>(rule.nodes.size()) != n) {
        throw numerical_failure("gauss_gegenbauer: found " + std::to_string(rule.nodes.size()) + " of " +
                                std::to_string(n) + " nodes");
    }

    // w_i = pi 2^{2-2nu} Gamma(n+2nu) / (Gamma(nu)^2 n! (1 - t_i^2) C_n'(t_i)^2)
    const double log_scale = std::log(std::numbers::pi) + (2.0 - 2.0 * nu) * std::log(2.0) + std::lgamma(n + 2.0 * nu) -
                             2.0 * std::lgamma(nu) - std::lgamma(n + 1.0);
    const double scale = std::exp(log_scale);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        const double t = rule.nodes[i];
        const double slope = value_and_slope(t).second;
        rule.weights[i] = scale / ((1.0 - t) * (1.0 + t) * slope * slope);
    }
    // The lgamma combination loses ~n*eps in the common factor; pin it to the exact mass
    // sqrt(pi) Gamma(nu+1/2) / Gamma(nu+1), which every Gauss rule reproduces.
    const double mass = std::sqrt(std::numbers::pi) * std::exp(std::lgamma(nu + 0.5) - std::lgamma(nu + 1.0));
    double sum = 0.0;
    for (double w : rule.weights) {
        sum += w;
    }
    for (double& w : rule.weights) {
        w *= mass / sum;
    }
    return rule;
}

/// N-point Gauss-Legendre rule on [-1, 1].
inline GaussRule gauss_legendre(int points)
{
    return gauss_gegenbauer(points, 0.5);
}

/// Cached Gauss-Legendre rule of a fixed order, mapped to arbitrary panels.
template <int Order>
const GaussRule& cached_legendre()
{
    static const GaussRule rule = gauss_legendre(Order);
    return rule;
}

/// Integral of f over [a, b] split into `panels` equal panels, each with an Order-point
/// Gauss-Legendre rule. f may return real or complex values.
template <int Order = 16, class F>
auto integrate_composite(F&& f, double a, double b, int panels)
{
    using R = decltype(f(a));
    const GaussRule& rule = cached_legendre<Order>();
    const double h = (b - a) / panels;
    R total{};
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        R part{};
        for (int i = 0; i < Order; ++i) {
            part += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
        }
        total += part * (0.5 * h);
    }
    return total;
}

/// Composite Gauss-Legendre with panel doubling until two successive refinements agree
/// to `tolerance` in absolute value. Throws numerical_failure when they never do.
template <int Order = 16, class F>
auto integrate_refined(F&& f, double a, double b, int initial_panels, double tolerance, int max_doublings = 8)
{
    int panels = std::max(1, initial_panels);
    auto coarse = integrate_composite<Order>(f, a, b, panels);
    for (int d = 0; d < max_doublings; ++d) {
        panels *= 2;
        auto fine = integrate_composite<Order>(f, a, b, panels);
        if (std::abs(fine - coarse) <= tolerance) {
            return fine;
        }
        coarse = fine;
    }
    throw numerical_failure("integrate_refined: successive refinements disagree beyond tolerance");
}

} // namespace sphres
