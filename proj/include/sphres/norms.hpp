#pragma once

// Lebesgue, weak-Lebesgue and Lorentz L^{p,1} norms of grid functions.

#include "sphres/zonal_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace sphres {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// (sum_i w_i |f_i|^p)^{1/p}, or max_i |f_i| for p = infinity.
inline double lp_norm(std::span<const double> magnitudes, std::span<const double> weights, double p)
{
    if (!(p >= 1.0)) {
        throw std::domain_error("lp_norm: p >= 1 is required");
    }
    if (std::isinf(p)) {
        double m = 0.0;
        for (double a : magnitudes) {
            m = std::max(m, a);
        }
        return m;
    }
    // Scale by the maximum so |f|^p never overflows or underflows wholesale.
    double m = 0.0;
    for (double a : magnitudes) {
        m = std::max(m, a);
    }
    if (m == 0.0) {
        return 0.0;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < magnitudes.size(); ++i) {
        if (magnitudes[i] > 0.0) {
            s += weights[i] * std::pow(magnitudes[i] / m, p);
        }
    }
    return m * std::pow(s, 1.0 / p);
}

namespace detail {

inline std::vector<double> magnitudes(const ZonalFunction& f)
{
    std::vector<double> a(f.size());
    for (int i = 0; i < f.size(); ++i) {
        a[i] = std::abs(f.values[i]);
    }
    return a;
}

/// Distinct positive magnitudes in decreasing order with the measure of {|f| >= v}.
struct Level {
    double value;
    double measure;
};

inline std::vector<Level> distribution(std::span<const double> magnitudes, std::span<const double> weights)
{
    std::vector<std::size_t> order(magnitudes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return magnitudes[a] > magnitudes[b]; });
    std::vector<Level> levels;
    double acc = 0.0;
    for (std::size_t idx = 0; idx < order.size(); ++idx) {
        const double v = magnitudes[order[idx]];
        if (!(v > 0.0)) {
            break;
        }
        acc += weights[order[idx]];
        if (!levels.empty() && levels.back().value == v) {
            levels.back().measure = acc;
        } else {
            levels.push_back({v, acc});
        }
    }
    return levels;
}

} // namespace detail

inline double lp_norm(const ZonalFunction& f, double p)
{
    const auto a = detail::magnitudes(f);
    return lp_norm(a, f.grid->weights(), p);
}

/// Weak-L^q quasinorm sup_t t mu{|f| > t}^{1/q}. For a grid function the supremum is the
/// left limit at an achieved value: max_v v * mu{|f| >= v}^{1/q}.
inline double weak_lq(std::span<const double> magnitudes, std::span<const double> weights, double q)
{
    if (!(q >= 1.0)) {
        throw std::domain_error("weak_lq: q >= 1 is required");
    }
    double best = 0.0;
    for (const auto& level : detail::distribution(magnitudes, weights)) {
        best = std::max(best, level.value * std::pow(level.measure, 1.0 / q));
    }
    return best;
}

inline double weak_lq(const ZonalFunction& f, double q)
{
    const auto a = detail::magnitudes(f);
    return weak_lq(a, f.grid->weights(), q);
}

/// Lorentz L^{p,1} norm in the layer-cake normalization int_0^inf mu{|f| > t}^{1/p} dt,
/// evaluated exactly for a step function: sum_i (v_i - v_{i+1}) mu{|f| >= v_i}^{1/p}.
inline double lorentz_p1(std::span<const double> magnitudes, std::span<const double> weights, double p)
{
    if (!(p >= 1.0)) {
        throw std::domain_error("lorentz_p1: p >= 1 is required");
    }
    const auto levels = detail::distribution(magnitudes, weights);
    double total = 0.0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const double next = (i + 1 < levels.size()) ? levels[i + 1].value : 0.0;
        total += (levels[i].value - next) * std::pow(levels[i].measure, 1.0 / p);
    }
    return total;
}

inline double lorentz_p1(const ZonalFunction& f, double p)
{
    const auto a = detail::magnitudes(f);
    return lorentz_p1(a, f.grid->weights(), p);
}

/// Measure of {|f| > threshold}.
inline double level_set_measure(const ZonalFunction& f, double threshold)
{
    double m = 0.0;
    for (int i = 0; i < f.size(); ++i) {
        if (std::abs(f.values[i]) > threshold) {
            m += f.grid->weights()[i];
        }
    }
    return m;
}

} // namespace sphres
