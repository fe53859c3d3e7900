#pragma once

// Observed constants in the pointwise envelope of the zonal kernel Z_k.

#include "sphres/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sphres {

struct Envelope {
    double flat = 0.0;      ///< max_{theta <= 1/lambda} |Z_k| / k^{n-1}
    double osc = 0.0;       ///< max_{1/lambda <= theta <= 3pi/4} |Z_k| theta^{(n-1)/2} / lambda^{(n-1)/2}
    double antipodal = 0.0; ///< same with pi - theta, on [pi/4, pi - 1/lambda]
    double global = 0.0;    ///< max_theta |Z_k| / k^{n-1}
};

/// Envelope constants from `samples` equally spaced angles in each range.
inline Envelope envelope_check(const SphereSpec& spec, int k, int samples = 20000)
{
    if (k < 4) {
        throw std::domain_error("envelope_check: k >= 4 is required");
    }
    const double pi = std::numbers::pi;
    const double lam = eigenvalue(spec, k);
    const double h = 0.5 * (spec.n() - 1);
    const double kpow = std::pow(static_cast<double>(k), spec.n() - 1);
    auto z = [&](double theta) { return std::abs(zonal_value(spec, k, std::cos(theta))); };
    auto sweep = [&](double a, double b, auto&& weight) {
        double best = 0.0;
        for (int i = 0; i <= samples; ++i) {
            const double theta = a + (b - a) * i / samples;
            best = std::max(best, z(theta) * weight(theta));
        }
        return best;
    };
    Envelope e;
    e.flat = sweep(0.0, 1.0 / lam, [&](double) { return 1.0 / kpow; });
    e.osc = sweep(1.0 / lam, 0.75 * pi, [&](double t) { return std::pow(t / lam, h); });
    e.antipodal = sweep(0.25 * pi, pi - 1.0 / lam, [&](double t) { return std::pow((pi - t) / lam, h); });
    e.global = sweep(0.0, pi, [&](double) { return 1.0 / kpow; });
    return e;
}

} // namespace sphres
