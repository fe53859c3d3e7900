#pragma once

// Exponent geometry on the (1/r, 1/s) square.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sphres {

/// A pair (1/r, 1/s).
struct ExponentPoint {
    double x = 0.0;
    double y = 0.0;

    double sigma() const noexcept { return x - y; }
    double r() const { return 1.0 / x; }
    double s() const { return 1.0 / y; }
    /// (1/r, 1/s) -> (1/s', 1/r') = (1 - y, 1 - x); an involution.
    ExponentPoint dual() const noexcept { return {1.0 - y, 1.0 - x}; }

    static ExponentPoint from_rs(double r, double s) { return {1.0 / r, 1.0 / s}; }

    friend bool operator==(const ExponentPoint&, const ExponentPoint&) = default;
};

struct Admissibility {
    bool ok = false;
    std::string reason;

    explicit operator bool() const noexcept { return ok; }
};

/// Range for sigma: 2/(n+1) <= sigma <= 2/n (both closed).
inline Admissibility sigma_in_range(int n, double sigma)
{
    if (n < 2) {
        return {false, "n >= 2 required"};
    }
    if (!(sigma >= 2.0 / (n + 1))) {
        return {false, "σ ≥ 2/(n+1) violated"};
    }
    if (!(sigma <= 2.0 / n)) {
        return {false, "σ ≤ 2/n violated"};
    }
    return {true, {}};
}

/// Admissible pair for the resolvent and projector bounds:
///   1/r - 1/s = sigma with 2/(n+1) <= sigma <= 2/n, and 2n/(n-1+2n sigma) < r < 2n/(n+1).
inline Admissibility admissible(int n, double r, double s)
{
    if (!(r > 1.0 && std::isfinite(r)) || !(s > 1.0 && std::isfinite(s))) {
        return {false, "r, s in (1, inf) required"};
    }
    if (!(r < 2.0 * n / (n + 1))) {
        return {false, "r < 2n/(n+1) violated (strict)"};
    }
    const double sigma = 1.0 / r - 1.0 / s;
    if (auto a = sigma_in_range(n, sigma); !a) {
        return a;
    }
    if (!(r > 2.0 * n / (n - 1 + 2.0 * n * sigma))) {
        return {false, "r > 2n/(n−1+2nσ) violated (strict)"};
    }
    return {true, {}};
}

/// The open interval of admissible 1/r for a given sigma: ((n+1)/(2n), (n-1+2n sigma)/(2n)).
inline std::pair<double, double> admissible_inverse_r(int n, double sigma)
{
    return {(n + 1.0) / (2.0 * n), (n - 1.0 + 2.0 * n * sigma) / (2.0 * n)};
}

/// Midpoint of the admissible segment in 1/r coordinates, as an exponent point.
inline ExponentPoint admissible_midpoint(int n, double sigma)
{
    const auto [lo, hi] = admissible_inverse_r(n, sigma);
    const double x = 0.5 * (lo + hi);
    return {x, x - sigma};
}

/// Endpoint ((n+1)/(2n), (n+1-2n sigma)/(2n)) of the sigma-segment and its dual.
inline std::pair<ExponentPoint, ExponentPoint> segment_endpoints(int n, double sigma)
{
    if (!sigma_in_range(n, sigma)) {
        throw std::domain_error("segment_endpoints: sigma outside [2/(n+1), 2/n]");
    }
    const ExponentPoint e{(n + 1.0) / (2.0 * n), (n + 1.0 - 2.0 * n * sigma) / (2.0 * n)};
    return {e, e.dual()};
}

/// Intersection P of the sigma-line with the oscillatory-integral segment s = (n+1)/(n-1) r',
/// and the point Q = (sigma, 0) on the horizontal axis.
struct SteinPoints {
    ExponentPoint P;
    ExponentPoint Q;
};

inline SteinPoints stein_point(int n, double sigma)
{
    const double a = (n - 1.0) / (2.0 * n);
    const ExponentPoint P{(n + 1.0) / (2.0 * n) * sigma + a, -a * sigma + a};
    return {P, {sigma, 0.0}};
}

/// The named points of the exceptional-case and cutoff-splitting arguments.
struct SpecialPoints {
    ExponentPoint A; ///< (1/2, (n-1)/(2(n+1)))
    ExponentPoint B; ///< (1, 0)
    ExponentPoint C; ///< ((n+1)/(2n), (n-1)^2/(2n(n+1)))
    ExponentPoint D; ///< ((n+1)/(2n), 0)
};

inline SpecialPoints special_points(int n)
{
    if (n < 2) {
        throw std::domain_error("special_points: n >= 2 is required");
    }
    const double x = (n + 1.0) / (2.0 * n);
    return {
        {0.5, (n - 1.0) / (2.0 * (n + 1.0))},
        {1.0, 0.0},
        {x, (n - 1.0) * (n - 1.0) / (2.0 * n * (n + 1.0))},
        {x, 0.0},
    };
}

/// Predicted growth exponents: projector k^{n sigma - 1}, resolvent lambda^{n sigma - 2}.
struct PredictedExponents {
    double projector;
    double resolvent;
};

inline PredictedExponents predicted_exponents(int n, double sigma)
{
    return {n * sigma - 1.0, n * sigma - 2.0};
}

/// 1/s on the oscillatory-integral segment through 1/r: (n-1)/(n+1) (1 - 1/r).
inline double stein_line(int n, double x)
{
    return (n - 1.0) / (n + 1.0) * (1.0 - x);
}

/// Named points for plotting the exponent diagrams.
struct NamedPoint {
    std::string name;
    ExponentPoint point;
};

inline std::vector<NamedPoint> figure_points(int n, std::optional<double> sigma)
{
    const auto sp = special_points(n);
    std::vector<NamedPoint> out{{"A", sp.A}, {"B", sp.B}, {"C", sp.C}, {"D", sp.D}};
    if (sigma) {
        const auto [e, d] = segment_endpoints(n, *sigma);
        const auto st = stein_point(n, *sigma);
        out.push_back({"P", st.P});
        out.push_back({"Q", st.Q});
        out.push_back({"endpoint", e});
        out.push_back({"dual_endpoint", d});
    }
    return out;
}

} // namespace sphres
