#pragma once

// Gegenbauer polynomials, spherical constants and the zonal projector kernel
// on the round sphere S^n.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphres {

/// The round sphere S^n together with the constants every other module needs.
class SphereSpec {
public:
    explicit SphereSpec(int n) : n_(n)
    {
        if (n < 2) {
            throw std::domain_error("SphereSpec: dimension n >= 2 is required, got " + std::to_string(n));
        }
        volume_ = sphere_volume(n);
        nu_ = 0.5 * (n - 1);
    }

    int n() const noexcept { return n_; }
    /// vol(S^n) = 2 pi^{(n+1)/2} / Gamma((n+1)/2)
    double volume() const noexcept { return volume_; }
    /// Gegenbauer index (n-1)/2 of the zonal harmonics.
    double nu() const noexcept { return nu_; }
    /// vol(S^{n-1}), the measure of the equatorial sphere.
    double equator_volume() const noexcept { return sphere_volume(n_ - 1); }

    static double sphere_volume(int d)
    {
        const double h = 0.5 * (d + 1);
        return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
    }

    friend bool operator==(const SphereSpec&, const SphereSpec&) = default;

private:
    int n_;
    double volume_;
    double nu_;
};

namespace detail {

inline void check_gegenbauer_args(double alpha, double t)
{
    if (!(alpha > 0.0)) {
        throw std::domain_error("gegenbauer: index alpha > 0 is required");
    }
    if (!(std::abs(t) <= 1.0)) {
        throw std::domain_error("gegenbauer: argument must satisfy |t| <= 1");
    }
}

} // namespace detail

/// C_k^alpha(t) by the forward three-term recurrence
///   (j+1) C_{j+1} = 2 (j+alpha) t C_j - (j + 2 alpha - 1) C_{j-1}.
inline double gegenbauer(int k, double alpha, double t)
{
    detail::check_gegenbauer_args(alpha, t);
    if (k < 0) {
        throw std::domain_error("gegenbauer: degree k >= 0 is required");
    }
    if (k == 0) {
        return 1.0;
    }
    double prev = 1.0;
    double cur = 2.0 * alpha * t;
    for (int j = 1; j < k; ++j) {
        const double next = (2.0 * (j + alpha) * t * cur - (j + 2.0 * alpha - 1.0) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

/// All of C_0^alpha(t), ..., C_kmax^alpha(t) in one sweep.
inline std::vector<double> gegenbauer_all(int kmax, double alpha, double t)
{
    detail::check_gegenbauer_args(alpha, t);
    if (kmax < 0) {
        throw std::domain_error("gegenbauer_all: kmax >= 0 is required");
    }
    std::vector<double> c(static_cast<std::size_t>(kmax) + 1);
    c[0] = 1.0;
    if (kmax >= 1) {
        c[1] = 2.0 * alpha * t;
    }
    for (int j = 1; j < kmax; ++j) {
        c[j + 1] = (2.0 * (j + alpha) * t * c[j] - (j + 2.0 * alpha - 1.0) * c[j - 1]) / (j + 1.0);
    }
    return c;
}

/// d/dt C_k^alpha(t) = 2 alpha C_{k-1}^{alpha+1}(t).
inline double gegenbauer_derivative(int k, double alpha, double t)
{
    if (k == 0) {
        detail::check_gegenbauer_args(alpha, t);
        return 0.0;
    }
    return 2.0 * alpha * gegenbauer(k - 1, alpha + 1.0, t);
}

/// Dimension N(n,k) of the degree-k spherical harmonics on S^n:
///   N = (2k+n-1)(k+n-2)! / (k! (n-1)!)  =  binom(k+n-1, n-1) + binom(k+n-2, n-1).
/// Throws std::overflow_error when the value does not fit in 64 bits.
inline std::uint64_t harmonic_dim(const SphereSpec& spec, int k)
{
    if (k < 0) {
        throw std::domain_error("harmonic_dim: degree k >= 0 is required");
    }
    // binom(m, r) by the multiplicative formula; every partial product is an integer.
    auto binom = [](std::uint64_t m, std::uint64_t r) -> std::uint64_t {
        if (r > m) {
            return 0;
        }
        r = std::min(r, m - r);
        std::uint64_t acc = 1;
        for (std::uint64_t i = 1; i <= r; ++i) {
            const std::uint64_t factor = m - r + i;
            const std::uint64_t g = std::gcd(acc, i);
            const std::uint64_t a = acc / g;
            const std::uint64_t f = factor / (i / g);
            std::uint64_t out = 0;
            if (__builtin_mul_overflow(a, f, &out)) {
                throw std::overflow_error("harmonic_dim: N(n,k) overflows 64-bit integers");
            }
            acc = out;
        }
        return acc;
    };
    const auto n = static_cast<std::uint64_t>(spec.n());
    const auto kk = static_cast<std::uint64_t>(k);
    const std::uint64_t a = binom(kk + n - 1, n - 1);
    const std::uint64_t b = (k >= 1) ? binom(kk + n - 2, n - 1) : 0;
    std::uint64_t out = 0;
    if (__builtin_add_overflow(a, b, &out)) {
        throw std::overflow_error("harmonic_dim: N(n,k) overflows 64-bit integers");
    }
    return out;
}

/// Square root of the eigenvalue of the shifted Laplacian on degree-k harmonics: k + (n-1)/2.
inline double eigenvalue(const SphereSpec& spec, int k)
{
    return k + spec.nu();
}

/// Normalization c_{n,k} = (2k+n-1) / ((n-1) vol(S^n)) making Z_k the reproducing
/// kernel of the degree-k eigenspace.
inline double zonal_normalization(const SphereSpec& spec, int k)
{
    return (2.0 * k + spec.n() - 1.0) / ((spec.n() - 1.0) * spec.volume());
}

/// Z_k(t): kernel of the orthogonal projector H_k, H_k(x,y) = Z_k(<x,y>).
inline double zonal_value(const SphereSpec& spec, int k, double t)
{
    return zonal_normalization(spec, k) * gegenbauer(k, spec.nu(), t);
}

/// Z_0(t), ..., Z_kmax(t).
inline std::vector<double> zonal_values_all(const SphereSpec& spec, int kmax, double t)
{
    auto c = gegenbauer_all(kmax, spec.nu(), t);
    for (int k = 0; k <= kmax; ++k) {
        c[k] *= zonal_normalization(spec, k);
    }
    return c;
}

/// Z_k(1) = N(n,k) / vol(S^n), evaluated in floating point (no overflow for large k).
inline double zonal_diagonal(const SphereSpec& spec, int k)
{
    // C_k^nu(1) = Gamma(k + 2 nu) / (Gamma(2 nu) k!)
    const double two_nu = 2.0 * spec.nu();
    const double log_c1 = std::lgamma(k + two_nu) - std::lgamma(two_nu) - std::lgamma(k + 1.0);
    return zonal_normalization(spec, k) * std::exp(log_c1);
}

} // namespace sphres
