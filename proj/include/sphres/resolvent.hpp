#pragma once

// Resolvent of the shifted Laplacian on S^n as a spectral multiplier.
//
// The shifted operator has eigenvalue -lambda_k^2 on degree-k harmonics, so the resolvent
// at zeta = (lambda + i mu)^2 multiplies them by m(lambda_k), m(tau) = 1/(zeta - tau^2).
// The same multiplier is the damped wave integral
//   m(tau) = (sgn mu / (i (lambda + i mu))) int_0^inf e^{i sgn(mu) lambda t} e^{-|mu| t} cos(t tau) dt.

#include "sphres/kernel.hpp"
#include "sphres/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphres {

class ResolventParams {
public:
    ResolventParams(double lam, double mu) : lam_(lam), mu_(mu), zeta_(cplx(lam, mu) * cplx(lam, mu))
    {
        if (!(lam >= 1.0)) {
            throw std::domain_error("ResolventParams: lambda >= 1 is required");
        }
        if (!(std::abs(mu) >= 1.0)) {
            throw std::domain_error("ResolventParams: |mu| >= 1 is required");
        }
    }

    double lam() const noexcept { return lam_; }
    double mu() const noexcept { return mu_; }
    cplx zeta() const noexcept { return zeta_; }
    double sign_mu() const noexcept { return mu_ > 0.0 ? 1.0 : -1.0; }

private:
    double lam_;
    double mu_;
    cplx zeta_;
};

/// m(tau) = 1/(zeta - tau^2).
inline cplx resolvent_multiplier(const ResolventParams& p, double tau)
{
    const cplx gap = p.zeta() - tau * tau;
    if (std::abs(gap) < 1e-12) {
        throw std::domain_error("resolvent_multiplier: zeta - tau^2 is within 1e-12 of a pole");
    }
    return 1.0 / gap;
}

namespace detail {

/// Upper limit with e^{-|mu| T} < 1e-14.
inline double damping_horizon(const ResolventParams& p)
{
    return 14.0 * std::log(10.0) / std::abs(p.mu()) * (1.0 + 1e-9);
}

inline cplx wave_prefactor(const ResolventParams& p)
{
    return p.sign_mu() / (cplx(0.0, 1.0) * cplx(p.lam(), p.mu()));
}

inline cplx wave_integrand(const ResolventParams& p, double tau, double t)
{
    const cplx phase = std::exp(cplx(-std::abs(p.mu()) * t, p.sign_mu() * p.lam() * t));
    return phase * std::cos(t * tau);
}

/// Panels of width at most a quarter period of the fastest oscillation.
inline int wave_panels(const ResolventParams& p, double tau, double a, double b)
{
    const double freq = p.lam() + std::abs(tau) + std::abs(p.mu());
    return std::max(4, static_cast<int>(std::ceil((b - a) * freq / (0.5 * std::numbers::pi))));
}

} // namespace detail

/// m(tau) by direct quadrature of the damped wave integral on [0, T], e^{-|mu| T} < 1e-14.
inline cplx resolvent_multiplier_integral(const ResolventParams& p, double tau, double tolerance = 1e-13)
{
    const double horizon = detail::damping_horizon(p);
    auto f = [&](double t) { return detail::wave_integrand(p, tau, t); };
    const cplx integral =
        integrate_refined<16>(f, 0.0, horizon, detail::wave_panels(p, tau, 0.0, horizon), tolerance);
    return detail::wave_prefactor(p) * integral;
}

/// Even smooth cutoff: rho = 1 for |t| <= 1/2, rho = 0 for |t| >= 1, C^inf in between
/// (built from exp(-1/x)).
inline double cutoff_rho(double t)
{
    const double a = std::abs(t);
    auto g = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
    const double up = g(1.0 - a);
    const double down = g(a - 0.5);
    if (up + down == 0.0) {
        return a <= 0.5 ? 1.0 : 0.0;
    }
    return up / (up + down);
}

/// The multiplier with the short-time part removed:
///   (sgn mu / (i (lambda + i mu))) int_{1/2}^T (1 - rho(t)) e^{i sgn(mu) lambda t} e^{-|mu| t} cos(t tau) dt.
/// Throws numerical_failure if successive refinements disagree by more than 1e-8.
inline cplx tail_multiplier(const ResolventParams& p, double tau)
{
    const double horizon = detail::damping_horizon(p);
    auto f = [&](double t) { return (1.0 - cutoff_rho(t)) * detail::wave_integrand(p, tau, t); };
    const double tol = 1e-8;
    // The cutoff's transition [1/2, 1] needs a finer start than the pure exponential tail.
    const cplx head = integrate_refined<16>(f, 0.5, 1.0, 4 * detail::wave_panels(p, tau, 0.5, 1.0), tol * 1e-4);
    const cplx tail = integrate_refined<16>(f, 1.0, horizon, detail::wave_panels(p, tau, 1.0, horizon), tol * 1e-4);
    return detail::wave_prefactor(p) * (head + tail);
}

/// max over tau in [0, tau_max] (step dtau) of |m_tail(tau)| lambda (1 + |lambda - tau|)^N.
inline double tail_decay_constant(const ResolventParams& p, int power = 3, double tau_max = -1.0, double dtau = 0.25)
{
    if (tau_max < 0.0) {
        tau_max = 3.0 * p.lam();
    }
    double best = 0.0;
    for (double tau = 0.0; tau <= tau_max + 1e-12; tau += dtau) {
        const double v = std::abs(tail_multiplier(p, tau)) * p.lam() * std::pow(1.0 + std::abs(p.lam() - tau), power);
        best = std::max(best, v);
    }
    return best;
}

/// Default truncation degree: max(ceil(4 lambda), ceil(lambda) + 40).
inline int default_kmax(double lam)
{
    return std::max(static_cast<int>(std::ceil(4.0 * lam)), static_cast<int>(std::ceil(lam)) + 40);
}

class tail_dominance_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ResolventKernel {
    ZonalKernel kernel;
    int kmax = 0;
    /// sup_{k > Kmax} |m(lambda_k)| / sup_{k <= Kmax} |m(lambda_k)|.
    double tail_ratio = 0.0;
};

/// Truncated resolvent sum_{k <= Kmax} m(lambda_k) H_k. Rejects Kmax < 4 lambda, and a
/// truncation whose discarded multipliers exceed a quarter of the retained maximum.
inline ResolventKernel resolvent_kernel(const SphereSpec& spec, const ResolventParams& p, int kmax = -1)
{
    if (kmax < 0) {
        kmax = default_kmax(p.lam());
    }
    if (kmax < 4.0 * p.lam()) {
        throw tail_dominance_error("resolvent_kernel: Kmax = " + std::to_string(kmax) + " is below 4*lambda");
    }
    std::vector<cplx> coeffs(static_cast<std::size_t>(kmax) + 1);
    double kept = 0.0;
    for (int k = 0; k <= kmax; ++k) {
        coeffs[k] = resolvent_multiplier(p, eigenvalue(spec, k));
        kept = std::max(kept, std::abs(coeffs[k]));
    }
    // |zeta - tau^2| increases for tau^2 > lambda^2 - mu^2, which holds beyond Kmax.
    const double discarded = std::abs(resolvent_multiplier(p, eigenvalue(spec, kmax + 1)));
    const double ratio = discarded / kept;
    if (ratio > 0.25) {
        throw tail_dominance_error("resolvent_kernel: discarded multipliers dominate (ratio " + std::to_string(ratio) +
                                   ")");
    }
    std::ostringstream desc;
    desc << "R(lambda=" << p.lam() << ",mu=" << p.mu() << ")";
    auto kernel = ZonalKernel::spectral(spec, std::move(coeffs), KernelKind::resolvent, desc.str(), 1.0 / p.lam());
    // Seed witnesses with the harmonic nearest to resonance.
    kernel.set_base_degree(std::max(0, static_cast<int>(std::lround(p.lam() - spec.nu()))));
    return {std::move(kernel), kmax, ratio};
}

/// The shifted operator Delta - ((n-1)/2)^2 + zeta on degrees 0..kmax: multiplier zeta - lambda_k^2.
inline ZonalKernel shifted_operator(const SphereSpec& spec, const ResolventParams& p, int kmax)
{
    std::vector<cplx> coeffs(static_cast<std::size_t>(kmax) + 1);
    for (int k = 0; k <= kmax; ++k) {
        const double lk = eigenvalue(spec, k);
        coeffs[k] = p.zeta() - lk * lk;
    }
    return ZonalKernel::spectral(spec, std::move(coeffs), KernelKind::custom, "shifted operator", 1.0 / p.lam());
}

} // namespace sphres
