#pragma once

// Zonal convolution kernels on S^n and their action on zonal functions.
//
// A zonal kernel K(<x,y>) acts on functions of the polar angle through its azimuthal
// average
//   A(theta, theta') = (1/vol(S^{n-1})) int_{S^{n-1}} K(cos theta cos theta' + sin theta sin theta' u) dw,
// so that (K f)(theta_i) = sum_j A(theta_i, theta_j) w_j f(theta_j). For a kernel given by
// Gegenbauer multipliers, A = sum_k m_k Z_k(t) Z_k(t') / Z_k(1) (addition theorem); for a
// pointwise kernel the average is computed by one-dimensional quadrature.

#include "sphres/quadrature.hpp"
#include "sphres/zonal_grid.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sphres {

enum class KernelKind { projector, dyadic_piece, resolvent, custom };

inline std::string to_string(KernelKind kind)
{
    switch (kind) {
    case KernelKind::projector:
        return "projector";
    case KernelKind::dyadic_piece:
        return "dyadic_piece";
    case KernelKind::resolvent:
        return "resolvent";
    case KernelKind::custom:
        return "custom";
    }
    return "custom";
}

/// Kernel as a function of geodesic distance d in [0, pi].
using Profile = std::function<cplx(double)>;

/// A zonal kernel: Gegenbauer multipliers m_0..m_K, or a pointwise profile K(cos d) with
/// its support and the angles where it is not smooth.
class ZonalKernel {
public:
    /// sum_k m_k Z_k(t).
    static ZonalKernel spectral(SphereSpec sphere, std::vector<cplx> coeffs, KernelKind kind, std::string description,
                                double scale)
    {
        if (coeffs.empty()) {
            throw std::invalid_argument("ZonalKernel::spectral: at least one multiplier is required");
        }
        ZonalKernel k(sphere, kind, std::move(description), scale);
        k.coeffs_ = std::move(coeffs);
        return k;
    }

    /// Profile supported in [support_lo, support_hi), smooth between `breakpoints`.
    static ZonalKernel pointwise(SphereSpec sphere, Profile profile, double support_lo, double support_hi,
                                 std::vector<double> breakpoints, KernelKind kind, std::string description,
                                 double scale, bool real_valued = true)
    {
        ZonalKernel k(sphere, kind, std::move(description), scale);
        k.profile_ = std::move(profile);
        k.support_lo_ = std::max(0.0, support_lo);
        k.support_hi_ = std::min(std::numbers::pi, support_hi);
        std::sort(breakpoints.begin(), breakpoints.end());
        k.breakpoints_ = std::move(breakpoints);
        k.real_ = real_valued;
        return k;
    }

    /// The projector H_k: unit multiplier at degree k.
    static ZonalKernel projector(const SphereSpec& sphere, int k)
    {
        if (k < 0) {
            throw std::domain_error("ZonalKernel::projector: k >= 0 is required");
        }
        std::vector<cplx> m(static_cast<std::size_t>(k) + 1, 0.0);
        m[k] = 1.0;
        auto out = spectral(sphere, std::move(m), KernelKind::projector, "H_" + std::to_string(k),
                            1.0 / eigenvalue(sphere, std::max(k, 1)));
        out.base_degree_ = k;
        return out;
    }

    const SphereSpec& sphere() const noexcept { return sphere_; }
    KernelKind kind() const noexcept { return kind_; }
    const std::string& description() const noexcept { return description_; }
    bool is_spectral() const noexcept { return !coeffs_.empty(); }
    const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
    int max_degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    /// Characteristic angular scale (1/lambda for the kernels built here).
    double scale() const noexcept { return scale_; }
    /// Harmonic degree the kernel is built around, if any (used to seed witnesses).
    std::optional<int> base_degree() const noexcept { return base_degree_; }
    void set_base_degree(int k) { base_degree_ = k; }
    double support_lo() const noexcept { return is_spectral() ? 0.0 : support_lo_; }
    double support_hi() const noexcept { return is_spectral() ? std::numbers::pi : support_hi_; }
    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }

    bool is_real() const
    {
        if (!is_spectral()) {
            return real_;
        }
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c.imag() == 0.0; });
    }

    /// K at geodesic distance d.
    cplx at_distance(double d) const
    {
        if (is_spectral()) {
            return value(std::cos(d));
        }
        // Half-open support, except that a support reaching pi keeps the antipode.
        if (d < support_lo_ || (d >= support_hi_ && support_hi_ < std::numbers::pi)) {
            return 0.0;
        }
        return profile_(d);
    }

    /// K(t), t = cos d.
    cplx value(double t) const
    {
        if (!is_spectral()) {
            return at_distance(std::acos(std::clamp(t, -1.0, 1.0)));
        }
        const auto z = zonal_values_all(sphere_, max_degree(), t);
        cplx s = 0.0;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            s += coeffs_[k] * z[k];
        }
        return s;
    }

    /// Kernel with conjugated values (the adjoint's kernel).
    ZonalKernel conjugate() const
    {
        ZonalKernel out = *this;
        if (is_spectral()) {
            for (auto& c : out.coeffs_) {
                c = std::conj(c);
            }
        } else if (!real_) {
            auto p = profile_;
            out.profile_ = [p](double d) { return std::conj(p(d)); };
        }
        return out;
    }

    /// Pointwise kernel |K|.
    ZonalKernel absolute() const
    {
        ZonalKernel base = *this;
        Profile p = [base](double d) { return cplx(std::abs(base.at_distance(d)), 0.0); };
        auto out = pointwise(sphere_, std::move(p), support_lo(), support_hi(), breakpoints_, kind_,
                             "|" + description_ + "|", scale_, true);
        out.base_degree_ = base_degree_;
        return out;
    }

private:
    ZonalKernel(SphereSpec sphere, KernelKind kind, std::string description, double scale)
        : sphere_(sphere), kind_(kind), description_(std::move(description)), scale_(scale)
    {
    }

    SphereSpec sphere_;
    KernelKind kind_;
    std::string description_;
    double scale_;
    std::vector<cplx> coeffs_;
    Profile profile_;
    double support_lo_ = 0.0;
    double support_hi_ = std::numbers::pi;
    std::vector<double> breakpoints_;
    bool real_ = true;
    std::optional<int> base_degree_;
};

/// Forward Gegenbauer analysis of f, multiplication by m_k, synthesis on the grid.
/// Exact to quadrature for f band-limited to the grid's exactness.
inline ZonalFunction apply_spectral(const ZonalKernel& kernel, const ZonalFunction& f)
{
    if (!kernel.is_spectral()) {
        throw std::invalid_argument("apply_spectral: kernel has no multiplier representation");
    }
    const int kmax = kernel.max_degree();
    if (kmax > f.grid->exactness()) {
        throw std::invalid_argument("apply_kernel: kernel degree " + std::to_string(kmax) +
                                    " exceeds grid exactness " + std::to_string(f.grid->exactness()));
    }
    Eigen::VectorXcd a = analyze(f, kmax);
    for (int k = 0; k <= kmax; ++k) {
        a[k] *= kernel.coeffs()[k];
    }
    return ZonalFunction::from_coeffs(f.grid, a);
}

namespace detail {

/// Azimuthal average for n = 3, where the measure in d is sin(d) dd / (2 sin theta sin theta'):
///   A = (G(d_hi) - G(d_lo)) / (2 s s'),  G(D) = int_0^D K(d) sin d dd,
/// with d_lo = |theta - theta'| and d_hi = theta + theta' folded into [0, pi].
/// G is accumulated once over the sorted set of all needed limits.
inline Eigen::MatrixXcd reduced_matrix_n3(const ZonalKernel& kernel, const ZonalGrid& grid)
{
    const int p = grid.size();
    const auto& th = grid.theta();
    const auto& sn = grid.sin_theta();
    const double pi = std::numbers::pi;

    std::vector<double> limits;
    limits.reserve(static_cast<std::size_t>(p) * (p + 1));
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            const double sum = th[i] + th[j];
            limits.push_back(th[j] - th[i]);
            limits.push_back(sum <= pi ? sum : 2.0 * pi - sum);
        }
    }
    // Knots of the piecewise-smooth integrand; panels never straddle them.
    std::vector<double> knots = kernel.breakpoints();
    knots.push_back(kernel.support_lo());
    knots.push_back(kernel.support_hi());
    std::vector<double> values = limits;
    values.insert(values.end(), knots.begin(), knots.end());
    values.push_back(0.0);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    const double lo = kernel.support_lo();
    const double hi = kernel.support_hi();
    const double h_max = kernel.scale() / 16.0;
    const GaussRule& rule = cached_legendre<8>();
    std::vector<cplx> g(values.size(), 0.0);
    for (std::size_t m = 1; m < values.size(); ++m) {
        const double a = std::max(values[m - 1], lo);
        const double b = std::min(values[m], hi);
        cplx part = 0.0;
        if (b > a) {
            const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / h_max)));
            const double h = (b - a) / panels;
            for (int q = 0; q < panels; ++q) {
                const double mid = a + (q + 0.5) * h;
                for (int r = 0; r < 8; ++r) {
                    const double d = mid + 0.5 * h * rule.nodes[r];
                    part += (0.5 * h * rule.weights[r] * std::sin(d)) * kernel.at_distance(d);
                }
            }
        }
        g[m] = g[m - 1] + part;
    }
    auto antiderivative = [&](double d) {
        const auto it = std::lower_bound(values.begin(), values.end(), d);
        return g[static_cast<std::size_t>(it - values.begin())];
    };

    Eigen::MatrixXcd a(p, p);
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            const double sum = th[i] + th[j];
            const double d_lo = th[j] - th[i];
            const double d_hi = sum <= pi ? sum : 2.0 * pi - sum;
            const cplx v = (antiderivative(d_hi) - antiderivative(d_lo)) / (2.0 * sn[i] * sn[j]);
            a(i, j) = v;
            a(j, i) = v;
        }
    }
    return a;
}

} // namespace detail

/// Azimuthal average by quadrature over the azimuth phi, any n >= 2:
///   A = int_0^pi K(d(phi)) sin^{n-2}(phi) dphi / int_0^pi sin^{n-2}(phi) dphi,
///   cos d(phi) = cos theta cos theta' + sin theta sin theta' cos phi.
/// Panels are split at the azimuths where d crosses the kernel's knots.
inline cplx reduced_entry_azimuthal(const ZonalKernel& kernel, int n, double theta, double theta_p)
{
    const double pi = std::numbers::pi;
    const double c = std::cos(theta) * std::cos(theta_p);
    const double s = std::sin(theta) * std::sin(theta_p);
    const double d_min = std::abs(theta - theta_p);
    const double d_max = (theta + theta_p <= pi) ? theta + theta_p : 2.0 * pi - theta - theta_p;
    const double lo = std::max(d_min, kernel.support_lo());
    const double hi = std::min(d_max, kernel.support_hi());
    const double norm = std::sqrt(pi) * std::exp(std::lgamma(0.5 * (n - 1)) - std::lgamma(0.5 * n));
    if (!(hi > lo)) {
        return 0.0;
    }
    auto phi_of = [&](double d) {
        if (s <= 0.0) {
            return 0.0;
        }
        return std::acos(std::clamp((std::cos(d) - c) / s, -1.0, 1.0));
    };
    // The untruncated ends are phi = 0 and phi = pi exactly; inverting there is ill-conditioned.
    std::vector<double> cuts{lo > d_min ? phi_of(lo) : 0.0, hi < d_max ? phi_of(hi) : pi};
    for (double b : kernel.breakpoints()) {
        if (b > lo && b < hi) {
            cuts.push_back(phi_of(b));
        }
    }
    std::sort(cuts.begin(), cuts.end());
    auto integrand = [&](double phi) {
        const double t = std::clamp(c + s * std::cos(phi), -1.0, 1.0);
        const double sp = std::sin(phi);
        const double w = (n == 2) ? 1.0 : std::pow(sp, n - 2);
        return w * kernel.at_distance(std::acos(t));
    };
    cplx total = 0.0;
    for (std::size_t m = 1; m < cuts.size(); ++m) {
        const double a = cuts[m - 1];
        const double b = cuts[m];
        if (!(b > a)) {
            continue;
        }
        // Resolve the kernel scale in d; d changes at most as fast as phi * sqrt(s).
        const double span_d = std::sqrt(std::max(s, 0.0)) * (b - a) + 1e-300;
        const int panels = std::clamp(static_cast<int>(std::ceil(8.0 * span_d / kernel.scale())) + 2, 2, 4096);
        total += integrate_composite<16>(integrand, a, b, panels);
    }
    return total / norm;
}

/// A zonal kernel discretized on a grid: (K f)_i = sum_j A_ij w_j f_j with A symmetric.
/// The adjoint with respect to sum_i w_i f_i conj(g_i) has matrix conj(A).
class DiscreteOperator {
public:
    DiscreteOperator(ZonalKernel kernel, GridPtr grid, Eigen::MatrixXcd reduced)
        : kernel_(std::move(kernel)), grid_(std::move(grid)), reduced_(std::move(reduced))
    {
        real_ = kernel_.is_real();
        if (real_) {
            real_matrix_ = reduced_.real();
        }
    }

    const ZonalKernel& kernel() const noexcept { return kernel_; }
    const GridPtr& grid() const noexcept { return grid_; }
    const Eigen::MatrixXcd& reduced() const noexcept { return reduced_; }
    bool is_real() const noexcept { return real_; }
    int size() const noexcept { return grid_->size(); }

    Eigen::VectorXcd apply(const Eigen::VectorXcd& f) const { return multiply(f, false); }
    Eigen::VectorXcd apply_adjoint(const Eigen::VectorXcd& f) const { return multiply(f, true); }

    ZonalFunction apply(const ZonalFunction& f) const { return {grid_, apply(f.values)}; }

private:
    Eigen::VectorXcd multiply(const Eigen::VectorXcd& f, bool adjoint) const
    {
        const Eigen::VectorXcd wf = f.cwiseProduct(grid_->weight_vector().cast<cplx>());
        if (real_) {
            Eigen::VectorXcd out(f.size());
            out.real() = real_matrix_ * wf.real();
            out.imag() = real_matrix_ * wf.imag();
            return out;
        }
        if (adjoint) {
            return reduced_.conjugate() * wf;
        }
        return reduced_ * wf;
    }

    ZonalKernel kernel_;
    GridPtr grid_;
    Eigen::MatrixXcd reduced_;
    Eigen::MatrixXd real_matrix_;
    bool real_ = false;
};

enum class ReductionMethod { automatic, antiderivative, azimuthal };

/// Discretize a kernel on a grid. Spectral kernels use the addition theorem; pointwise
/// kernels use the n = 3 antiderivative formula or azimuthal quadrature.
inline DiscreteOperator discretize(const ZonalKernel& kernel, const GridPtr& grid,
                                   ReductionMethod method = ReductionMethod::automatic)
{
    if (!(kernel.sphere() == grid->sphere())) {
        throw std::invalid_argument("discretize: kernel and grid live on different spheres");
    }
    const int p = grid->size();
    if (kernel.is_spectral()) {
        const int kmax = kernel.max_degree();
        if (kmax > grid->exactness()) {
            throw std::invalid_argument("apply_kernel: kernel degree " + std::to_string(kmax) +
                                        " exceeds grid exactness " + std::to_string(grid->exactness()));
        }
        const Eigen::MatrixXd z = zonal_table(*grid, kmax);
        Eigen::VectorXcd d(kmax + 1);
        for (int k = 0; k <= kmax; ++k) {
            d[k] = kernel.coeffs()[k] / zonal_diagonal(grid->sphere(), k);
        }
        Eigen::MatrixXcd zc = z.cast<cplx>();
        Eigen::MatrixXcd a = zc * d.asDiagonal() * zc.transpose();
        return {kernel, grid, std::move(a)};
    }
    const int n = grid->sphere().n();
    if (method == ReductionMethod::antiderivative || (method == ReductionMethod::automatic && n == 3)) {
        if (n != 3) {
            throw std::invalid_argument("discretize: the antiderivative reduction needs n = 3");
        }
        return {kernel, grid, detail::reduced_matrix_n3(kernel, *grid)};
    }
    Eigen::MatrixXcd a(p, p);
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            const cplx v = reduced_entry_azimuthal(kernel, n, grid->theta()[i], grid->theta()[j]);
            a(i, j) = v;
            a(j, i) = v;
        }
    }
    return {kernel, grid, std::move(a)};
}

/// K f on the grid: spectral route for multiplier kernels, reduced matrix otherwise.
inline ZonalFunction apply_kernel(const ZonalKernel& kernel, const ZonalFunction& f)
{
    if (kernel.is_spectral()) {
        return apply_spectral(kernel, f);
    }
    return discretize(kernel, f.grid).apply(f);
}

} // namespace sphres
