#pragma once

// Zonal functions on S^n reduced to the polar angle, and their quadrature grid.

#include "sphres/quadrature.hpp"
#include "sphres/specfun.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <istream>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphres {

using cplx = std::complex<double>;

/// Quadrature on S^n for functions of the polar angle theta alone:
///   int_{S^n} f dV = sum_i w_i f(theta_i).
/// Nodes are the Gauss-Jacobi nodes in t = cos(theta) for the weight (1-t^2)^{(n-2)/2},
/// stored by increasing angle; weights carry the factor vol(S^{n-1}).
class ZonalGrid {
public:
    ZonalGrid(SphereSpec sphere, std::vector<double> theta, std::vector<double> weights, int exactness,
              std::string rule)
        : sphere_(sphere), theta_(std::move(theta)), weights_(std::move(weights)), exactness_(exactness),
          rule_(std::move(rule))
    {
        if (theta_.size() != weights_.size() || theta_.empty()) {
            throw std::invalid_argument("ZonalGrid: node and weight counts differ or are zero");
        }
        cos_.resize(theta_.size());
        sin_.resize(theta_.size());
        for (std::size_t i = 0; i < theta_.size(); ++i) {
            cos_[i] = std::cos(theta_[i]);
            sin_[i] = std::sin(theta_[i]);
        }
    }

    const SphereSpec& sphere() const noexcept { return sphere_; }
    int size() const noexcept { return static_cast<int>(theta_.size()); }
    const std::vector<double>& theta() const noexcept { return theta_; }
    const std::vector<double>& cos_theta() const noexcept { return cos_; }
    const std::vector<double>& sin_theta() const noexcept { return sin_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    /// Highest harmonic degree K_grid for which products Z_k Z_m (k, m <= K_grid) integrate exactly.
    int exactness() const noexcept { return exactness_; }
    const std::string& rule() const noexcept { return rule_; }

    Eigen::Map<const Eigen::VectorXd> weight_vector() const
    {
        return {weights_.data(), static_cast<Eigen::Index>(weights_.size())};
    }

    double total_weight() const
    {
        double s = 0.0;
        for (double w : weights_) {
            s += w;
        }
        return s;
    }

private:
    SphereSpec sphere_;
    std::vector<double> theta_;
    std::vector<double> weights_;
    std::vector<double> cos_;
    std::vector<double> sin_;
    int exactness_;
    std::string rule_;
};

using GridPtr = std::shared_ptr<const ZonalGrid>;

/// Gauss-Jacobi grid with `points` nodes declared exact up to degree `exactness`.
inline GridPtr make_grid(const SphereSpec& spec, int points, int exactness)
{
    if (points < 2) {
        throw std::invalid_argument("make_grid: at least 2 points are required");
    }
    if (exactness < 0) {
        throw std::invalid_argument("make_grid: exactness K_grid >= 0 is required");
    }
    if (points < 2 * exactness + 1) {
        throw std::invalid_argument("make_grid: points >= 2*K_grid + 1 is required");
    }
    const GaussRule rule = gauss_gegenbauer(points, spec.nu());
    std::vector<double> theta(points);
    std::vector<double> weights(points);
    const double scale = spec.equator_volume();
    for (int i = 0; i < points; ++i) {
        theta[i] = std::acos(rule.nodes[i]);
        weights[i] = scale * rule.weights[i];
    }
    return std::make_shared<const ZonalGrid>(spec, std::move(theta), std::move(weights), exactness,
                                             "gauss-jacobi-" + std::to_string(points));
}

/// Grid sized for kernels up to `max_degree` by the rule points = 4*max_degree + 16.
inline GridPtr make_grid_for_degree(const SphereSpec& spec, int max_degree)
{
    const int points = 4 * max_degree + 16;
    return make_grid(spec, points, (points - 1) / 2);
}

/// Table of Z_k(cos theta_i): rows are nodes, columns degrees 0..kmax.
inline Eigen::MatrixXd zonal_table(const ZonalGrid& grid, int kmax)
{
    Eigen::MatrixXd z(grid.size(), kmax + 1);
    for (int i = 0; i < grid.size(); ++i) {
        const auto row = zonal_values_all(grid.sphere(), kmax, grid.cos_theta()[i]);
        for (int k = 0; k <= kmax; ++k) {
            z(i, k) = row[k];
        }
    }
    return z;
}

/// A zonal function sampled on a grid, optionally with its expansion f = sum_k a_k Z_k.
struct ZonalFunction {
    GridPtr grid;
    Eigen::VectorXcd values;
    std::optional<Eigen::VectorXcd> coeffs;

    ZonalFunction() = default;
    ZonalFunction(GridPtr g, Eigen::VectorXcd v, std::optional<Eigen::VectorXcd> c = std::nullopt)
        : grid(std::move(g)), values(std::move(v)), coeffs(std::move(c))
    {
        if (!grid || values.size() != grid->size()) {
            throw std::invalid_argument("ZonalFunction: value count does not match the grid");
        }
    }

    int size() const { return static_cast<int>(values.size()); }

    static ZonalFunction constant(GridPtr g, cplx c)
    {
        Eigen::VectorXcd v = Eigen::VectorXcd::Constant(g->size(), c);
        return {std::move(g), std::move(v)};
    }

    /// f = sum_k a_k Z_k, values synthesized on the grid.
    static ZonalFunction from_coeffs(GridPtr g, const Eigen::VectorXcd& a)
    {
        const int kmax = static_cast<int>(a.size()) - 1;
        if (kmax > g->exactness()) {
            throw std::invalid_argument("ZonalFunction::from_coeffs: degree exceeds grid exactness");
        }
        const Eigen::MatrixXd z = zonal_table(*g, kmax);
        Eigen::VectorXcd v = z.cast<cplx>() * a;
        return {std::move(g), std::move(v), a};
    }

    /// The zonal harmonic Z_k about the pole.
    static ZonalFunction zonal_harmonic(GridPtr g, int k)
    {
        Eigen::VectorXcd a = Eigen::VectorXcd::Zero(k + 1);
        a[k] = 1.0;
        return from_coeffs(std::move(g), a);
    }
};

/// Gegenbauer analysis a_k = <f, Z_k> / Z_k(1), k = 0..kmax, by grid quadrature.
inline Eigen::VectorXcd analyze(const ZonalFunction& f, int kmax)
{
    if (kmax > f.grid->exactness()) {
        throw std::invalid_argument("analyze: degree exceeds grid exactness");
    }
    const Eigen::MatrixXd z = zonal_table(*f.grid, kmax);
    Eigen::VectorXcd weighted = f.values.cwiseProduct(f.grid->weight_vector().cast<cplx>());
    Eigen::VectorXcd a = z.transpose().cast<cplx>() * weighted;
    for (int k = 0; k <= kmax; ++k) {
        a[k] /= zonal_diagonal(f.grid->sphere(), k);
    }
    return a;
}

/// Geodesic cap about the pole: its indicator on the grid, the exact measure and the
/// measure the grid assigns to it.
struct Cap {
    double theta0;
    ZonalFunction indicator;
    double measure;
    double discrete_measure;
};

/// vol(S^{n-1}) int_0^{theta0} sin^{n-1}(theta) d theta, by composite Gauss-Legendre.
inline double cap_measure(const SphereSpec& spec, double theta0)
{
    if (!(theta0 > 0.0 && theta0 <= std::numbers::pi)) {
        throw std::domain_error("cap_measure: 0 < theta0 <= pi is required");
    }
    const int n = spec.n();
    const double integral =
        integrate_composite<32>([n](double th) { return std::pow(std::sin(th), n - 1); }, 0.0, theta0, 8);
    return spec.equator_volume() * integral;
}

inline Cap cap(const GridPtr& grid, double theta0)
{
    const double measure = cap_measure(grid->sphere(), theta0);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(grid->size());
    double discrete = 0.0;
    for (int i = 0; i < grid->size(); ++i) {
        if (grid->theta()[i] <= theta0) {
            v[i] = 1.0;
            discrete += grid->weights()[i];
        }
    }
    return {theta0, ZonalFunction(grid, std::move(v)), measure, discrete};
}

/// Grid serialization: header "theta,weight", then one node per line (17 significant digits).
inline void write_grid(std::ostream& out, const ZonalGrid& grid)
{
    out << "theta,weight\n";
    out << std::setprecision(17);
    for (int i = 0; i < grid.size(); ++i) {
        out << grid.theta()[i] << ',' << grid.weights()[i] << '\n';
    }
}

/// Reads a grid table written by write_grid. The weights must reproduce vol(S^n).
inline GridPtr read_grid(std::istream& in, const SphereSpec& spec, int exactness)
{
    std::string line;
    if (!std::getline(in, line) || line != "theta,weight") {
        throw std::runtime_error("read_grid: missing 'theta,weight' header");
    }
    std::vector<double> theta;
    std::vector<double> weights;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error("read_grid: malformed row '" + line + "'");
        }
        theta.push_back(std::stod(line.substr(0, comma)));
        weights.push_back(std::stod(line.substr(comma + 1)));
    }
    const int points = static_cast<int>(theta.size());
    if (points < 2 * exactness + 1) {
        throw std::runtime_error("read_grid: too few nodes for the requested exactness");
    }
    auto grid = std::make_shared<const ZonalGrid>(spec, std::move(theta), std::move(weights), exactness,
                                                  "gauss-jacobi-" + std::to_string(points));
    if (std::abs(grid->total_weight() / spec.volume() - 1.0) > 1e-12) {
        throw std::runtime_error("read_grid: weights do not reproduce vol(S^n)");
    }
    return grid;
}

} // namespace sphres
