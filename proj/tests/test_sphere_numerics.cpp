#include "sphres/norms.hpp"
#include "sphres/quadrature.hpp"
#include "sphres/zonal_grid.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

using namespace sphres;
using Catch::Approx;

namespace {

constexpr double pi = std::numbers::pi;

double inner_real(const ZonalFunction& f, const ZonalFunction& g)
{
    double s = 0.0;
    for (int i = 0; i < f.size(); ++i) {
        s += f.grid->weights()[i] * (f.values[i] * std::conj(g.values[i])).real();
    }
    return s;
}

} // namespace

TEST_CASE("gauss rules integrate polynomials exactly")
{
    for (double nu : {0.5, 1.0, 1.5, 2.5}) {
        for (int points : {1, 2, 7, 32, 129}) {
            const GaussRule rule = gauss_gegenbauer(points, nu);
            REQUIRE(static_cast<int>(rule.nodes.size()) == points);
            // Even moments of (1-t^2)^{nu-1/2}: B(m+1/2, nu+1/2).
            for (int m = 0; 2 * m <= 2 * points - 1; ++m) {
                double s = 0.0;
                for (int i = 0; i < points; ++i) {
                    s += rule.weights[i] * std::pow(rule.nodes[i], 2 * m);
                }
                const double exact = std::exp(std::lgamma(m + 0.5) + std::lgamma(nu + 0.5) - std::lgamma(m + nu + 1.0));
                CHECK(s == Approx(exact).epsilon(1e-11));
            }
            for (int i = 1; i < points; ++i) {
                CHECK(rule.nodes[i] < rule.nodes[i - 1]);
            }
        }
    }
    CHECK_THROWS_AS(gauss_gegenbauer(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(gauss_gegenbauer(4, 0.0), std::domain_error);
}

TEST_CASE("composite and refined integration")
{
    CHECK(integrate_composite([](double x) { return std::sin(x); }, 0.0, pi, 4) == Approx(2.0).epsilon(1e-14));
    const auto c = integrate_composite([](double x) { return std::exp(std::complex<double>(0.0, x)); }, 0.0, pi, 4);
    CHECK(c.real() == Approx(0.0).margin(1e-14));
    CHECK(c.imag() == Approx(2.0).epsilon(1e-14));
    CHECK(integrate_refined([](double x) { return std::cos(40.0 * x); }, 0.0, 1.0, 1, 1e-12) ==
          Approx(std::sin(40.0) / 40.0).margin(1e-12));
    CHECK_THROWS_AS(integrate_refined([](double x) { return x > 0.5 ? 1.0 / (x - 0.5) : 0.0; }, 0.0, 1.0, 1, 1e-14, 2),
                    numerical_failure);
}

TEST_CASE("grid weights reproduce sphere volumes")
{
    CHECK(make_grid(SphereSpec(3), 64, 31)->total_weight() == Approx(2.0 * pi * pi).margin(1e-10));
    CHECK(make_grid(SphereSpec(2), 64, 31)->total_weight() == Approx(4.0 * pi).margin(1e-10));
    for (int n = 2; n <= 7; ++n) {
        for (int points : {17, 64, 400}) {
            const SphereSpec s(n);
            CHECK(std::abs(make_grid(s, points, (points - 1) / 2)->total_weight() / s.volume() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("grid argument validation")
{
    const SphereSpec s3(3);
    CHECK_THROWS_AS(make_grid(s3, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(s3, 16, -1), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(s3, 16, 8), std::invalid_argument);
    CHECK_NOTHROW(make_grid(s3, 17, 8));
}

TEST_CASE("grid orthogonality of zonal harmonics")
{
    for (int n : {2, 3, 5}) {
        const SphereSpec s(n);
        const auto grid = make_grid(s, 64, 31);
        for (int k = 0; k <= 31; ++k) {
            const auto zk = ZonalFunction::zonal_harmonic(grid, k);
            for (int m = 0; m <= 31; ++m) {
                const auto zm = ZonalFunction::zonal_harmonic(grid, m);
                const double ip = inner_real(zk, zm);
                if (k == m) {
                    CHECK(ip == Approx(zonal_diagonal(s, k)).epsilon(1e-10));
                } else {
                    REQUIRE(std::abs(ip) < 1e-8);
                }
            }
        }
    }
}

TEST_CASE("synthesis and analysis round trip")
{
    const auto grid = make_grid(SphereSpec(3), 81, 40);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal;
    Eigen::VectorXcd a(41);
    for (auto& c : a) {
        c = {normal(rng), normal(rng)};
    }
    const auto f = ZonalFunction::from_coeffs(grid, a);
    const Eigen::VectorXcd back = analyze(f, 40);
    CHECK((back - a).norm() / a.norm() < 1e-11);
    CHECK_THROWS_AS(analyze(f, 41), std::invalid_argument);
}

TEST_CASE("quadrature convergence under doubling")
{
    const SphereSpec s3(3);
    auto integral = [&](int points) {
        const auto z = ZonalFunction::zonal_harmonic(make_grid(s3, points, 8), 8);
        return inner_real(z, z);
    };
    for (int points : {17, 34, 68}) {
        CHECK(std::abs(integral(points) - integral(2 * points)) < 1e-10);
    }
}

TEST_CASE("lp norms")
{
    const SphereSpec s3(3);
    const auto grid = make_grid(s3, 64, 31);
    const auto one = ZonalFunction::constant(grid, 1.0);
    CHECK(lp_norm(one, 2.0) == Approx(std::sqrt(2.0 * pi * pi)).epsilon(1e-12));
    CHECK(lp_norm(one, infinity) == 1.0);
    const auto z4 = ZonalFunction::zonal_harmonic(grid, 4);
    CHECK(lp_norm(z4, 2.0) == Approx(std::sqrt(zonal_value(s3, 4, 1.0))).epsilon(1e-10));
    CHECK_THROWS_AS(lp_norm(one, 0.5), std::domain_error);

    // Hoelder nesting on a finite measure space.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXcd v(grid->size());
        for (auto& c : v) {
            c = {u(rng), u(rng)};
        }
        const ZonalFunction f(grid, v);
        for (double q : {1.0, 1.5, 2.0, 3.0}) {
            for (double p : {q, 2.5 * q, infinity}) {
                const double bound = lp_norm(f, p) * std::pow(s3.volume(), 1.0 / q - (std::isinf(p) ? 0.0 : 1.0 / p));
                CHECK(lp_norm(f, q) <= bound * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("weak and Lorentz norms")
{
    const SphereSpec s3(3);
    const auto grid = make_grid(s3, 128, 63);
    const Cap c = cap(grid, 0.9);
    for (double q : {1.0, 1.5, 2.0, 4.0}) {
        const double m = c.discrete_measure;
        CHECK(weak_lq(c.indicator, q) == Approx(std::pow(m, 1.0 / q)).epsilon(1e-13));
        CHECK(lp_norm(c.indicator, q) == Approx(std::pow(m, 1.0 / q)).epsilon(1e-13));
        CHECK(lorentz_p1(c.indicator, q) == Approx(std::pow(m, 1.0 / q)).epsilon(1e-13));
    }
    const auto k3 = ZonalFunction::constant(grid, cplx(0.0, -3.0));
    CHECK(weak_lq(k3, 2.0) == Approx(3.0 * std::sqrt(s3.volume())).epsilon(1e-12));
    CHECK(lorentz_p1(ZonalFunction::constant(grid, 0.0), 2.0) == 0.0);

    // Lorentz norm of an indicator with measure 0.5.
    const std::vector<double> mags{1.0, 0.0};
    const std::vector<double> half{0.5, 0.5};
    CHECK(lorentz_p1(mags, half, 2.0) == Approx(std::sqrt(0.5)).epsilon(1e-15));

    // Weak norm by a direct threshold sweep, and Chebyshev.
    const auto z8 = ZonalFunction::zonal_harmonic(grid, 8);
    double sweep = 0.0;
    for (int i = 0; i < grid->size(); ++i) {
        const double t = std::abs(z8.values[i]);
        sweep = std::max(sweep, t * std::sqrt(level_set_measure(z8, t * (1.0 - 1e-14))));
    }
    CHECK(weak_lq(z8, 2.0) == Approx(sweep).epsilon(1e-12));
    CHECK(weak_lq(z8, 2.0) <= lp_norm(z8, 2.0));
}

TEST_CASE("Lorentz norm of a two-level function against a numeric layer cake")
{
    const double a = 0.3;
    const double b = 0.9;
    const std::vector<double> mags{2.0, 1.0, 0.0};
    const std::vector<double> w{a, b, 1.7};
    for (double p : {1.0, 1.5, 3.0}) {
        // int_0^inf mu(|f| > t)^{1/p} dt by midpoint sampling.
        const int steps = 200000;
        double layer = 0.0;
        for (int i = 0; i < steps; ++i) {
            const double t = 2.0 * (i + 0.5) / steps;
            const double mu = (t < 1.0) ? a + b : a;
            layer += std::pow(mu, 1.0 / p) * 2.0 / steps;
        }
        const double closed = 2.0 * std::pow(a, 1.0 / p) + (std::pow(a + b, 1.0 / p) - std::pow(a, 1.0 / p));
        CHECK(lorentz_p1(mags, w, p) == Approx(closed).epsilon(1e-14));
        CHECK(lorentz_p1(mags, w, p) == Approx(layer).epsilon(1e-9));
    }
}

TEST_CASE("cap measures")
{
    const SphereSpec s3(3);
    CHECK(cap_measure(s3, pi) == Approx(2.0 * pi * pi).epsilon(1e-13));
    CHECK(cap_measure(s3, pi / 2) == Approx(pi * pi).epsilon(1e-13));
    CHECK(cap_measure(s3, pi / 4) == Approx(4.0 * pi * (pi / 8 - std::sin(pi / 2) / 4)).epsilon(1e-13));
    // Adaptive-refinement oracle, and monotonicity.
    double prev = 0.0;
    for (double th = 0.05; th <= pi; th += 0.05) {
        const double m = cap_measure(s3, th);
        const double ref =
            4.0 * pi * integrate_refined([](double x) { return std::sin(x) * std::sin(x); }, 0.0, th, 1, 1e-14);
        CHECK(m == Approx(ref).epsilon(1e-12));
        CHECK(m > prev);
        prev = m;
    }
    CHECK_THROWS_AS(cap_measure(s3, 0.0), std::domain_error);
    const auto grid = make_grid(s3, 64, 31);
    const Cap full = cap(grid, pi);
    CHECK(full.discrete_measure == Approx(2.0 * pi * pi).epsilon(1e-12));
}

TEST_CASE("grid serialization round trip")
{
    const SphereSpec s3(3);
    const auto grid = make_grid(s3, 33, 16);
    std::stringstream ss;
    write_grid(ss, *grid);
    const auto back = read_grid(ss, s3, 16);
    REQUIRE(back->size() == grid->size());
    for (int i = 0; i < grid->size(); ++i) {
        CHECK(back->theta()[i] == grid->theta()[i]);
        CHECK(back->weights()[i] == grid->weights()[i]);
    }
    std::stringstream bad("x,y\n1,2\n");
    CHECK_THROWS(read_grid(bad, s3, 0));
}
