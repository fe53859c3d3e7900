#include "sphres/dyadic.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

using namespace sphres;
using Catch::Approx;

namespace {

constexpr double pi = std::numbers::pi;

// n = 3 closed form Z_k(cos x) = (k+1) sin((k+1)x) / (2 pi^2 sin x).
double z3(int k, double x)
{
    return (k + 1) * std::sin((k + 1) * x) / (2.0 * pi * pi * std::sin(x));
}

} // namespace

TEST_CASE("bump is a dyadic partition of unity")
{
    for (double t : {0.5, 0.7, 1.0, 1.5, 2.0, 3.3, 17.0, 1024.0}) {
        double sum = 0.0;
        for (int j = -4; j <= 20; ++j) {
            sum += bump(std::ldexp(t, -j));
        }
        CHECK(sum == 1.0);
    }
    CHECK(bump(0.49) == 0.0);
    CHECK(bump(1.0) == 0.0);
}

TEST_CASE("piece count")
{
    const SphereSpec s3(3);
    CHECK(dyadic_count(s3, 16) == 7);
    CHECK(dyadic_decompose(s3, 16).size() == 8u);
    CHECK(dyadic_count(s3, 32) == static_cast<int>(std::ceil(std::log2(33.0 * pi))) + 1);
    CHECK_THROWS_AS(dyadic_decompose(s3, 0), std::domain_error);
}

TEST_CASE("pieces reconstruct the zonal kernel on every node")
{
    for (int n : {2, 3, 5}) {
        const SphereSpec spec(n);
        for (int k : {1, 7, 16}) {
            const auto pieces = dyadic_decompose(spec, k);
            const auto grid = dyadic_grid(spec, k);
            double worst = 0.0;
            for (double theta : grid->theta()) {
                cplx sum = 0.0;
                for (const auto& p : pieces) {
                    sum += p.kernel.at_distance(theta);
                }
                worst = std::max(worst, std::abs(sum - zonal_value(spec, k, std::cos(theta))));
            }
            INFO("n=" << n << " k=" << k);
            CHECK(worst < 1e-10);
        }
    }
}

TEST_CASE("piece supports")
{
    const SphereSpec s3(3);
    const int k = 16;
    const double lam = 17.0;
    const auto pieces = dyadic_decompose(s3, k);
    const auto& p3 = pieces[3];
    CHECK(p3.j == 3);
    CHECK(p3.lo == Approx(4.0 / lam));
    CHECK(p3.hi == Approx(8.0 / lam));
    for (int i = 0; i <= 2000; ++i) {
        const double d = pi * i / 2000.0;
        const double v = std::abs(p3.kernel.at_distance(d));
        if (d < 4.0 / lam || d >= 8.0 / lam) {
            CHECK(v == 0.0);
        } else {
            CHECK(v == Approx(std::abs(z3(k, d))).margin(1e-9));
        }
    }
    // T_0 lives within 1/lambda of the pole.
    CHECK(pieces[0].kernel.at_distance(0.99 / lam) != cplx(0.0));
    CHECK(pieces[0].kernel.at_distance(1.0 / lam) == cplx(0.0));
    // The last nonempty piece keeps the antipode.
    int last = 0;
    for (const auto& p : pieces) {
        if (!p.empty()) {
            last = p.j;
        }
    }
    CHECK(std::abs(pieces[last].kernel.at_distance(pi)) == Approx(std::abs(z3(k, pi - 1e-9))).epsilon(1e-6));
}

TEST_CASE("discretized pieces sum to the projector")
{
    const SphereSpec s3(3);
    const int k = 12;
    const auto grid = dyadic_grid(s3, k);
    const auto whole = discretize(ZonalKernel::projector(s3, k), grid);
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(grid->size(), grid->size());
    for (const auto& p : dyadic_decompose(s3, k)) {
        sum += discretize(p.kernel, grid).reduced();
    }
    const double scale = whole.reduced().cwiseAbs().maxCoeff();
    CHECK((sum - whole.reduced()).cwiseAbs().maxCoeff() < 1e-9 * scale);
}

TEST_CASE("fit range stays in the oscillatory region")
{
    const SphereSpec s3(3);
    const auto js = fit_range(s3, 32);
    REQUIRE(js.size() >= 3u);
    CHECK(js.front() == 1);
    for (int j : js) {
        CHECK(std::ldexp(1.0, j) / 33.0 <= 0.75 * pi);
    }
    CHECK(std::ldexp(1.0, js.back() + 1) / 33.0 > 0.75 * pi);
}

TEST_CASE("dyadic grid resolves the finest piece")
{
    const SphereSpec s3(3);
    const auto grid = dyadic_grid(s3, 32, 8);
    CHECK(grid->size() == static_cast<int>(std::ceil(8 * 33.0 * pi / 2.0)));
    CHECK(dyadic_grid(s3, 4, 2)->size() == 4 * 4 + 16);
}

TEST_CASE("log2 slope fit")
{
    const std::vector<int> js{1, 2, 3, 4};
    std::vector<double> norms;
    for (int j : js) {
        norms.push_back(3.0 * std::exp2(-0.25 * j));
    }
    const auto fit = fit_log2_norms(js, norms);
    CHECK(fit.slope == Approx(-0.25).margin(1e-12));
    CHECK(fit.intercept == Approx(std::log2(3.0)).margin(1e-12));
    CHECK(fit.residual < 1e-12);
    CHECK_THROWS_AS(fit_log2_norms({1, 2}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("piece slopes have the predicted signs")
{
    const SphereSpec s3(3);
    const auto st = stein_point(3, 0.6);
    AscentOptions opt;
    opt.restarts = 2;
    const auto slopes = piece_norm_slopes(s3, 16, st.P, st.Q, opt);
    CHECK(slopes.at_q.slope > 0.0);
    CHECK(slopes.at_p.slope < slopes.at_q.slope);
    CHECK(slopes.at_p.j == fit_range(s3, 16));
    CHECK_THROWS_AS(piece_norm_slopes(s3, 2, st.P, st.Q, opt), std::invalid_argument);
}
