#include "sphres/report.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

using namespace sphres;
using Catch::Approx;

namespace {

ExperimentConfig proj_config()
{
    ExperimentConfig cfg;
    cfg.command = Command::proj_scaling;
    cfg.n = 3;
    cfg.sigma = 0.6;
    cfg.ks = {4, 8, 16};
    cfg.restarts = 2;
    return cfg;
}

} // namespace

TEST_CASE("slope fit examples")
{
    const std::vector<double> k{4.0, 8.0, 16.0, 32.0};
    std::vector<double> v;
    for (double x : k) {
        v.push_back(0.3 * std::pow(x, 1.7));
    }
    CHECK(fit_slope(k, v).slope == Approx(1.7).margin(1e-12));
    CHECK(fit_slope(k, v).residual < 1e-12);
    CHECK(fit_slope(k, std::vector<double>(4, 2.5)).slope == Approx(0.0).margin(1e-12));
    const std::vector<double> px{4.0, 8.0, 16.0};
    const std::vector<double> py{2.0, 2.83, 4.0};
    CHECK(fit_slope(px, py).slope == Approx(0.5).margin(1e-3));
    const std::vector<double> exact{2.0, 2.0 * std::sqrt(2.0), 4.0};
    CHECK(fit_slope(px, exact).slope == Approx(0.5).margin(1e-12));
    CHECK_THROWS_AS(fit_slope(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_slope(std::vector<double>{2.0, 2.0, 2.0}, std::vector<double>{1.0, 2.0, 3.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_slope(std::vector<double>{1.0, 2.0, 3.0}, std::vector<double>{1.0, 0.0, 3.0}),
                    std::invalid_argument);
}

TEST_CASE("command names round trip")
{
    for (auto c : {Command::proj_scaling, Command::resolvent_scaling, Command::dyadic_certify, Command::envelope,
                   Command::multiplier_check, Command::exponent_map}) {
        CHECK(parse_command(to_string(c)) == c);
    }
    CHECK_FALSE(parse_command("scaling").has_value());
}

TEST_CASE("configuration defaults and admissibility")
{
    const auto cfg = resolve(proj_config());
    REQUIRE(cfg.r.has_value());
    CHECK(1.0 / *cfg.r == Approx(admissible_midpoint(3, 0.6).x).margin(1e-15));

    auto bad = proj_config();
    bad.sigma = 0.9;
    CHECK_THROWS_AS(resolve(bad), inadmissible_error);
    try {
        resolve(bad);
    } catch (const inadmissible_error& e) {
        CHECK(std::string(e.what()) == "σ ≤ 2/n violated");
    }
    auto off = proj_config();
    off.r = 1.5;
    CHECK_THROWS_WITH(resolve(off), "r < 2n/(n+1) violated (strict)");
    auto missing = proj_config();
    missing.sigma.reset();
    CHECK_THROWS_AS(resolve(missing), std::invalid_argument);
    ExperimentConfig map;
    map.command = Command::exponent_map;
    CHECK_NOTHROW(resolve(map));
}

TEST_CASE("projector scaling report")
{
    std::ostringstream csv;
    const auto report = run(proj_config(), &csv);
    REQUIRE(report.rows.size() == 3u);
    CHECK(report.columns == std::vector<std::string>{"k", "r", "s", "lower", "upper", "predicted"});
    for (const auto& row : report.rows) {
        CHECK(std::get<double>(row[3]) <= std::get<double>(row[4]));
    }
    REQUIRE(report.fit.has_value());
    CHECK(report.fit->slope <= 3 * 0.6 - 1 + 0.1);

    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "k,r,s,lower,upper,predicted");
    int data = 0;
    while (std::getline(in, line)) {
        ++data;
        // every real field carries at least 12 significant digits
        std::stringstream fields(line);
        std::string f;
        std::getline(fields, f, ',');
        while (std::getline(fields, f, ',')) {
            const auto mantissa = f.substr(0, f.find('e'));
            int digits = 0;
            for (char ch : mantissa) {
                digits += (ch >= '0' && ch <= '9');
            }
            CHECK(digits >= 12);
        }
    }
    CHECK(data == 3);
}

TEST_CASE("identical configuration gives byte-identical CSV")
{
    std::ostringstream a;
    std::ostringstream b;
    run(proj_config(), &a);
    run(proj_config(), &b);
    CHECK(a.str() == b.str());
    auto other = proj_config();
    other.seed = 99;
    std::ostringstream c;
    const auto rep = run(other, &c);
    CHECK(rep.config.seed == 99u);
}

TEST_CASE("JSON summary keys and config echo")
{
    const auto report = run(proj_config());
    const auto j = report_json(report);
    for (const char* key : {"config", "rows", "slope", "residual", "wall_seconds", "version"}) {
        CHECK(j.contains(key));
    }
    CHECK(j["config"]["command"] == "proj-scaling");
    CHECK(j["config"]["restarts"] == 2);
    CHECK(j["config"]["seed"] == 1);
    CHECK(j["config"]["r"].get<double>() == Approx(*resolve(proj_config()).r));
    CHECK(j["config"]["grid_points"] == "4*max_degree+16");
    CHECK(j["rows"].size() == 3u);
    CHECK(j["rows"][0]["grid_points"] == 32);
    CHECK(j["version"] == std::string(version));
    CHECK_FALSE(j.contains("error"));
    CHECK(report_json(report, "boom")["error"] == "boom");
}

TEST_CASE("resolvent scaling at the uniform exponent")
{
    ExperimentConfig cfg;
    cfg.command = Command::resolvent_scaling;
    cfg.sigma = 2.0 / 3.0;
    cfg.lambdas = {4.0, 8.0};
    cfg.restarts = 1;
    const auto report = run(cfg);
    REQUIRE(report.rows.size() == 2u);
    CHECK_FALSE(report.fit.has_value());
    for (const auto& row : report.rows) {
        CHECK(std::get<double>(row[4]) <= std::get<double>(row[5]));
        CHECK(std::get<double>(row[6]) == Approx(1.0).margin(1e-12));
    }
    CHECK(report.extras[1].at("kmax") == 48.0);
}

TEST_CASE("dyadic certification rows")
{
    ExperimentConfig cfg;
    cfg.command = Command::dyadic_certify;
    cfg.sigma = 0.6;
    cfg.ks = {16};
    cfg.restarts = 1;
    const auto report = run(cfg);
    REQUIRE(report.rows.size() == 3u);
    const auto ic = detail::column_index(report, "constant");
    const auto io = detail::column_index(report, "c_obs");
    double worst = 0.0;
    for (const auto& row : report.rows) {
        worst = std::max(worst, std::get<double>(row[ic]));
    }
    CHECK(std::get<double>(report.rows[0][io]) == worst);
    CHECK(std::get<double>(report.rows[0][detail::column_index(report, "theta0")]) == Approx(1.0 / 17.0));

    // sigma = 2/n leaves no growth at Q when n = 3.
    cfg.sigma = 2.0 / 3.0;
    CHECK_THROWS_AS(run(cfg), std::domain_error);
}

TEST_CASE("envelope, multiplier and exponent map commands")
{
    ExperimentConfig env;
    env.command = Command::envelope;
    env.ks = {8, 16, 32};
    const auto e = run(env);
    CHECK(e.rows.size() == 3u);
    REQUIRE(e.fit.has_value());
    CHECK(std::abs(e.fit->slope) < 0.3);

    ExperimentConfig mult;
    mult.command = Command::multiplier_check;
    mult.lambdas = {4.0};
    const auto m = run(mult);
    CHECK(m.rows.size() == 5u);
    for (const auto& row : m.rows) {
        CHECK(std::get<double>(row[5]) < 1e-6);
    }

    ExperimentConfig map;
    map.command = Command::exponent_map;
    std::ostringstream csv;
    run(map, &csv);
    CHECK(csv.str() == "name,x,y\n"
                       "A,5.000000000000000e-01,2.500000000000000e-01\n"
                       "B,1.000000000000000e+00,0.000000000000000e+00\n"
                       "C,6.666666666666666e-01,1.666666666666667e-01\n"
                       "D,6.666666666666666e-01,0.000000000000000e+00\n");
    map.sigma = 0.6;
    const auto with_sigma = run(map);
    CHECK(with_sigma.rows.size() == 10u);
}
