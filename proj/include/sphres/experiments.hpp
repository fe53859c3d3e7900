#pragma once

// Experiment runner: projector and resolvent scaling studies, dyadic certification,
// envelope and multiplier checks, and the exponent map. Each run fills a flat table whose
// rows are streamed as CSV while they are produced.

#include "sphres/envelope.hpp"
#include "sphres/exponents.hpp"
#include "sphres/interpolation.hpp"
#include "sphres/norm_estimate.hpp"
#include "sphres/regression.hpp"
#include "sphres/resolvent.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#ifndef SPHRES_VERSION
#define SPHRES_VERSION "0.0.0"
#endif

namespace sphres {

inline constexpr const char* version = SPHRES_VERSION;

enum class Command { proj_scaling, resolvent_scaling, dyadic_certify, envelope, multiplier_check, exponent_map };

inline std::string to_string(Command c)
{
    switch (c) {
    case Command::proj_scaling: return "proj-scaling";
    case Command::resolvent_scaling: return "resolvent-scaling";
    case Command::dyadic_certify: return "dyadic-certify";
    case Command::envelope: return "envelope";
    case Command::multiplier_check: return "multiplier-check";
    case Command::exponent_map: return "exponent-map";
    }
    return "unknown";
}

inline std::optional<Command> parse_command(const std::string& name)
{
    for (auto c : {Command::proj_scaling, Command::resolvent_scaling, Command::dyadic_certify, Command::envelope,
                   Command::multiplier_check, Command::exponent_map}) {
        if (to_string(c) == name) {
            return c;
        }
    }
    return std::nullopt;
}

struct ExperimentConfig {
    Command command = Command::proj_scaling;
    int n = 3;
    std::optional<double> sigma;
    std::optional<double> r;            ///< default: admissible midpoint
    std::vector<int> ks{4, 8, 16, 32};
    std::vector<double> lambdas{8.0, 16.0, 32.0};
    double mu = 1.0;
    std::optional<int> grid_points;     ///< default: 4 max-degree + 16 per row
    int restarts = 8;
    std::uint64_t seed = 1;
    std::vector<double> caps;           ///< dyadic-certify cap radii; default {1/lambda_k, 1/8, 1/2}
    std::string output;                 ///< base path; ".csv" and ".json" are appended
};

/// Admissibility rejection, with the reason string of the exponents module.
class inadmissible_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

using Cell = std::variant<long long, double, std::string>;

struct ScalingReport {
    ExperimentConfig config;           ///< effective configuration
    std::optional<ExponentPoint> exponents;
    std::string parameter_name;        ///< "k" or "lambda"
    std::optional<double> predicted_exponent;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::map<std::string, double>> extras; ///< per-row values kept out of the CSV
    std::optional<LineFit> fit;
    double wall_seconds = 0.0;
};

inline std::string format_cell(const Cell& c)
{
    if (const auto* i = std::get_if<long long>(&c)) {
        return std::to_string(*i);
    }
    if (const auto* s = std::get_if<std::string>(&c)) {
        return *s;
    }
    const double v = std::get<double>(c);
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15e", v);
    return buf;
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        out << (i ? "," : "") << fields[i];
    }
    out << '\n';
    out.flush();
}

namespace detail {

/// Streams rows to the CSV sink as they are appended.
class Table {
public:
    Table(ScalingReport& report, std::ostream* csv, std::vector<std::string> columns) : report_(report), csv_(csv)
    {
        report_.columns = std::move(columns);
        if (csv_) {
            write_csv_row(*csv_, report_.columns);
        }
    }

    void add(std::vector<Cell> row, std::map<std::string, double> extra = {})
    {
        if (row.size() != report_.columns.size()) {
            throw std::logic_error("Table::add: row width does not match the header");
        }
        if (csv_) {
            std::vector<std::string> fields;
            for (const auto& c : row) {
                fields.push_back(format_cell(c));
            }
            write_csv_row(*csv_, fields);
        }
        report_.rows.push_back(std::move(row));
        report_.extras.push_back(std::move(extra));
    }

private:
    ScalingReport& report_;
    std::ostream* csv_;
};

inline double cell_value(const Cell& c)
{
    if (const auto* i = std::get_if<long long>(&c)) {
        return static_cast<double>(*i);
    }
    return std::get<double>(c);
}

inline std::size_t column_index(const ScalingReport& report, const std::string& name)
{
    for (std::size_t i = 0; i < report.columns.size(); ++i) {
        if (report.columns[i] == name) {
            return i;
        }
    }
    throw std::logic_error("column_index: no column " + name);
}

/// Log-log fit of one column against another over all rows, when at least three exist.
inline std::optional<LineFit> fit_columns(const ScalingReport& report, const std::string& x, const std::string& y)
{
    if (report.rows.size() < 3) {
        return std::nullopt;
    }
    const auto ix = column_index(report, x);
    const auto iy = column_index(report, y);
    std::vector<double> px;
    std::vector<double> py;
    for (const auto& row : report.rows) {
        px.push_back(cell_value(row[ix]));
        py.push_back(cell_value(row[iy]));
    }
    return fit_slope(px, py);
}

inline GridPtr grid_for(const SphereSpec& spec, const ExperimentConfig& cfg, int degree)
{
    if (cfg.grid_points) {
        return make_grid(spec, *cfg.grid_points, (*cfg.grid_points - 1) / 2);
    }
    return make_grid_for_degree(spec, degree);
}

inline AscentOptions ascent_options(const ExperimentConfig& cfg)
{
    AscentOptions opt;
    opt.restarts = cfg.restarts;
    opt.seed = cfg.seed;
    return opt;
}

inline bool needs_sigma(Command c)
{
    return c == Command::proj_scaling || c == Command::resolvent_scaling || c == Command::dyadic_certify;
}

} // namespace detail

/// Fills in defaults and checks (n, sigma, r) for admissibility.
inline ExperimentConfig resolve(ExperimentConfig cfg)
{
    if (cfg.n < 2) {
        throw inadmissible_error("n >= 2 required");
    }
    if (cfg.restarts < 0) {
        throw std::invalid_argument("restarts must be nonnegative");
    }
    if (!cfg.sigma) {
        if (detail::needs_sigma(cfg.command)) {
            throw std::invalid_argument(to_string(cfg.command) + " requires --sigma");
        }
        return cfg;
    }
    if (auto a = sigma_in_range(cfg.n, *cfg.sigma); !a) {
        throw inadmissible_error(a.reason);
    }
    if (!cfg.r) {
        cfg.r = admissible_midpoint(cfg.n, *cfg.sigma).r();
    }
    const double inv_s = 1.0 / *cfg.r - *cfg.sigma;
    const double s = inv_s > 0.0 ? 1.0 / inv_s : infinity;
    if (auto a = admissible(cfg.n, *cfg.r, s); !a) {
        throw inadmissible_error(a.reason);
    }
    return cfg;
}

inline void run_proj_scaling(const ExperimentConfig& cfg, ScalingReport& report, std::ostream* csv)
{
    const SphereSpec spec(cfg.n);
    const auto e = ExponentPoint::from_rs(*cfg.r, 1.0 / (1.0 / *cfg.r - *cfg.sigma));
    report.exponents = e;
    report.parameter_name = "k";
    report.predicted_exponent = predicted_exponents(cfg.n, *cfg.sigma).projector;
    detail::Table table(report, csv, {"k", "r", "s", "lower", "upper", "predicted"});
    for (int k : cfg.ks) {
        const auto grid = detail::grid_for(spec, cfg, k);
        const auto cert = certify(discretize(ZonalKernel::projector(spec, k), grid), e.r(), e.s(),
                                  detail::ascent_options(cfg));
        table.add({static_cast<long long>(k), e.r(), e.s(), cert.lower.value, cert.upper.value,
                   std::pow(static_cast<double>(k), *report.predicted_exponent)},
                  {{"grid_points", grid->size()}, {"iterations", cert.lower.iterations}});
    }
    report.fit = detail::fit_columns(report, "k", "lower");
}

inline void run_resolvent_scaling(const ExperimentConfig& cfg, ScalingReport& report, std::ostream* csv)
{
    const SphereSpec spec(cfg.n);
    const auto e = ExponentPoint::from_rs(*cfg.r, 1.0 / (1.0 / *cfg.r - *cfg.sigma));
    report.exponents = e;
    report.parameter_name = "lambda";
    report.predicted_exponent = predicted_exponents(cfg.n, *cfg.sigma).resolvent;
    detail::Table table(report, csv, {"lambda", "mu", "r", "s", "lower", "upper", "predicted"});
    for (double lam : cfg.lambdas) {
        const ResolventParams p(lam, cfg.mu);
        const auto rk = resolvent_kernel(spec, p);
        const auto grid = detail::grid_for(spec, cfg, rk.kmax);
        const auto cert = certify(discretize(rk.kernel, grid), e.r(), e.s(), detail::ascent_options(cfg));
        table.add({lam, cfg.mu, e.r(), e.s(), cert.lower.value, cert.upper.value,
                   std::pow(lam, *report.predicted_exponent)},
                  {{"grid_points", grid->size()},
                   {"kmax", rk.kmax},
                   {"tail_ratio", rk.tail_ratio},
                   {"iterations", cert.lower.iterations}});
    }
    report.fit = detail::fit_columns(report, "lambda", "lower");
}

inline void run_dyadic_certify(const ExperimentConfig& cfg, ScalingReport& report, std::ostream* csv)
{
    const SphereSpec spec(cfg.n);
    report.parameter_name = "k";
    detail::Table table(report, csv,
                        {"k", "theta0", "measure", "weak", "constant", "level", "level_measure", "rho", "branch",
                         "finite_part", "tail_part", "violations", "M1", "M2", "beta1", "beta2", "theta", "c_obs"});
    for (int k : cfg.ks) {
        const double lam = eigenvalue(spec, k);
        std::vector<double> radii = cfg.caps;
        if (radii.empty()) {
            radii = {1.0 / lam, 0.125, 0.5};
        }
        const GridPtr grid = cfg.grid_points ? detail::grid_for(spec, cfg, k) : dyadic_grid(spec, k);
        const auto cert = certify_dyadic(spec, k, *cfg.sigma, radii, detail::ascent_options(cfg), grid);
        for (const auto& c : cert.report.caps) {
            table.add({static_cast<long long>(k), c.theta0, c.measure, c.weak, c.constant, c.level, c.level_measure,
                       static_cast<long long>(c.split.rho), to_string(c.split.branch), c.finite_part, c.tail_part,
                       static_cast<long long>(c.violations.size()), cert.data.M1, cert.data.M2, cert.data.beta1,
                       cert.data.beta2, cert.data.theta, cert.report.c_obs},
                      {{"grid_points", grid->size()}});
        }
        report.exponents = cert.data.target;
    }
}

inline void run_envelope(const ExperimentConfig& cfg, ScalingReport& report, std::ostream* csv)
{
    const SphereSpec spec(cfg.n);
    report.parameter_name = "k";
    report.predicted_exponent = 0.0;
    detail::Table table(report, csv, {"k", "flat", "osc", "antipodal", "global"});
    for (int k : cfg.ks) {
        const auto e = envelope_check(spec, k);
        table.add({static_cast<long long>(k), e.flat, e.osc, e.antipodal, e.global});
    }
    report.fit = detail::fit_columns(report, "k", "osc");
}

inline void run_multiplier_check(const ExperimentConfig& cfg, ScalingReport& report, std::ostream* csv)
{
    report.parameter_name = "lambda";
    detail::Table table(report, csv,
                        {"lambda", "mu", "tau", "closed_abs", "integral_abs", "rel_error", "tail_decay"});
    for (double lam : cfg.lambdas) {
        const ResolventParams p(lam, cfg.mu);
        const double decay = tail_decay_constant(p);
        for (int i = 0; i < 5; ++i) {
            const double tau = 1.0 + i * (2.0 * lam - 1.0) / 4.0;
            const double closed = std::abs(resolvent_multiplier(p, tau));
            const double numeric = std::abs(resolvent_multiplier_integral(p, tau));
            table.add({lam, cfg.mu, tau, closed, numeric, std::abs(numeric - closed) / closed, decay});
        }
    }
}

inline void run_exponent_map(const ExperimentConfig& cfg, ScalingReport& report, std::ostream* csv)
{
    detail::Table table(report, csv, {"name", "x", "y"});
    for (const auto& p : figure_points(cfg.n, cfg.sigma)) {
        table.add({p.name, p.point.x, p.point.y});
    }
    if (cfg.sigma) {
        const auto [lo, hi] = admissible_inverse_r(cfg.n, *cfg.sigma);
        table.add({std::string("segment_lo"), lo, lo - *cfg.sigma});
        table.add({std::string("segment_hi"), hi, hi - *cfg.sigma});
    }
}

/// Runs the configured experiment. Rows stream to `csv` as they are produced, so a failure
/// leaves the finished rows both there and in `report`.
inline void run(const ExperimentConfig& config, ScalingReport& report, std::ostream* csv = nullptr)
{
    const auto start = std::chrono::steady_clock::now();
    report = ScalingReport{};
    report.config = resolve(config);
    const auto& cfg = report.config;
    switch (cfg.command) {
    case Command::proj_scaling: run_proj_scaling(cfg, report, csv); break;
    case Command::resolvent_scaling: run_resolvent_scaling(cfg, report, csv); break;
    case Command::dyadic_certify: run_dyadic_certify(cfg, report, csv); break;
    case Command::envelope: run_envelope(cfg, report, csv); break;
    case Command::multiplier_check: run_multiplier_check(cfg, report, csv); break;
    case Command::exponent_map: run_exponent_map(cfg, report, csv); break;
    }
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

inline ScalingReport run(const ExperimentConfig& config, std::ostream* csv = nullptr)
{
    ScalingReport report;
    run(config, report, csv);
    return report;
}

} // namespace sphres
