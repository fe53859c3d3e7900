// Command-line experiment runner.
//
//   sphres <command> --n INT --sigma REAL [--r REAL] --k 4,8,16,32 [--lambda 8,16,32 --mu 1]
//          [--grid-points INT] [--restarts INT] [--seed INT] --out PATH
//
// Writes PATH (CSV, rows streamed as they finish) and PATH with a .json extension (summary).
// Exit status: 0 ok, 2 inadmissible exponents, 3 numerical failure.

#include "sphres/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

constexpr int exit_inadmissible = 2;
constexpr int exit_numerical = 3;

void write_json(const std::filesystem::path& path, const sphres::ScalingReport& report, const std::string& error)
{
    std::ofstream out(path);
    out << sphres::report_json(report, error).dump(2) << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Norm estimates for spectral projectors and resolvents on spheres"};
    sphres::ExperimentConfig cfg;
    std::string command;
    double sigma = 0.0;
    double r = 0.0;
    int grid_points = 0;

    app.add_option("command", command, "proj-scaling | resolvent-scaling | dyadic-certify | envelope | "
                                       "multiplier-check | exponent-map")
        ->required()
        ->check(CLI::IsMember({"proj-scaling", "resolvent-scaling", "dyadic-certify", "envelope",
                               "multiplier-check", "exponent-map"}));
    app.add_option("--n", cfg.n, "sphere dimension")->capture_default_str();
    auto* sigma_opt = app.add_option("--sigma", sigma, "1/r - 1/s");
    auto* r_opt = app.add_option("--r", r, "domain exponent (default: admissible midpoint)");
    app.add_option("--k", cfg.ks, "degrees")->delimiter(',')->capture_default_str();
    app.add_option("--lambda", cfg.lambdas, "spectral parameters lambda")->delimiter(',')->capture_default_str();
    app.add_option("--mu", cfg.mu, "imaginary part mu")->capture_default_str();
    app.add_option("--caps", cfg.caps, "cap radii for dyadic-certify")->delimiter(',');
    auto* grid_opt = app.add_option("--grid-points", grid_points, "grid size (default: 4 max-degree + 16)");
    app.add_option("--restarts", cfg.restarts, "random restarts of the ascent")->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed of the random restarts")->capture_default_str();
    app.add_option("--out", cfg.output, "CSV path; the JSON summary goes next to it")->required();

    CLI11_PARSE(app, argc, argv);

    cfg.command = *sphres::parse_command(command);
    if (*sigma_opt) {
        cfg.sigma = sigma;
    }
    if (*r_opt) {
        cfg.r = r;
    }
    if (*grid_opt) {
        cfg.grid_points = grid_points;
    }

    const std::filesystem::path csv_path(cfg.output);
    std::filesystem::path json_path(csv_path);
    json_path.replace_extension(".json");
    if (json_path == csv_path) {
        json_path += ".json";
    }

    sphres::ScalingReport report;
    report.config = cfg;
    try {
        report.config = sphres::resolve(cfg);
    } catch (const sphres::inadmissible_error& e) {
        std::cerr << "inadmissible: " << e.what() << '\n';
        return exit_inadmissible;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << '\n';
        return static_cast<int>(CLI::ExitCodes::ValidationError);
    }

    if (csv_path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(csv_path.parent_path(), ec);
    }
    std::ofstream csv(csv_path);
    if (!csv) {
        std::cerr << "cannot open " << csv_path << '\n';
        return static_cast<int>(CLI::ExitCodes::FileError);
    }
    try {
        sphres::run(cfg, report, &csv);
    } catch (const std::domain_error& e) {
        std::cerr << "inadmissible: " << e.what() << '\n';
        write_json(json_path, report, e.what());
        return exit_inadmissible;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        write_json(json_path, report, e.what());
        return exit_numerical;
    }
    write_json(json_path, report, {});
    std::cout << "wrote " << csv_path.string() << " and " << json_path.string() << " (" << report.rows.size()
              << " rows";
    if (report.fit) {
        std::cout << ", slope " << report.fit->slope;
    }
    std::cout << ")\n";
    return 0;
}
