#pragma once

// JSON summary of a ScalingReport. Needs the vendored nlohmann/json header on the include path.

#include "sphres/experiments.hpp"

#include <json.hpp>

#include <cmath>
#include <string>

namespace sphres {

inline nlohmann::ordered_json config_json(const ExperimentConfig& cfg)
{
    nlohmann::ordered_json j;
    j["command"] = to_string(cfg.command);
    j["n"] = cfg.n;
    j["sigma"] = cfg.sigma ? nlohmann::ordered_json(*cfg.sigma) : nlohmann::ordered_json(nullptr);
    j["r"] = cfg.r ? nlohmann::ordered_json(*cfg.r) : nlohmann::ordered_json(nullptr);
    j["k"] = cfg.ks;
    j["lambda"] = cfg.lambdas;
    j["mu"] = cfg.mu;
    if (cfg.grid_points) {
        j["grid_points"] = *cfg.grid_points;
    } else {
        j["grid_points"] = cfg.command == Command::dyadic_certify ? "max(4k+16, ceil(8 lambda_k pi/2))"
                                                                   : "4*max_degree+16";
    }
    j["restarts"] = cfg.restarts;
    j["seed"] = cfg.seed;
    j["caps"] = cfg.caps.empty() && cfg.command == Command::dyadic_certify
                    ? nlohmann::ordered_json("1/lambda_k,1/8,1/2")
                    : nlohmann::ordered_json(cfg.caps);
    j["output"] = cfg.output;
    return j;
}

inline nlohmann::ordered_json report_json(const ScalingReport& report, const std::string& error = {})
{
    nlohmann::ordered_json j;
    j["config"] = config_json(report.config);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        nlohmann::ordered_json row;
        for (std::size_t c = 0; c < report.columns.size(); ++c) {
            std::visit([&](const auto& v) { row[report.columns[c]] = v; }, report.rows[i][c]);
        }
        if (i < report.extras.size()) {
            for (const auto& [key, value] : report.extras[i]) {
                if (value == std::floor(value) && std::abs(value) < 1e15) {
                    row[key] = static_cast<long long>(value);
                } else {
                    row[key] = value;
                }
            }
        }
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    if (report.fit) {
        j["slope"] = report.fit->slope;
        j["residual"] = report.fit->residual;
        j["intercept"] = report.fit->intercept;
    } else {
        j["slope"] = nullptr;
        j["residual"] = nullptr;
    }
    if (report.predicted_exponent) {
        j["predicted_exponent"] = *report.predicted_exponent;
    }
    if (report.exponents) {
        j["exponents"] = {{"r", report.exponents->r()}, {"s", report.exponents->s()}};
    }
    j["wall_seconds"] = report.wall_seconds;
    j["version"] = version;
    if (!error.empty()) {
        j["error"] = error;
    }
    return j;
}

} // namespace sphres
