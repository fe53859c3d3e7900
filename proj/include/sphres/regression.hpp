#pragma once

// Ordinary least squares for scaling laws.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace sphres {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; ///< root-mean-square deviation from the line
};

/// Least-squares line y = slope x + intercept.
inline LineFit least_squares(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("least_squares: at least two (x, y) pairs are required");
    }
    const double m = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 1e-300)) {
        throw std::invalid_argument("least_squares: degenerate abscissae");
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (fit.slope * x[i] + fit.intercept);
        ss += e * e;
    }
    fit.residual = std::sqrt(ss / m);
    return fit;
}

/// Log-log fit of value against parameter; needs at least three positive rows.
inline LineFit fit_slope(std::span<const double> parameter, std::span<const double> value)
{
    if (parameter.size() != value.size() || parameter.size() < 3) {
        throw std::invalid_argument("fit_slope: at least three rows are required");
    }
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < parameter.size(); ++i) {
        if (!(parameter[i] > 0.0) || !(value[i] > 0.0)) {
            throw std::invalid_argument("fit_slope: parameters and values must be positive");
        }
        lx.push_back(std::log(parameter[i]));
        ly.push_back(std::log(value[i]));
    }
    return least_squares(lx, ly);
}

} // namespace sphres
