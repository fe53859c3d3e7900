#pragma once

// Two-sided estimates of mixed (L^r, L^s) operator norms of zonal kernels.
//
// Lower bounds come from a nonlinear power ascent over zonal inputs; upper bounds from
// log-convexity of the norm (Riesz-Thorin) over exactly computable anchor norms of the
// discretized operator.

#include "sphres/exponents.hpp"
#include "sphres/kernel.hpp"
#include "sphres/norms.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphres {

struct AscentOptions {
    int restarts = 8;             ///< seeded random starts, on top of the cap and Z_k starts
    std::uint64_t seed = 1;
    int max_iterations = 500;
    double tolerance = 1e-9;      ///< relative ratio stagnation
    bool keep_history = false;
};

struct LowerBound {
    double value = 0.0;
    ZonalFunction witness;
    int iterations = 0;           ///< iterations of the winning start
    int restarts = 0;             ///< starts tried
    bool converged = false;
    std::string start;            ///< label of the winning start
    double support_measure = 0.0; ///< measure of the witness support
    std::vector<double> history;  ///< ratio per iteration of the winning start
};

/// One anchor of an interpolation bound: exponent point, weight, anchor norm.
struct AnchorTerm {
    ExponentPoint point;
    double weight = 0.0;
    double norm = 0.0;
};

struct UpperBound {
    double value = std::numeric_limits<double>::infinity();
    std::vector<AnchorTerm> decomposition;
};

struct NormCertificate {
    ExponentPoint exponents;
    LowerBound lower;
    UpperBound upper;
    std::uint64_t seed = 1;
    std::string parameter; ///< "k=16" or "zeta=(a,b)"

    int iterations() const noexcept { return lower.iterations; }
    int restarts() const noexcept { return lower.restarts; }
};

namespace detail {

inline double lp_of(const Eigen::VectorXcd& v, const ZonalGrid& grid, double p)
{
    std::vector<double> mags(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        mags[i] = std::abs(v[i]);
    }
    return lp_norm(mags, grid.weights(), p);
}

/// |v|^{p-1} sgn(v), scaled by max|v| first so nothing under- or overflows.
inline Eigen::VectorXcd dual_direction(const Eigen::VectorXcd& v, double p)
{
    const double m = v.cwiseAbs().maxCoeff();
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
    if (!(m > 0.0)) {
        return out;
    }
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > 0.0) {
            out[i] = (v[i] / a) * std::pow(a / m, p - 1.0);
        }
    }
    return out;
}

inline double support_measure(const Eigen::VectorXcd& f, const ZonalGrid& grid)
{
    const double m = f.cwiseAbs().maxCoeff();
    double s = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        if (std::abs(f[i]) > 1e-12 * m) {
            s += grid.weights()[i];
        }
    }
    return s;
}

/// Uniform on [-1, 1) from the top 53 bits, identical on every platform.
inline double portable_uniform(std::mt19937_64& rng)
{
    return 2.0 * std::ldexp(static_cast<double>(rng() >> 11), -53) - 1.0;
}

struct AscentRun {
    double value = 0.0;
    Eigen::VectorXcd f;
    int iterations = 0;
    bool converged = false;
    std::vector<double> history;
};

inline AscentRun ascend(const DiscreteOperator& op, Eigen::VectorXcd f, double r, double s, const AscentOptions& opt)
{
    const ZonalGrid& grid = *op.grid();
    const double r_dual = r / (r - 1.0);
    AscentRun run;
    const double fn = lp_of(f, grid, r);
    if (!(fn > 0.0)) {
        return run;
    }
    f /= fn;
    Eigen::VectorXcd g = op.apply(f);
    double ratio = lp_of(g, grid, s);
    run.value = ratio;
    run.f = f;
    run.history.push_back(ratio);
    for (int it = 1; it <= opt.max_iterations; ++it) {
        const Eigen::VectorXcd h = dual_direction(g, s);
        const Eigen::VectorXcd u = op.apply_adjoint(h);
        Eigen::VectorXcd next = dual_direction(u, r_dual);
        const double nn = lp_of(next, grid, r);
        if (!(nn > 0.0)) {
            break;
        }
        next /= nn;
        const Eigen::VectorXcd g_next = op.apply(next);
        const double next_ratio = lp_of(g_next, grid, s);
        run.iterations = it;
        if (!(next_ratio >= ratio)) {
            // Rounding-level decrease: the previous iterate stays the accepted one.
            run.converged = true;
            break;
        }
        const double change = (next_ratio - ratio) / next_ratio;
        f = next;
        g = g_next;
        ratio = next_ratio;
        run.value = ratio;
        run.f = f;
        run.history.push_back(ratio);
        if (change < opt.tolerance) {
            run.converged = true;
            break;
        }
    }
    return run;
}

/// L^r -> L^inf: the best output node i and the input |A_i.|^{r'-1} conj(sgn A_i.), which
/// attains max_i ||A_i.||_{L^{r'}} exactly.
inline LowerBound row_maximizer(const DiscreteOperator& op, double r)
{
    const ZonalGrid& grid = *op.grid();
    const double r_dual = r / (r - 1.0);
    LowerBound best;
    best.restarts = 1;
    best.converged = true;
    int best_row = 0;
    for (int i = 0; i < grid.size(); ++i) {
        const Eigen::VectorXcd row = op.reduced().row(i).transpose();
        const double v = lp_of(row, grid, r_dual);
        if (v > best.value) {
            best.value = v;
            best_row = i;
        }
    }
    Eigen::VectorXcd f = dual_direction(op.reduced().row(best_row).transpose().conjugate(), r_dual);
    const double fn = lp_of(f, grid, r);
    if (fn > 0.0) {
        f /= fn;
        best.value = lp_of(op.apply(f), grid, infinity);
    }
    best.witness = ZonalFunction(op.grid(), f);
    best.start = "row-" + std::to_string(best_row);
    best.support_measure = support_measure(f, grid);
    return best;
}

} // namespace detail

/// ||K f||_s / ||f||_r for a single input, via the kernel's own application route.
inline double norm_ratio(const ZonalKernel& kernel, const ZonalFunction& f, double r, double s)
{
    return lp_norm(apply_kernel(kernel, f), s) / lp_norm(f, r);
}

/// Lower bound for ||K||_{L^r -> L^s} on zonal functions by the mixed-norm power ascent
///   g = K f,  h = |g|^{s-1} sgn g,  f' = |K* h|^{r'-1} sgn(K* h) / ||.||_r,
/// whose ratio is non-decreasing. Starts: seeded random values, caps of radius
/// 1/lambda, 4/lambda, 16/lambda (lambda = 1/scale), and Z_k for the base degree.
/// For s = infinity the norm is attained by a row of the reduced matrix and is returned exactly.
inline LowerBound norm_lower(const DiscreteOperator& op, double r, double s, const AscentOptions& opt = {})
{
    if (!(r > 1.0 && std::isfinite(r)) || !(s > 1.0)) {
        throw std::domain_error("norm_lower: 1 < r < infinity and 1 < s <= infinity are required");
    }
    const GridPtr& grid = op.grid();
    const int p = grid->size();
    if (std::isinf(s)) {
        return detail::row_maximizer(op, r);
    }

    struct Start {
        std::string label;
        Eigen::VectorXcd f;
    };
    std::vector<Start> starts;
    for (int i = 0; i < opt.restarts; ++i) {
        std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                          static_cast<std::uint32_t>(i)};
        std::mt19937_64 rng(seq);
        Eigen::VectorXcd f(p);
        for (int j = 0; j < p; ++j) {
            f[j] = detail::portable_uniform(rng);
        }
        starts.push_back({"random-" + std::to_string(i), std::move(f)});
    }
    const double scale = op.kernel().scale();
    for (double c : {1.0, 4.0, 16.0}) {
        const double theta0 = std::min(std::numbers::pi, c * scale);
        Eigen::VectorXcd f = cap(grid, theta0).indicator.values;
        if (f.cwiseAbs().maxCoeff() == 0.0) {
            f[0] = 1.0; // cap smaller than the first node
        }
        std::ostringstream label;
        label << "cap-" << c;
        starts.push_back({label.str(), std::move(f)});
    }
    if (auto k = op.kernel().base_degree(); k && *k <= grid->exactness()) {
        starts.push_back({"zonal-" + std::to_string(*k), ZonalFunction::zonal_harmonic(grid, *k).values});
    }

    LowerBound best;
    best.restarts = static_cast<int>(starts.size());
    bool have = false;
    for (auto& st : starts) {
        auto run = detail::ascend(op, std::move(st.f), r, s, opt);
        if (run.f.size() == 0) {
            continue;
        }
        const double measure = detail::support_measure(run.f, *grid);
        const bool better = !have || run.value > best.value * (1.0 + 1e-9);
        const bool tie = have && std::abs(run.value - best.value) <= 1e-9 * best.value;
        if (better || (tie && measure < best.support_measure)) {
            have = true;
            best.value = run.value;
            best.witness = ZonalFunction(grid, run.f);
            best.iterations = run.iterations;
            best.converged = run.converged;
            best.start = st.label;
            best.support_measure = measure;
            best.history = opt.keep_history ? std::move(run.history) : std::vector<double>{};
        }
    }
    return best;
}

inline LowerBound norm_lower(const ZonalKernel& kernel, const GridPtr& grid, double r, double s,
                             const AscentOptions& opt = {})
{
    return norm_lower(discretize(kernel, grid), r, s, opt);
}

/// Exactly computable norms of the discrete operator f -> A W f.
class AnchorNorms {
public:
    explicit AnchorNorms(const DiscreteOperator& op) : op_(op)
    {
        abs_ = op.reduced().cwiseAbs();
    }

    /// ||K||_{1 -> inf} = max |A_ij|.
    double one_to_inf() const { return abs_.maxCoeff(); }

    /// ||K||_{1 -> s} = max_j ||A_{.j}||_{L^s(w)}; s = 1 gives the column mass.
    double one_to(double s) const
    {
        const auto& w = op_.grid()->weights();
        double best = 0.0;
        std::vector<double> col(abs_.rows());
        for (Eigen::Index j = 0; j < abs_.cols(); ++j) {
            for (Eigen::Index i = 0; i < abs_.rows(); ++i) {
                col[i] = abs_(i, j);
            }
            best = std::max(best, lp_norm(col, w, s));
        }
        return best;
    }

    /// ||K||_{r -> inf} = max_i ||A_{i.}||_{L^{r'}(w)}, r' = 1/(1 - x), x = 1/r.
    double to_inf(double x) const
    {
        const double r_dual = (x >= 1.0) ? infinity : 1.0 / (1.0 - x);
        const auto& w = op_.grid()->weights();
        double best = 0.0;
        std::vector<double> row(abs_.cols());
        for (Eigen::Index i = 0; i < abs_.rows(); ++i) {
            for (Eigen::Index j = 0; j < abs_.cols(); ++j) {
                row[j] = abs_(i, j);
            }
            best = std::max(best, lp_norm(row, w, r_dual));
        }
        return best;
    }

    /// ||K||_{2 -> 2}: max |m_k| for multiplier kernels (exact by grid orthogonality),
    /// otherwise the largest singular value of W^{1/2} A W^{1/2}.
    double two_to_two() const
    {
        const auto& kernel = op_.kernel();
        if (kernel.is_spectral()) {
            double m = 0.0;
            for (const auto& c : kernel.coeffs()) {
                m = std::max(m, std::abs(c));
            }
            return m;
        }
        const Eigen::VectorXd sw = op_.grid()->weight_vector().cwiseSqrt();
        if (op_.is_real()) {
            const Eigen::MatrixXd b = sw.asDiagonal() * op_.reduced().real() * sw.asDiagonal();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b, Eigen::EigenvaluesOnly);
            return es.eigenvalues().cwiseAbs().maxCoeff();
        }
        const Eigen::MatrixXcd b =
            sw.cast<cplx>().asDiagonal() * op_.reduced() * sw.cast<cplx>().asDiagonal();
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(b);
        return svd.singularValues()[0];
    }

private:
    const DiscreteOperator& op_;
    Eigen::MatrixXd abs_;
};

namespace detail {

/// Minimum of sum_i a_i log N_i over convex combinations of anchor points equal to the
/// target; the optimum of this linear program sits on at most three anchors.
inline UpperBound interpolate_anchors(const std::vector<AnchorTerm>& anchors, ExponentPoint target)
{
    const double eps = 1e-12;
    UpperBound best;
    double best_log = std::numeric_limits<double>::infinity();
    auto consider = [&](std::vector<AnchorTerm> terms) {
        double lg = 0.0;
        for (const auto& t : terms) {
            if (t.weight <= 0.0) {
                continue;
            }
            if (t.norm <= 0.0) {
                lg = -std::numeric_limits<double>::infinity();
                break;
            }
            lg += t.weight * std::log(t.norm);
        }
        if (lg < best_log) {
            best_log = lg;
            std::erase_if(terms, [](const AnchorTerm& t) { return t.weight <= 0.0; });
            best.decomposition = std::move(terms);
        }
    };
    const std::size_t m = anchors.size();
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = anchors[i].point;
        if (std::abs(a.x - target.x) < eps && std::abs(a.y - target.y) < eps) {
            consider({{a, 1.0, anchors[i].norm}});
        }
        for (std::size_t j = i + 1; j < m; ++j) {
            const auto& b = anchors[j].point;
            // target = t a + (1 - t) b
            const double dx = a.x - b.x;
            const double dy = a.y - b.y;
            const double len2 = dx * dx + dy * dy;
            if (len2 > 0.0) {
                const double t = ((target.x - b.x) * dx + (target.y - b.y) * dy) / len2;
                const double ex = b.x + t * dx - target.x;
                const double ey = b.y + t * dy - target.y;
                if (t > -eps && t < 1.0 + eps && std::hypot(ex, ey) < eps) {
                    const double tc = std::clamp(t, 0.0, 1.0);
                    consider({{a, tc, anchors[i].norm}, {b, 1.0 - tc, anchors[j].norm}});
                }
            }
            for (std::size_t k = j + 1; k < m; ++k) {
                const auto& c = anchors[k].point;
                const double det = (a.x - c.x) * (b.y - c.y) - (b.x - c.x) * (a.y - c.y);
                if (std::abs(det) < 1e-14) {
                    continue;
                }
                const double la = ((b.y - c.y) * (target.x - c.x) - (b.x - c.x) * (target.y - c.y)) / det;
                const double lb = ((c.y - a.y) * (target.x - c.x) + (a.x - c.x) * (target.y - c.y)) / det;
                const double lc = 1.0 - la - lb;
                if (la > -eps && lb > -eps && lc > -eps) {
                    consider({{a, std::max(la, 0.0), anchors[i].norm},
                              {b, std::max(lb, 0.0), anchors[j].norm},
                              {c, std::max(lc, 0.0), anchors[k].norm}});
                }
            }
        }
    }
    best.value = std::exp(best_log);
    return best;
}

} // namespace detail

/// Upper bound for ||K||_{L^r -> L^s} of the discrete operator: the exact LP minimum of
/// prod N_i^{a_i} over convex decompositions of (1/r, 1/s) into anchor points
/// (1,0), (1,1), (1/2,1/2), the edge x = 1 and the edge y = 0 (step 1/edge_steps, plus
/// the target's own projections onto the two edges).
inline UpperBound norm_upper(const DiscreteOperator& op, double r, double s, int edge_steps = 32)
{
    const ExponentPoint target{1.0 / r, 1.0 / s};
    const double tol = 1e-12;
    if (!(target.y >= -tol && target.y <= target.x + tol && target.x <= 1.0 + tol)) {
        throw std::domain_error("norm_upper: (1/r, 1/s) must satisfy 0 <= 1/s <= 1/r <= 1");
    }
    const AnchorNorms an(op);
    std::vector<AnchorTerm> anchors;
    anchors.push_back({{1.0, 0.0}, 0.0, an.one_to_inf()});
    anchors.push_back({{1.0, 1.0}, 0.0, an.one_to(1.0)});
    anchors.push_back({{0.5, 0.5}, 0.0, an.two_to_two()});
    std::vector<double> ys;
    std::vector<double> xs;
    for (int m = 1; m < edge_steps; ++m) {
        ys.push_back(static_cast<double>(m) / edge_steps);
        xs.push_back(static_cast<double>(m) / edge_steps);
    }
    xs.push_back(0.0);
    if (target.y > 0.0 && target.y < 1.0) {
        ys.push_back(target.y);
    }
    if (target.x > 0.0 && target.x < 1.0) {
        xs.push_back(target.x);
    }
    for (double y : ys) {
        anchors.push_back({{1.0, y}, 0.0, an.one_to(1.0 / y)});
    }
    for (double x : xs) {
        anchors.push_back({{x, 0.0}, 0.0, an.to_inf(x)});
    }
    auto out = detail::interpolate_anchors(anchors, target);
    if (out.decomposition.empty()) {
        throw std::domain_error("norm_upper: exponent pair outside the anchor hull");
    }
    return out;
}

inline UpperBound norm_upper(const ZonalKernel& kernel, const GridPtr& grid, double r, double s, int edge_steps = 32)
{
    return norm_upper(discretize(kernel, grid), r, s, edge_steps);
}

/// Both bounds at one exponent pair.
inline NormCertificate certify(const DiscreteOperator& op, double r, double s, const AscentOptions& opt = {})
{
    NormCertificate cert;
    cert.exponents = ExponentPoint::from_rs(r, s);
    cert.lower = norm_lower(op, r, s, opt);
    cert.upper = norm_upper(op, r, s);
    cert.seed = opt.seed;
    if (auto k = op.kernel().base_degree()) {
        cert.parameter = "k=" + std::to_string(*k);
    } else {
        cert.parameter = op.kernel().description();
    }
    return cert;
}

/// Structured text record: key=value fields separated by spaces.
inline std::string to_record(const NormCertificate& cert, int n, const std::string& grid_reference)
{
    std::ostringstream out;
    out << std::setprecision(15);
    out << "n=" << n << ' ' << cert.parameter << " r=" << cert.exponents.r() << " s=" << cert.exponents.s()
        << " lower=" << cert.lower.value << " upper=" << cert.upper.value << " grid=" << grid_reference
        << " seed=" << cert.seed << " iterations=" << cert.lower.iterations;
    return out.str();
}

} // namespace sphres
