// Boundary-error profiles, parameter sweeps and root-exponential convergence
// fits. The error metric is the sup norm of |u - f| over a dense profile.

#pragma once

#include "lightning/format.hpp"
#include "lightning/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace lightning {

/// Clustered: half-edge fractions f((j - offset)/n), j = 1..n, under the
/// solve-time sample law, dense near corners. Uniform: the fractions
/// (j - offset)/n themselves, equal arclength spacing.
enum class ProfileGrid { Clustered, Uniform };

struct ProfileOptions {
    int points_per_half_edge = 100;
    double offset = 0.5;
    ProfileGrid grid = ProfileGrid::Clustered;
    double corner_zone = 0.1; // half-edge fraction below which a point counts towards its corner
};

struct ProfilePoint {
    Complex location;
    std::size_t region = 0;
    std::size_t edge = 0;
    CornerId corner;       // nearer corner of the edge
    double fraction = 0.0; // half-edge fraction from that corner, in (0, 1]
};

struct ErrorProfile {
    std::vector<ProfilePoint> points; // in boundary order, edge by edge
    std::vector<double> errors;
    double max_error = 0.0;
    std::map<CornerId, double> corner_max;
    std::map<std::pair<std::size_t, std::size_t>, double> edge_interior_max; // keyed by (region, edge)
    double corner_max_overall = 0.0;
    double interior_max_overall = 0.0;
};

/// Test points in boundary order; never coincident with the problem's samples.
inline std::vector<ProfilePoint> profile_points(const Problem& problem, const ProfileOptions& opts)
{
    if (opts.points_per_half_edge < 8)
        throw std::invalid_argument("points_per_half_edge must be >= 8");
    if (!(opts.offset > 0.0 && opts.offset < 1.0))
        throw std::invalid_argument("profile offset must lie in (0, 1)");
    const int n = opts.points_per_half_edge;
    const auto& sp = problem.placement.samples;
    const auto fraction_at = [&](double u) {
        return opts.grid == ProfileGrid::Clustered ? sample_distribution(u, sp.exponent, sp.rate_const) : u;
    };

    std::set<std::pair<double, double>> taken;
    for (const auto& s : place_samples(problem.scene, sp).samples)
        taken.insert({s.location.real(), s.location.imag()});

    std::vector<double> grid;
    for (int j = 1; j <= n; ++j)
        grid.push_back((j - opts.offset) / n);

    std::vector<ProfilePoint> out;
    for (std::size_t r = 0; r < problem.scene.regions().size(); ++r) {
        const Region& region = problem.scene.region(r);
        const std::size_t m = region.size();
        for (std::size_t edge = 0; edge < m; ++edge) {
            const auto emit = [&](double u, bool from_start) {
                const CornerId corner{r, from_start ? edge : (edge + 1) % m};
                // The two index grids can share a rational, putting a test point on
                // a sample; step towards the previous grid node until clear. Points
                // that still collide have rounded onto a sample and are skipped.
                double shift = 0.5 / n;
                for (int attempt = 0; attempt < 8; ++attempt, shift *= 0.5) {
                    const double f = fraction_at(u);
                    const ProfilePoint p{edge_point(region, edge, from_start ? 0.5 * f : 1.0 - 0.5 * f), r, edge,
                                         corner, f};
                    if (!taken.count({p.location.real(), p.location.imag()})) {
                        out.push_back(p);
                        return;
                    }
                    u -= shift;
                }
            };
            for (double u : grid)
                emit(u, true);
            for (auto it = grid.rbegin(); it != grid.rend(); ++it)
                emit(*it, false);
        }
    }
    return out;
}

inline ErrorProfile error_profile(const Solution& solution, const Problem& problem, const ProfileOptions& opts = {})
{
    ErrorProfile prof;
    prof.points = profile_points(problem, opts);
    std::vector<Complex> scratch;
    for (const auto& p : prof.points) {
        const double e = std::abs(evaluate(solution, p.location, scratch) - problem.boundary_value(p.location));
        prof.errors.push_back(e);
        // NaN compares false; keep it visible in the maxima.
        const auto update = [e](double& slot) { slot = (std::isnan(e) || e > slot) ? e : slot; };
        update(prof.max_error);
        if (p.fraction < opts.corner_zone) {
            update(prof.corner_max[p.corner]);
            update(prof.corner_max_overall);
        } else {
            update(prof.edge_interior_max[{p.region, p.edge}]);
            update(prof.interior_max_overall);
        }
    }
    return prof;
}

/// Pointwise |u - f| at the solve-time samples, in sample order.
inline std::vector<double> sample_errors(const Solution& solution, const Problem& problem)
{
    std::vector<double> out;
    std::vector<Complex> scratch;
    for (const auto& s : place_samples(problem.scene, problem.placement.samples).samples)
        out.push_back(std::abs(evaluate(solution, s.location, scratch) - problem.boundary_value(s.location)));
    return out;
}

inline void write_profile_csv(const ErrorProfile& prof, std::ostream& out)
{
    out << "index,x,y,error\n";
    for (std::size_t i = 0; i < prof.points.size(); ++i)
        out << i << ',' << format_double(prof.points[i].location.real()) << ','
            << format_double(prof.points[i].location.imag()) << ',' << format_double(prof.errors[i]) << '\n';
}

// ---------------------------------------------------------------------------

inline const std::vector<std::string>& sweep_parameters()
{
    static const std::vector<std::string> names = {"pole_rate",      "poles_per_corner", "samples_per_corner_side",
                                                   "sample_exponent", "newman_order",     "runge_degree"};
    return names;
}

struct SweepRow {
    double value = 0.0;
    double max_error = 0.0;
    double residual = 0.0;
    double seconds = 0.0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    double pole_rate = 0.0;
};

struct SweepTable {
    std::string parameter;
    std::vector<double> values;
    std::vector<SweepRow> rows;
};

namespace detail {

inline int integral_value(const std::string& name, double v)
{
    if (v != std::floor(v) || std::abs(v) > 1e9)
        throw std::invalid_argument(name + " requires integer values, got " + format_double(v));
    return static_cast<int>(v);
}

} // namespace detail

/// Copy of the template with one parameter replaced.
inline Problem with_parameter(const Problem& problem, const std::string& name, double value)
{
    Problem p = problem;
    if (name == "pole_rate")
        p.placement.pole_rate = value;
    else if (name == "poles_per_corner")
        p.placement.poles_per_corner = detail::integral_value(name, value);
    else if (name == "samples_per_corner_side")
        p.placement.samples.per_side = detail::integral_value(name, value);
    else if (name == "sample_exponent")
        p.placement.samples.exponent = value;
    else if (name == "newman_order")
        p.basis.newman_order = detail::integral_value(name, value);
    else if (name == "runge_degree")
        p.basis.runge_degree = detail::integral_value(name, value);
    else
        throw std::invalid_argument("unknown sweep parameter '" + name + "'");
    return p;
}

struct SolveReport {
    Solution solution;
    ErrorProfile profile;
    double seconds = 0.0;
};

inline SolveReport solve_and_profile(const Problem& problem, const ProfileOptions& opts = {})
{
    const auto t0 = std::chrono::steady_clock::now();
    SolveReport rep{solve(problem), {}, 0.0};
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.profile = error_profile(rep.solution, problem, opts);
    return rep;
}

inline SweepTable sweep(const Problem& problem, const std::string& parameter, const std::vector<double>& values,
                        const ProfileOptions& opts = {})
{
    if (std::find(sweep_parameters().begin(), sweep_parameters().end(), parameter) == sweep_parameters().end())
        throw std::invalid_argument("unknown sweep parameter '" + parameter + "'");
    SweepTable table{parameter, values, {}};
    for (double v : values) {
        const Problem p = with_parameter(problem, parameter, v);
        const auto rep = solve_and_profile(p, opts);
        table.rows.push_back({v, rep.profile.max_error, rep.solution.diagnostics.residual, rep.seconds,
                              rep.solution.diagnostics.rows, rep.solution.diagnostics.cols,
                              rep.solution.diagnostics.pole_rate});
    }
    return table;
}

inline void write_sweep_csv(const SweepTable& table, std::ostream& out)
{
    out << table.parameter << ",max_error,residual,seconds,rows,cols,pole_rate\n";
    for (const auto& r : table.rows)
        out << format_double(r.value) << ',' << format_double(r.max_error) << ',' << format_double(r.residual) << ','
            << format_double(r.seconds) << ',' << r.rows << ',' << r.cols << ',' << format_double(r.pole_rate)
            << '\n';
}

// ---------------------------------------------------------------------------

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double correlation = 0.0; // 0 when either variable is constant
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line needs two or more paired values");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit fit;
    fit.slope = sxx > 0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    fit.correlation = (sxx > 0 && syy > 0) ? sxy / std::sqrt(sxx * syy) : 0.0;
    return fit;
}

struct ConvergencePoint {
    int poles_per_corner = 0;
    double sqrt_p = 0.0;
    double max_error = 0.0;
    double log10_error = 0.0;
    double pole_rate = 0.0;
};

struct ConvergenceStudy {
    std::vector<ConvergencePoint> points;
    LineFit fit; // log10_error against sqrt_p
};

inline ConvergenceStudy convergence_study(const Problem& problem, const std::vector<int>& pole_counts,
                                          const ProfileOptions& opts = {})
{
    if (pole_counts.size() < 4)
        throw std::invalid_argument("convergence_study needs at least 4 pole counts");
    ConvergenceStudy study;
    std::vector<double> xs, ys;
    for (int p : pole_counts) {
        Problem q = problem;
        q.placement.poles_per_corner = p;
        q.placement.pole_rate.reset();
        const auto rep = solve_and_profile(q, opts);
        const double err = rep.profile.max_error;
        // Exact zeros would give -inf; clamp to the smallest normal double.
        const double lg = std::log10(std::max(err, std::numeric_limits<double>::min()));
        study.points.push_back({p, std::sqrt(static_cast<double>(p)), err, lg, q.placement.rate()});
        xs.push_back(std::sqrt(static_cast<double>(p)));
        ys.push_back(lg);
    }
    study.fit = fit_line(xs, ys);
    return study;
}

inline void write_convergence_csv(const ConvergenceStudy& study, std::ostream& out)
{
    out << "poles_per_corner,sqrt_p,pole_rate,max_error,log10_error\n";
    for (const auto& p : study.points)
        out << p.poles_per_corner << ',' << format_double(p.sqrt_p) << ',' << format_double(p.pole_rate) << ','
            << format_double(p.max_error) << ',' << format_double(p.log10_error) << '\n';
}

} // namespace lightning
