// Problem definition, least-squares assembly, solve and field evaluation.
//
// The scattered field is the basis expansion whose coefficients minimise the
// collocation misfit against the boundary data at the sample points.

#pragma once

#include "lightning/basis.hpp"
#include "lightning/least_squares.hpp"
#include "lightning/placement.hpp"
#include "lightning/waves.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <vector>

namespace lightning {

/// Direct: boundary data equals the incident wave. Scattering: boundary data
/// is its negative, so that incident plus scattered vanishes on the obstacle.
enum class BoundaryMode { Direct, Scattering };

struct Placement {
    int poles_per_corner = 80;
    std::optional<double> pole_rate; // empty means recommended_rate(poles_per_corner)
    double length_fraction = 0.8;
    double min_pole_distance = 1e-9;
    std::map<CornerId, CornerOverride> overrides;
    SampleParams samples;

    double rate() const { return pole_rate.value_or(recommended_rate(poles_per_corner)); }

    PoleParams pole_params() const
    {
        PoleParams p;
        p.poles_per_corner = poles_per_corner;
        p.rate = rate();
        p.length_fraction = length_fraction;
        p.min_distance = min_pole_distance;
        p.overrides = overrides;
        return p;
    }
};

struct Problem {
    Scene scene;
    double wavenumber = 20.0;
    Wave incident;
    BoundaryMode mode = BoundaryMode::Direct;
    std::function<Complex(Complex)> custom_data; // replaces the incident-derived data when set
    BasisSpec basis;
    Placement placement;

    Complex boundary_value(Complex z) const
    {
        if (custom_data)
            return custom_data(z);
        const Complex u = incident(wavenumber, z);
        return mode == BoundaryMode::Scattering ? -u : u;
    }

    void validate() const
    {
        if (!(wavenumber > 0.0) || !std::isfinite(wavenumber))
            throw std::invalid_argument("wavenumber must be a positive finite number");
        basis.validate();
        incident.validate(scene);
    }
};

struct Diagnostics {
    double residual = 0.0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t dropped_poles = 0;
    std::size_t rank = 0;
    double condition = std::numeric_limits<double>::quiet_NaN();
    double pole_rate = std::numeric_limits<double>::quiet_NaN();
};

struct Solution {
    double wavenumber = 0.0;
    Basis basis;
    std::vector<CornerId> pole_corner_ids; // parallel to basis.poles
    std::vector<Complex> coefficients;     // one per column, unscaled
    Diagnostics diagnostics;
};

struct Discretization {
    PoleSet poles;
    SampleSet samples;
};

inline Discretization discretize(const Problem& problem)
{
    return {place_poles(problem.scene, problem.placement.pole_params()),
            place_samples(problem.scene, problem.placement.samples)};
}

inline Basis make_basis(const Problem& problem, const PoleSet& poles)
{
    return Basis{problem.basis, poles.locations(), problem.scene.interior_points()};
}

struct LinearSystem {
    Eigen::MatrixXcd matrix;
    Eigen::VectorXcd rhs;
};

inline LinearSystem assemble(const Problem& problem, const Basis& basis, const SampleSet& samples)
{
    const auto rows = static_cast<Eigen::Index>(samples.size());
    const auto cols = static_cast<Eigen::Index>(basis.column_count());
    if (rows < cols)
        std::clog << "warning: " << rows << " sample rows for " << cols
                  << " basis columns; the least-squares system is underdetermined\n";
    LinearSystem sys{Eigen::MatrixXcd(rows, cols), Eigen::VectorXcd(rows)};
    std::vector<Complex> row(basis.column_count());
    for (Eigen::Index i = 0; i < rows; ++i) {
        const Complex z = samples.samples[static_cast<std::size_t>(i)].location;
        basis_eval_into(basis, problem.wavenumber, z, row);
        sys.matrix.row(i) = Eigen::Map<const Eigen::RowVectorXcd>(row.data(), cols);
        sys.rhs(i) = problem.boundary_value(z);
    }
    return sys;
}

inline LinearSystem assemble(const Problem& problem, const PoleSet& poles, const SampleSet& samples)
{
    return assemble(problem, make_basis(problem, poles), samples);
}

inline Solution solve(const Problem& problem)
{
    problem.validate();
    const auto disc = discretize(problem);
    Basis basis = make_basis(problem, disc.poles);
    const auto sys = assemble(problem, basis, disc.samples);
    const auto ls = solve_ls(sys.matrix, sys.rhs);

    Solution sol;
    sol.wavenumber = problem.wavenumber;
    sol.basis = std::move(basis);
    for (const auto& p : disc.poles.poles)
        sol.pole_corner_ids.push_back(p.corner);
    sol.coefficients.assign(ls.coefficients.data(), ls.coefficients.data() + ls.coefficients.size());
    sol.diagnostics.residual = ls.residual_norm;
    sol.diagnostics.rows = static_cast<std::size_t>(sys.matrix.rows());
    sol.diagnostics.cols = static_cast<std::size_t>(sys.matrix.cols());
    sol.diagnostics.dropped_poles = disc.poles.dropped;
    sol.diagnostics.rank = static_cast<std::size_t>(ls.rank);
    sol.diagnostics.condition = ls.condition;
    sol.diagnostics.pole_rate = problem.placement.rate();
    return sol;
}

/// Scattered field at z; NaN within kSingularDistance of a pole or centre.
inline Complex evaluate(const Solution& solution, Complex z, std::vector<Complex>& scratch)
{
    scratch.resize(solution.basis.column_count());
    if (scratch.size() != solution.coefficients.size())
        throw std::invalid_argument("solution coefficient count does not match its basis");
    try {
        basis_eval_into(solution.basis, solution.wavenumber, z, scratch);
    } catch (const SingularPointError&) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        return {nan, nan};
    }
    Complex sum = 0.0;
    for (std::size_t c = 0; c < scratch.size(); ++c)
        sum += solution.coefficients[c] * scratch[c];
    return sum;
}

inline Complex evaluate(const Solution& solution, Complex z)
{
    std::vector<Complex> scratch;
    return evaluate(solution, z, scratch);
}

inline std::vector<Complex> evaluate(const Solution& solution, const std::vector<Complex>& points)
{
    std::vector<Complex> out;
    out.reserve(points.size());
    std::vector<Complex> scratch;
    for (const Complex& z : points)
        out.push_back(evaluate(solution, z, scratch));
    return out;
}

/// Empty entries mark points strictly inside an obstacle.
inline std::vector<std::optional<Complex>> evaluate(const Solution& solution, const Scene& scene,
                                                    const std::vector<Complex>& points)
{
    std::vector<std::optional<Complex>> out;
    out.reserve(points.size());
    std::vector<Complex> scratch;
    for (const Complex& z : points) {
        if (scene.inside_any(z))
            out.emplace_back();
        else
            out.emplace_back(evaluate(solution, z, scratch));
    }
    return out;
}

} // namespace lightning
