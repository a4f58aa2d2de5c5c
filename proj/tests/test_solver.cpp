#include "lightning/solver.hpp"
#include "oracle/bessel_series.hpp"
#include "oracle/normal_equations.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace lightning;

namespace {

constexpr double kPi = std::numbers::pi;

Complex oracle_hankel(int n, double x) { return {oracle::j(n, x), oracle::y(n, x)}; }

Problem small_problem(Wave wave, BoundaryMode mode = BoundaryMode::Direct)
{
    Problem p{Scene(shapes::unit_square()), 20.0, std::move(wave), mode};
    p.placement.poles_per_corner = 20;
    p.placement.samples.per_side = 80;
    return p;
}

oracle::DenseMatrix to_dense(const Eigen::MatrixXcd& a)
{
    oracle::DenseMatrix out(static_cast<std::size_t>(a.rows()));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out[static_cast<std::size_t>(i)].push_back(a(i, j));
    return out;
}

} // namespace

TEST(Basis, SinglePoleOnRealAxis)
{
    const Basis b{BasisSpec{1, 0, false}, {Complex(0, 0)}, {}};
    const auto cols = basis_eval(b, 3.0, Complex(0.7, 0));
    ASSERT_EQ(cols.size(), 2u);
    EXPECT_LT(std::abs(cols[0] - oracle_hankel(0, 2.1)), 1e-13);
    EXPECT_LT(std::abs(cols[1] - oracle_hankel(1, 2.1)), 1e-13);
}

TEST(Basis, DirectionFactorOnImaginaryAxis)
{
    const Basis b{BasisSpec{1, 0, false}, {Complex(0, 0)}, {}};
    const auto cols = basis_eval(b, 3.0, Complex(0, 0.7));
    EXPECT_LT(std::abs(cols[1] - oracle_hankel(1, 2.1) * Complex(0, 1)), 1e-13);
}

TEST(Basis, ShiftedPoleMatchesOracle)
{
    const Complex pole(0.5, 0.5);
    const Basis b{BasisSpec{3, 0, false}, {pole}, {}};
    const Complex d = Complex(2, 0) - pole;
    const auto cols = basis_eval(b, 20.0, Complex(2, 0));
    for (int n = 0; n <= 3; ++n) {
        const Complex expected = oracle_hankel(n, 20.0 * std::abs(d)) * std::pow(d / std::abs(d), n);
        EXPECT_LT(std::abs(cols[static_cast<std::size_t>(n)] - expected), 1e-12 * std::abs(expected)) << n;
    }
}

TEST(Basis, ColumnLayoutPolesThenCentresThenNegativeOrders)
{
    const Complex p0(0.2, 0.3), p1(0.7, 0.1), c(0.5, 0.5);
    const Basis b{BasisSpec{2, 3, true}, {p0, p1}, {c}};
    const Complex z(2.0, -1.0);
    const double k = 5.0;
    const auto cols = basis_eval(b, k, z);
    ASSERT_EQ(cols.size(), 3u * 2 + 7);
    const auto term = [&](Complex centre, int n) {
        const Complex d = z - centre;
        const double r = std::abs(d);
        return oracle_hankel(std::abs(n), k * r) * std::pow(d / r, n);
    };
    std::size_t i = 0;
    for (Complex p : {p0, p1})
        for (int n = 0; n <= 2; ++n)
            EXPECT_LT(std::abs(cols[i++] - term(p, n)), 1e-12) << i;
    for (int n = 0; n <= 3; ++n)
        EXPECT_LT(std::abs(cols[i++] - term(c, n)), 1e-12) << i;
    for (int n = -1; n >= -3; --n)
        EXPECT_LT(std::abs(cols[i++] - term(c, n)), 1e-12) << i;
}

TEST(Basis, ColumnCountFormula)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> order(1, 6), degree(0, 30), count(0, 40);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = order(rng), n2 = degree(rng);
        const bool neg = trial % 2 == 0;
        Basis b{BasisSpec{m, n2, neg}, std::vector<Complex>(static_cast<std::size_t>(count(rng))),
                std::vector<Complex>(static_cast<std::size_t>(count(rng) % 4))};
        const std::size_t per_centre = neg ? 2 * static_cast<std::size_t>(n2) + 1 : static_cast<std::size_t>(n2) + 1;
        EXPECT_EQ(b.column_count(), (static_cast<std::size_t>(m) + 1) * b.poles.size() + per_centre * b.centres.size());
    }
}

TEST(Basis, SingularPointThrows)
{
    const Basis b{BasisSpec{}, {Complex(0.25, 0.25)}, {Complex(0.5, 0.5)}};
    EXPECT_THROW(basis_eval(b, 20.0, Complex(0.25, 0.25)), SingularPointError);
    EXPECT_THROW(basis_eval(b, 20.0, Complex(0.5, 0.5 + 1e-15)), SingularPointError);
    EXPECT_NO_THROW(basis_eval(b, 20.0, Complex(0.5, 0.5 + 1e-10)));
}

TEST(BasisSpec, Validation)
{
    EXPECT_THROW((BasisSpec{0, 20, false}.validate()), std::invalid_argument);
    EXPECT_THROW((BasisSpec{1, -1, false}.validate()), std::invalid_argument);
    EXPECT_THROW((BasisSpec{1, 65, false}.validate()), std::invalid_argument);
    EXPECT_NO_THROW((BasisSpec{}.validate()));
}

TEST(SolveLs, ZeroRightHandSide)
{
    std::mt19937_64 rng(3);
    const auto a = gen::matrix(rng, 30, 10);
    const auto r = solve_ls(a, Eigen::VectorXcd::Zero(30));
    EXPECT_EQ(r.residual_norm, 0.0);
    for (const auto& c : r.coefficients)
        EXPECT_EQ(c, Complex(0.0));
}

TEST(SolveLs, ScaledFirstColumn)
{
    std::mt19937_64 rng(4);
    const auto a = gen::matrix(rng, 50, 12);
    const Eigen::VectorXcd b = 3.7 * a.col(0);
    const auto r = solve_ls(a, b);
    EXPECT_NEAR(std::abs(r.coefficients(0) - 3.7), 0.0, 1e-12);
    for (Eigen::Index j = 1; j < 12; ++j)
        EXPECT_LT(std::abs(r.coefficients(j)), 1e-12);
    EXPECT_LE(r.residual_norm, 1e-12 * b.norm());
    EXPECT_EQ(r.rank, 12);
}

TEST(SolveLs, MatchesNormalEquationsOracle)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        auto a = gen::matrix(rng, 60, 40);
        // Unequal column norms exercise the scaling path.
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            a.col(j) *= std::pow(10.0, (j % 7) - 3);
        const auto b = gen::vector(rng, 60);
        const auto r = solve_ls(a, b);
        const auto ref = oracle::normal_equations(to_dense(a), std::vector<Complex>(b.data(), b.data() + b.size()));
        EXPECT_LE(std::abs(r.residual_norm - ref.residual), 1e-8 * ref.residual);
        double diff = 0.0, norm = 0.0;
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            diff += std::norm(r.coefficients(j) - ref.x[static_cast<std::size_t>(j)]);
            norm += std::norm(ref.x[static_cast<std::size_t>(j)]);
        }
        EXPECT_LE(std::sqrt(diff), 1e-8 * std::sqrt(norm));
    }
}

TEST(SolveLs, RankDeficientGivesMinimumNorm)
{
    std::mt19937_64 rng(6);
    Eigen::MatrixXcd a = gen::matrix(rng, 20, 3);
    a.col(2) = a.col(1);
    const Eigen::VectorXcd b = a.col(1);
    const auto r = solve_ls(a, b);
    EXPECT_EQ(r.rank, 2);
    EXPECT_LT(std::abs(r.coefficients(0)), 1e-12);
    EXPECT_LT(std::abs(r.coefficients(1) - 0.5), 1e-12);
    EXPECT_LT(std::abs(r.coefficients(2) - 0.5), 1e-12);
}

TEST(SolveLs, UnderdeterminedSystemIsInterpolated)
{
    std::mt19937_64 rng(8);
    const auto a = gen::matrix(rng, 5, 9);
    const auto b = gen::vector(rng, 5);
    const auto r = solve_ls(a, b);
    EXPECT_LT(r.residual_norm, 1e-12 * b.norm());
    // Minimum norm in the column-scaled variables: S x lies in the row space of A S^{-1}.
    const Eigen::VectorXd scale = a.colwise().norm().transpose();
    const Eigen::MatrixXcd scaled_adj = (a * scale.cwiseInverse().asDiagonal()).adjoint();
    const Eigen::VectorXcd sx = scale.cast<Complex>().cwiseProduct(r.coefficients);
    const Eigen::VectorXcd y = scaled_adj.colPivHouseholderQr().solve(sx);
    EXPECT_LT((scaled_adj * y - sx).norm(), 1e-10 * sx.norm());
}

TEST(SolveLs, RejectsNonFiniteAndMismatchedInput)
{
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(3, 3);
    Eigen::VectorXcd b = Eigen::VectorXcd::Ones(3);
    a(1, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(solve_ls(a, b), NumericalError);
    a(1, 1) = 1.0;
    b(2) = std::numeric_limits<double>::infinity();
    EXPECT_THROW(solve_ls(a, b), NumericalError);
    EXPECT_THROW(solve_ls(a, Eigen::VectorXcd::Ones(4)), std::invalid_argument);
}

TEST(SolveLs, LinearAndScalingEquivariant)
{
    std::mt19937_64 rng(9);
    const auto a = gen::matrix(rng, 80, 50);
    const auto b1 = gen::vector(rng, 80);
    const auto b2 = gen::vector(rng, 80);
    const auto x1 = solve_ls(a, b1).coefficients;
    const auto x2 = solve_ls(a, b2).coefficients;
    const auto x12 = solve_ls(a, b1 + b2).coefficients;
    EXPECT_LE((x12 - x1 - x2).norm(), 1e-12 * (x1.norm() + x2.norm()));
    const Complex alpha(-2.5, 0.75);
    const auto xa = solve_ls(a, alpha * b1).coefficients;
    EXPECT_LE((xa - alpha * x1).norm(), 1e-13 * std::abs(alpha) * x1.norm());
}

TEST(IncidentField, PlaneWave)
{
    const Wave along_x = Wave::plane(0.0);
    for (double x : {-3.0, 0.0, 0.4, 2.0}) {
        const Complex u = along_x(7.0, Complex(x, 0));
        EXPECT_LT(std::abs(u - std::polar(1.0, -7.0 * x)), 1e-15);
    }
    const Wave benchmark = Wave::plane(5 * kPi / 6);
    EXPECT_EQ(benchmark(20.0, Complex(0, 0)), Complex(1.0, 0.0));
    std::mt19937_64 rng(2);
    for (int i = 0; i < 100; ++i)
        EXPECT_NEAR(std::abs(benchmark(20.0, 3.0 * gen::complex_normal(rng))), 1.0, 1e-15);
}

TEST(IncidentField, PointSource)
{
    const Wave src = Wave::point_source(Complex(-1, 2));
    EXPECT_LT(std::abs(src(20.0, Complex(-1, 3)) - oracle_hankel(0, 20.0)), 1e-13);
    const Scene scene(shapes::unit_square());
    EXPECT_NO_THROW(incident_field(src, 20.0, scene, {Complex(3, 3)}));
    EXPECT_THROW(incident_field(Wave::point_source(Complex(0.5, 0.5)), 20.0, scene, {Complex(3, 3)}), GeometryError);
    EXPECT_THROW(incident_field(Wave::point_source(Complex(0.5, 0.0)), 20.0, scene, {Complex(3, 3)}), GeometryError);
    // A multipole may sit inside: it is an exact exterior solution.
    EXPECT_NO_THROW(incident_field(Wave::multipole(Complex(0.5, 0.5)), 20.0, scene, {Complex(3, 3)}));
}

TEST(IncidentField, SuperpositionAndAmplitudes)
{
    const Wave a = Wave::plane(0.3), b = Wave::point_source(Complex(-2, 1));
    const Wave sum = a + b.scaled(Complex(0, 2));
    const Complex z(1.5, -0.5);
    EXPECT_LT(std::abs(sum(4.0, z) - (a(4.0, z) + Complex(0, 2) * b(4.0, z))), 1e-15);
    EXPECT_EQ(Wave()(4.0, z), Complex(0.0));
}

TEST(Assemble, RowsFollowSamplesAndData)
{
    Problem p = small_problem(Wave::plane(0.4));
    const auto disc = discretize(p);
    const auto basis = make_basis(p, disc.poles);
    const auto sys = assemble(p, basis, disc.samples);
    ASSERT_EQ(static_cast<std::size_t>(sys.matrix.rows()), disc.samples.size());
    ASSERT_EQ(static_cast<std::size_t>(sys.matrix.cols()), basis.column_count());
    for (std::size_t i : {std::size_t{0}, std::size_t{17}, disc.samples.size() - 1}) {
        const Complex z = disc.samples.samples[i].location;
        const auto row = basis_eval(basis, p.wavenumber, z);
        for (std::size_t c = 0; c < row.size(); ++c)
            EXPECT_EQ(sys.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)), row[c]);
        EXPECT_EQ(sys.rhs(static_cast<Eigen::Index>(i)), p.incident(p.wavenumber, z));
    }
}

TEST(Assemble, DefaultColumnCountOnSquare)
{
    Problem p{Scene(shapes::unit_square()), 20.0, Wave()};
    const auto disc = discretize(p);
    EXPECT_EQ(disc.poles.dropped, 0u);
    EXPECT_EQ(make_basis(p, disc.poles).column_count(), 661u);
    EXPECT_EQ(disc.samples.size(), 1596u);
}

TEST(Assemble, ZeroDataGivesZeroRhs)
{
    const Problem p = small_problem(Wave());
    const auto disc = discretize(p);
    const auto sys = assemble(p, disc.poles, disc.samples);
    EXPECT_EQ(sys.rhs.norm(), 0.0);
}

TEST(Problem, BoundaryModes)
{
    const Wave w = Wave::plane(1.0);
    const Complex z(0.3, 0.0);
    EXPECT_EQ(small_problem(w).boundary_value(z), w(20.0, z));
    EXPECT_EQ(small_problem(w, BoundaryMode::Scattering).boundary_value(z), -w(20.0, z));
    Problem custom = small_problem(w);
    custom.custom_data = [](Complex q) { return q * q; };
    EXPECT_EQ(custom.boundary_value(z), z * z);
}

TEST(Problem, Validation)
{
    Problem p = small_problem(Wave::plane(0.0));
    p.wavenumber = 0.0;
    EXPECT_THROW(solve(p), std::invalid_argument);
    p.wavenumber = 20.0;
    p.incident = Wave::point_source(Complex(0.5, 0.5));
    EXPECT_THROW(solve(p), GeometryError);
}

TEST(Solve, ManufacturedSolution)
{
    const Scene scene(shapes::unit_square());
    const Complex zc = scene.region(0).centroid();
    Problem p = small_problem(Wave::multipole(zc));
    const Solution sol = solve(p);
    EXPECT_LT(std::abs(evaluate(sol, Complex(2, 2)) - oracle_hankel(0, 20.0 * std::abs(Complex(2, 2) - zc))), 1e-8);
    std::mt19937_64 rng(10);
    for (const Complex& z : gen::exterior_points(rng, scene, 100, -2.0, 3.0, 0.02)) {
        const Complex exact = oracle_hankel(0, 20.0 * std::abs(z - zc));
        EXPECT_LT(std::abs(evaluate(sol, z) - exact), 1e-8) << z;
    }
}

TEST(Solve, ZeroDataEvaluatesToZero)
{
    const Solution sol = solve(small_problem(Wave()));
    for (const auto& c : sol.coefficients)
        EXPECT_EQ(c, Complex(0.0));
    std::mt19937_64 rng(12);
    for (const Complex& z : gen::exterior_points(rng, Scene(shapes::unit_square()), 50, -2, 3, 0.0))
        EXPECT_LE(std::abs(evaluate(sol, z)), 1e-13);
}

TEST(Solve, DiagnosticsAndStoredLocations)
{
    const Problem p = small_problem(Wave::plane(5 * kPi / 6));
    const Solution sol = solve(p);
    EXPECT_EQ(sol.coefficients.size(), sol.basis.column_count());
    EXPECT_EQ(sol.diagnostics.cols, sol.basis.column_count());
    EXPECT_EQ(sol.diagnostics.rows, discretize(p).samples.size());
    EXPECT_EQ(sol.pole_corner_ids.size(), sol.basis.poles.size());
    EXPECT_DOUBLE_EQ(sol.diagnostics.pole_rate, recommended_rate(20));
    EXPECT_GT(sol.diagnostics.condition, 1.0);
    for (std::size_t i = 0; i < sol.basis.poles.size(); ++i)
        EXPECT_TRUE(contains(p.scene.region(sol.pole_corner_ids[i].region), sol.basis.poles[i]));
    for (const Complex& c : sol.basis.centres)
        EXPECT_TRUE(p.scene.inside_any(c));
}

TEST(Solve, ReproducesDataAtSamplesWithinResidual)
{
    const Problem p = small_problem(Wave::plane(5 * kPi / 6));
    const Solution sol = solve(p);
    double sum = 0.0;
    for (const auto& s : discretize(p).samples.samples)
        sum += std::norm(evaluate(sol, s.location) - p.boundary_value(s.location));
    EXPECT_NEAR(std::sqrt(sum), sol.diagnostics.residual, 1e-10 + 1e-6 * sol.diagnostics.residual);
}

TEST(Evaluate, SingleCoefficient)
{
    Solution sol;
    sol.wavenumber = 20.0;
    sol.basis = Basis{BasisSpec{1, 0, false}, {Complex(0.3, 0.1)}, {}};
    sol.coefficients = {1.0, 0.0};
    for (double r : {0.05, 0.9, 3.0}) {
        const Complex z = Complex(0.3, 0.1) + std::polar(r, 1.1);
        EXPECT_LT(std::abs(evaluate(sol, z) - oracle_hankel(0, 20.0 * r)), 1e-12 * std::abs(oracle_hankel(0, 20.0 * r)));
    }
    EXPECT_TRUE(std::isnan(evaluate(sol, Complex(0.3, 0.1)).real()));
}

TEST(Evaluate, MaskedVariantFlagsInteriorPoints)
{
    const Problem p = small_problem(Wave::plane(0.2));
    const Solution sol = solve(p);
    const std::vector<Complex> pts = {Complex(0.5, 0.5), Complex(2, 0), Complex(0.5, 0.0), Complex(0.9, 0.1)};
    const auto vals = evaluate(sol, p.scene, pts);
    EXPECT_FALSE(vals[0].has_value());
    EXPECT_TRUE(vals[1].has_value());
    EXPECT_TRUE(vals[2].has_value()); // boundary counts as exterior
    EXPECT_FALSE(vals[3].has_value());
    EXPECT_EQ(*vals[1], evaluate(sol, Complex(2, 0)));
}

TEST(Evaluate, SatisfiesHelmholtzByFiniteDifferences)
{
    // Benchmark-scale discretisation: its coefficients are small enough for the h = 1e-4 stencil.
    Problem p = small_problem(Wave::plane(5 * kPi / 6));
    p.placement.poles_per_corner = 40;
    p.placement.samples.per_side = 200;
    const Solution sol = solve(p);
    const double k = p.wavenumber, h = 1e-4;
    std::mt19937_64 rng(13);
    for (const Complex& z : gen::exterior_points(rng, p.scene, 40, -1.5, 2.5, 0.1)) {
        const Complex u = evaluate(sol, z);
        const Complex lap = (evaluate(sol, z + h) + evaluate(sol, z - h) + evaluate(sol, z + Complex(0, h)) +
                             evaluate(sol, z - Complex(0, h)) - 4.0 * u) /
                            (h * h);
        EXPECT_LE(std::abs(lap + k * k * u), 1e-2 * k * k * std::max(std::abs(u), 1.0)) << z;
    }
}

TEST(Solve, PipelineIsLinearInBoundaryData)
{
    const Wave w1 = Wave::point_source(Complex(-1, 2));
    const Wave w2 = Wave::point_source(Complex(1, 1.5));
    const Solution s1 = solve(small_problem(w1));
    const Solution s2 = solve(small_problem(w2));
    const Solution s12 = solve(small_problem(w1 + w2));
    double diff = 0.0, n1 = 0.0, n2 = 0.0;
    for (std::size_t c = 0; c < s1.coefficients.size(); ++c) {
        diff += std::norm(s12.coefficients[c] - s1.coefficients[c] - s2.coefficients[c]);
        n1 += std::norm(s1.coefficients[c]);
        n2 += std::norm(s2.coefficients[c]);
    }
    EXPECT_LE(std::sqrt(diff), 1e-10 * (std::sqrt(n1) + std::sqrt(n2)));

    const Complex alpha(0.5, -3.0);
    const Solution sa = solve(small_problem(w1.scaled(alpha)));
    double da = 0.0;
    for (std::size_t c = 0; c < s1.coefficients.size(); ++c)
        da += std::norm(sa.coefficients[c] - alpha * s1.coefficients[c]);
    EXPECT_LE(std::sqrt(da), 1e-10 * std::abs(alpha) * std::sqrt(n1));
}

TEST(Solve, ScatteringModeNegatesDirectSolution)
{
    const Wave w = Wave::plane(0.7);
    const Solution direct = solve(small_problem(w));
    const Solution scatter = solve(small_problem(w, BoundaryMode::Scattering));
    for (std::size_t c = 0; c < direct.coefficients.size(); ++c)
        EXPECT_EQ(scatter.coefficients[c], -direct.coefficients[c]);
}

TEST(Solve, Deterministic)
{
    const Problem p = small_problem(Wave::plane(5 * kPi / 6));
    const Solution a = solve(p), b = solve(p);
    EXPECT_EQ(a.coefficients, b.coefficients);
    EXPECT_EQ(a.diagnostics.residual, b.diagnostics.residual);
}

TEST(Solve, MultiRegionScene)
{
    const Scene scene({shapes::unit_square(), shapes::translated(shapes::unit_square(), Complex(2.5, 0))});
    Problem p{scene, 10.0, Wave::multipole(scene.interior_points()[0]) + Wave::multipole(scene.interior_points()[1])};
    p.placement.poles_per_corner = 12;
    p.placement.samples.per_side = 60;
    const Solution sol = solve(p);
    EXPECT_EQ(sol.basis.centres.size(), 2u);
    EXPECT_EQ(sol.basis.column_count(), 2u * 8 * 12 + 2 * 21);
    const Complex z(1.75, 1.5);
    EXPECT_LT(std::abs(evaluate(sol, z) - p.incident(10.0, z)), 1e-8);
}
