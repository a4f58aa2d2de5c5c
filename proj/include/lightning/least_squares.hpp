// Complex linear least squares with unit-norm column scaling and a
// minimum-norm SVD solve (LAPACK zgelsd) under a relative singular-value
// cutoff.

#pragma once

#include <Eigen/Dense>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace lightning {

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LeastSquaresResult {
    Eigen::VectorXcd coefficients;
    double residual_norm = 0.0;
    Eigen::Index rank = 0;
    double condition = 0.0; // largest / smallest singular value of the scaled matrix
};

inline constexpr double kRankThreshold = 1e-14;

inline LeastSquaresResult solve_ls(const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& rhs,
                                   double rcond = kRankThreshold)
{
    const Eigen::Index rows = matrix.rows();
    const Eigen::Index cols = matrix.cols();
    if (rhs.size() != rows)
        throw std::invalid_argument("solve_ls: rhs length " + std::to_string(rhs.size()) + " != rows " +
                                    std::to_string(rows));
    if (!matrix.allFinite() || !rhs.allFinite())
        throw NumericalError("solve_ls: matrix or right-hand side has non-finite entries");

    LeastSquaresResult result;
    result.coefficients = Eigen::VectorXcd::Zero(cols);
    if (cols == 0 || rows == 0) {
        result.residual_norm = rhs.norm();
        return result;
    }

    Eigen::VectorXd scale = matrix.colwise().norm().transpose();
    for (auto& s : scale)
        if (s == 0.0)
            s = 1.0;
    Eigen::MatrixXcd scaled = matrix * scale.cwiseInverse().asDiagonal();

    if (rhs.squaredNorm() == 0.0) {
        // Minimum-norm solution of the homogeneous problem.
        result.residual_norm = 0.0;
        return result;
    }

    const Eigen::Index ldb = std::max(rows, cols);
    Eigen::VectorXcd work = Eigen::VectorXcd::Zero(ldb);
    work.head(rows) = rhs;
    std::vector<double> singular(std::min(rows, cols));
    lapack_int rank = 0;
    const lapack_int info = LAPACKE_zgelsd(
        LAPACK_COL_MAJOR, static_cast<lapack_int>(rows), static_cast<lapack_int>(cols), 1,
        reinterpret_cast<lapack_complex_double*>(scaled.data()), static_cast<lapack_int>(rows),
        reinterpret_cast<lapack_complex_double*>(work.data()), static_cast<lapack_int>(ldb), singular.data(), rcond,
        &rank);
    if (info != 0)
        throw NumericalError("solve_ls: zgelsd failed with info = " + std::to_string(info));

    result.coefficients = work.head(cols).cwiseQuotient(scale.cast<std::complex<double>>());
    result.rank = rank;
    result.condition = singular.back() > 0.0 ? singular.front() / singular.back()
                                             : std::numeric_limits<double>::infinity();
    result.residual_norm = (matrix * result.coefficients - rhs).norm();
    return result;
}

} // namespace lightning
