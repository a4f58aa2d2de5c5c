// Integer-order Bessel functions J_n, Y_n and the Hankel function H_n^(1)
// for real positive arguments.
//
// Regimes:
//   x <= 2          power series for J_n; integer-limit series for Y_0, Y_1
//   2 < x <= 2000   Miller (downward, normalized) recurrence for J_n;
//                   Neumann series for Y_0, Y_1 when x <= 25,
//                   Hankel asymptotic expansion otherwise
//   x > 2000        asymptotic J_0, J_1, Y_0, Y_1 and upward recurrence
// Y_n for n >= 2 always comes from upward recurrence, which is stable.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace lightning {

using Complex = std::complex<double>;

namespace special {

inline constexpr int kMaxOrder = 64;

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace detail {

inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kSeriesCutoff = 2.0;
inline constexpr double kNeumannCutoff = 25.0;
inline constexpr double kMillerCutoff = 2000.0;

inline void check_arguments(int n, double x)
{
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError("Bessel argument must be finite and > 0, got " + std::to_string(x));
    if (n < 0 || n > kMaxOrder)
        throw DomainError("Bessel order must lie in [0, " + std::to_string(kMaxOrder) + "], got " +
                          std::to_string(n));
}

// sum_k (-x^2/4)^k (x/2)^n / (k! (n+k)!)
inline double j_series(int n, double x)
{
    const double half = 0.5 * x;
    double term = 1.0;
    for (int k = 1; k <= n; ++k)
        term *= half / k;
    double sum = term;
    const double q = -half * half;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * (n + k));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum))
            break;
    }
    return sum;
}

inline void y01_series(double x, double j0, double j1, double& y0, double& y1)
{
    constexpr double inv_pi = std::numbers::inv_pi;
    const double half = 0.5 * x;
    const double q = -half * half;
    const double log_half = std::log(half);

    // Y_0: regular part sum_{k>=1} (-1)^{k+1} H_k (x^2/4)^k / (k!)^2
    double term = 1.0, harmonic = 0.0, s0 = 0.0;
    for (int k = 1; k < 100; ++k) {
        term *= q / (static_cast<double>(k) * k);
        harmonic += 1.0 / k;
        const double contrib = -harmonic * term;
        s0 += contrib;
        if (std::abs(contrib) <= 1e-18 * std::abs(s0))
            break;
    }
    y0 = 2.0 * inv_pi * ((log_half + kEulerGamma) * j0 + s0);

    // Y_1: sum_{k>=0} (psi(k+1) + psi(k+2)) q^k / (k! (k+1)!),
    // psi(k+1) = H_k - gamma
    term = 1.0;
    double hk = 0.0;                     // H_k
    double s1 = (2.0 * hk + 1.0 - 2.0 * kEulerGamma) * term;
    for (int k = 1; k < 100; ++k) {
        term *= q / (static_cast<double>(k) * (k + 1));
        hk += 1.0 / k;
        const double contrib = (2.0 * hk + 1.0 / (k + 1) - 2.0 * kEulerGamma) * term;
        s1 += contrib;
        if (std::abs(contrib) <= 1e-18 * std::abs(s1))
            break;
    }
    y1 = -2.0 * inv_pi / x + 2.0 * inv_pi * log_half * j1 - inv_pi * half * s1;
}

struct MillerResult {
    std::vector<double> j;   // J_0..J_nmax
    double neumann_y0 = 0.0; // sum_{k>=1} (-1)^k J_{2k} / k
    double neumann_y1 = 0.0; // sum_{k>=1} (-1)^k (2k+1)/(k(k+1)) J_{2k+1}
};

inline MillerResult j_miller(int nmax, double x)
{
    const double top = std::max(static_cast<double>(nmax), x);
    int start = static_cast<int>(top + std::sqrt(160.0 * top)) + 16;
    start += start % 2;

    MillerResult out;
    out.j.assign(nmax + 1, 0.0);

    constexpr double kBig = 1e200;
    constexpr double kRescale = 1e-200;

    double above = 0.0; // f_{k+1}
    double cur = 1e-30; // f_k, k = start
    double norm = 0.0, sy0 = 0.0, sy1 = 0.0;
    const auto accumulate = [&](int k, double f) {
        if (k <= nmax)
            out.j[k] = f;
        if (k == 0)
            return;
        const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0; // (-1)^{floor(k/2)}
        if (k % 2 == 0) {
            norm += 2.0 * f;
            const int m = k / 2;
            sy0 += sign * f / m;
        } else if (k >= 3) {
            const int m = (k - 1) / 2;
            sy1 += sign * (2.0 * m + 1.0) / (static_cast<double>(m) * (m + 1)) * f;
        }
    };
    accumulate(start, cur);
    for (int k = start; k >= 1; --k) {
        const double below = (2.0 * k / x) * cur - above;
        above = cur;
        cur = below;
        accumulate(k - 1, cur);
        if (std::abs(cur) > kBig) {
            cur *= kRescale;
            above *= kRescale;
            norm *= kRescale;
            sy0 *= kRescale;
            sy1 *= kRescale;
            for (double& v : out.j)
                v *= kRescale;
        }
    }
    norm += cur;
    for (double& v : out.j)
        v /= norm;
    out.neumann_y0 = sy0 / norm;
    out.neumann_y1 = sy1 / norm;
    return out;
}

// Hankel asymptotic expansion for J_n, Y_n, valid for x >> n^2.
inline void asymptotic_jy(int n, double x, double& j, double& y)
{
    const double mu = 4.0 * n * n;
    double p = 1.0, q = 0.0;
    double term = 1.0;
    double last = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * 8.0 * x);
        const double mag = std::abs(term);
        if (mag > last)
            break;
        last = mag;
        // a_k / x^k contributes to Q for odd k, P for even k with sign (-1)^{floor(k/2)}
        const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 1)
            q += sign * term;
        else
            p += sign * term;
        if (mag < 1e-18)
            break;
    }
    // chi = x - (n/2 + 1/4) pi, expanded to keep argument reduction exact in x
    const double phase = (0.5 * n + 0.25) * std::numbers::pi;
    const double cx = std::cos(x), sx = std::sin(x);
    const double cp = std::cos(phase), sp = std::sin(phase);
    const double cos_chi = cx * cp + sx * sp;
    const double sin_chi = sx * cp - cx * sp;
    const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
    j = amp * (p * cos_chi - q * sin_chi);
    y = amp * (p * sin_chi + q * cos_chi);
}

} // namespace detail

/// J_0..J_nmax and Y_0..Y_nmax at x in one pass.
struct BesselSequence {
    std::vector<double> j;
    std::vector<double> y;
};

inline BesselSequence bessel_sequence(int nmax, double x)
{
    detail::check_arguments(nmax, x);
    BesselSequence seq;
    seq.y.assign(nmax + 1, 0.0);
    const int need = std::max(nmax, 1);

    double y0 = 0.0, y1 = 0.0;
    if (x <= detail::kSeriesCutoff) {
        seq.j.resize(need + 1);
        for (int n = 0; n <= need; ++n)
            seq.j[n] = detail::j_series(n, x);
        detail::y01_series(x, seq.j[0], seq.j[1], y0, y1);
    } else if (x <= detail::kMillerCutoff) {
        auto miller = detail::j_miller(need, x);
        seq.j = std::move(miller.j);
        if (x <= detail::kNeumannCutoff) {
            constexpr double two_over_pi = 2.0 * std::numbers::inv_pi;
            const double lg = std::log(0.5 * x) + detail::kEulerGamma;
            y0 = two_over_pi * (lg * seq.j[0] - 2.0 * miller.neumann_y0);
            y1 = two_over_pi * ((lg - 1.0) * seq.j[1] - seq.j[0] / x - miller.neumann_y1);
        } else {
            double unused = 0.0;
            detail::asymptotic_jy(0, x, unused, y0);
            detail::asymptotic_jy(1, x, unused, y1);
        }
    } else {
        seq.j.resize(need + 1);
        detail::asymptotic_jy(0, x, seq.j[0], y0);
        detail::asymptotic_jy(1, x, seq.j[1], y1);
        for (int n = 1; n < need; ++n)
            seq.j[n + 1] = (2.0 * n / x) * seq.j[n] - seq.j[n - 1];
    }
    seq.j.resize(nmax + 1);

    seq.y[0] = y0;
    if (nmax >= 1)
        seq.y[1] = y1;
    for (int n = 1; n < nmax; ++n)
        seq.y[n + 1] = (2.0 * n / x) * seq.y[n] - seq.y[n - 1];
    return seq;
}

inline double bessel_j(int n, double x)
{
    detail::check_arguments(n, x);
    if (x <= detail::kSeriesCutoff)
        return detail::j_series(n, x);
    return bessel_sequence(n, x).j[n];
}

inline double bessel_y(int n, double x)
{
    return bessel_sequence(n, x).y[n];
}

/// H_n^(1)(x) = J_n(x) + i Y_n(x).
inline Complex hankel1(int n, double x)
{
    const auto seq = bessel_sequence(n, x);
    return {seq.j[n], seq.y[n]};
}

/// H_0^(1)(x) .. H_nmax^(1)(x) from a single recurrence pass.
inline std::vector<Complex> hankel1_seq(int nmax, double x)
{
    const auto seq = bessel_sequence(nmax, x);
    std::vector<Complex> out(nmax + 1);
    for (int n = 0; n <= nmax; ++n)
        out[n] = {seq.j[n], seq.y[n]};
    return out;
}

} // namespace special
} // namespace lightning
