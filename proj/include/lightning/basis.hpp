// Expansion basis: Hankel multipoles of orders 0..m at every pole (the
// corner-resolving part) plus a Hankel series of orders 0..N2 about each
// interior point (the smooth part), optionally with negative orders.
//
// Column layout: for each pole j, orders 0..m; then for each interior point,
// orders 0..N2, followed by -1..-N2 when negative orders are enabled.

#pragma once

#include "lightning/specialfn.hpp"

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lightning {

class SingularPointError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline constexpr double kSingularDistance = 1e-14;

struct BasisSpec {
    int newman_order = 1;
    int runge_degree = 20;
    bool negative_runge = false;

    void validate() const
    {
        if (newman_order < 1 || newman_order > special::kMaxOrder)
            throw std::invalid_argument("newman_order must lie in [1, " + std::to_string(special::kMaxOrder) + "]");
        if (runge_degree < 0 || runge_degree > special::kMaxOrder)
            throw std::invalid_argument("runge_degree must lie in [0, " + std::to_string(special::kMaxOrder) + "]");
    }

    std::size_t columns_per_pole() const { return static_cast<std::size_t>(newman_order) + 1; }
    std::size_t columns_per_centre() const
    {
        return negative_runge ? 2 * static_cast<std::size_t>(runge_degree) + 1
                              : static_cast<std::size_t>(runge_degree) + 1;
    }

    bool operator==(const BasisSpec&) const = default;
};

struct Basis {
    BasisSpec spec;
    std::vector<Complex> poles;
    std::vector<Complex> centres;

    std::size_t column_count() const
    {
        return spec.columns_per_pole() * poles.size() + spec.columns_per_centre() * centres.size();
    }
};

namespace detail {

// H_n(k r) (d/|d|)^n for n = 0..order, written to out[0..order].
inline void multipole_terms(int order, double k, Complex d, Complex* out, bool negative_too = false)
{
    const double r = std::abs(d);
    if (!(r >= kSingularDistance))
        throw SingularPointError("basis evaluated within " + std::to_string(kSingularDistance) +
                                 " of a singularity");
    const auto seq = special::bessel_sequence(order, k * r);
    const Complex dir = d / r;
    Complex power = 1.0;
    for (int n = 0; n <= order; ++n) {
        out[n] = Complex(seq.j[n], seq.y[n]) * power;
        power *= dir;
    }
    if (negative_too) {
        const Complex inv = std::conj(dir);
        Complex p = inv;
        for (int n = 1; n <= order; ++n) {
            out[order + n] = Complex(seq.j[n], seq.y[n]) * p;
            p *= inv;
        }
    }
}

} // namespace detail

/// Evaluates every basis column at z into out (size column_count()).
inline void basis_eval_into(const Basis& basis, double k, Complex z, std::span<Complex> out)
{
    if (out.size() != basis.column_count())
        throw std::invalid_argument("basis_eval_into: output size mismatch");
    const int m = basis.spec.newman_order;
    std::size_t col = 0;
    for (const Complex& pole : basis.poles) {
        detail::multipole_terms(m, k, z - pole, out.data() + col);
        col += basis.spec.columns_per_pole();
    }
    for (const Complex& centre : basis.centres) {
        detail::multipole_terms(basis.spec.runge_degree, k, z - centre, out.data() + col, basis.spec.negative_runge);
        col += basis.spec.columns_per_centre();
    }
}

inline std::vector<Complex> basis_eval(const Basis& basis, double k, Complex z)
{
    std::vector<Complex> out(basis.column_count());
    basis_eval_into(basis, k, z, out);
    return out;
}

} // namespace lightning
