// Incident fields: plane waves, point sources and Hankel multipoles, with
// complex amplitudes, combined by superposition.
//
// Plane wave at angle phi:   u(z) = exp(-i Re(k z e^{-i phi}))
// Point source at z_s:       u(z) = H_0(k |z - z_s|)
// Multipole of order n at c: u(z) = H_n(k |z - c|) ((z - c)/|z - c|)^n

#pragma once

#include "lightning/basis.hpp"
#include "lightning/geometry.hpp"

#include <variant>
#include <vector>

namespace lightning {

struct PlaneWave {
    double angle = 0.0;
};

struct PointSource {
    Complex location;
};

/// Unlike a point source, a multipole may sit inside an obstacle; it then
/// radiates into the exterior and serves as an exact solution.
struct Multipole {
    Complex centre;
    int order = 0;
};

struct WaveTerm {
    std::variant<PlaneWave, PointSource, Multipole> kind;
    Complex amplitude = 1.0;
};

class Wave {
public:
    Wave() = default;
    explicit Wave(std::vector<WaveTerm> terms) : terms_(std::move(terms)) {}

    static Wave plane(double angle) { return Wave({WaveTerm{PlaneWave{angle}}}); }
    static Wave point_source(Complex location) { return Wave({WaveTerm{PointSource{location}}}); }
    static Wave multipole(Complex centre, int order = 0) { return Wave({WaveTerm{Multipole{centre, order}}}); }

    const std::vector<WaveTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    Wave operator+(const Wave& other) const
    {
        Wave out = *this;
        out.terms_.insert(out.terms_.end(), other.terms_.begin(), other.terms_.end());
        return out;
    }

    Wave scaled(Complex factor) const
    {
        Wave out = *this;
        for (auto& t : out.terms_)
            t.amplitude *= factor;
        return out;
    }

    /// Throws GeometryError if a point source lies inside or on an obstacle.
    void validate(const Scene& scene) const
    {
        for (const auto& t : terms_) {
            if (const auto* ps = std::get_if<PointSource>(&t.kind)) {
                const bool on_boundary = [&] {
                    for (const auto& r : scene.regions())
                        if (distance_to_boundary(r, ps->location) <= kBoundaryTolerance)
                            return true;
                    return false;
                }();
                if (scene.inside_any(ps->location) || on_boundary)
                    throw GeometryError("point source must lie outside every region");
            }
            if (const auto* mp = std::get_if<Multipole>(&t.kind)) {
                if (mp->order < 0 || mp->order > special::kMaxOrder)
                    throw std::invalid_argument("multipole order out of range");
            }
        }
    }

    Complex operator()(double k, Complex z) const
    {
        Complex sum = 0.0;
        for (const auto& t : terms_)
            sum += t.amplitude * std::visit([&](const auto& w) { return term(w, k, z); }, t.kind);
        return sum;
    }

private:
    static Complex term(const PlaneWave& w, double k, Complex z)
    {
        const double phase = (k * z * std::polar(1.0, -w.angle)).real();
        return std::polar(1.0, -phase);
    }
    static Complex term(const PointSource& w, double k, Complex z)
    {
        Complex h;
        detail::multipole_terms(0, k, z - w.location, &h);
        return h;
    }
    static Complex term(const Multipole& w, double k, Complex z)
    {
        std::vector<Complex> h(static_cast<std::size_t>(w.order) + 1);
        detail::multipole_terms(w.order, k, z - w.centre, h.data());
        return h.back();
    }

    std::vector<WaveTerm> terms_;
};

inline std::vector<Complex> incident_field(const Wave& wave, double k, const std::vector<Complex>& points)
{
    std::vector<Complex> out;
    out.reserve(points.size());
    for (const Complex& z : points)
        out.push_back(wave(k, z));
    return out;
}

/// As above, first rejecting point sources inside the scene's obstacles.
inline std::vector<Complex> incident_field(const Wave& wave, double k, const Scene& scene,
                                           const std::vector<Complex>& points)
{
    wave.validate(scene);
    return incident_field(wave, k, points);
}

} // namespace lightning
