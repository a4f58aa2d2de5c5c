// Polygonal obstacles in the complex plane.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lightning {

using Complex = std::complex<double>;

class GeometryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr double kBoundaryTolerance = 1e-12;

namespace geom {

inline double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

inline double distance_to_segment(Complex p, Complex a, Complex b)
{
    const Complex ab = b - a;
    const double len2 = std::norm(ab);
    double t = len2 > 0.0 ? ((p - a) * std::conj(ab)).real() / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

inline bool segments_intersect(Complex a, Complex b, Complex c, Complex d)
{
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    // touching or collinear overlap
    return distance_to_segment(c, a, b) <= kBoundaryTolerance ||
           distance_to_segment(d, a, b) <= kBoundaryTolerance ||
           distance_to_segment(a, c, d) <= kBoundaryTolerance ||
           distance_to_segment(b, c, d) <= kBoundaryTolerance;
}

// Parameter t > 0 where origin + t*dir meets segment [a, b], if any.
inline std::optional<double> ray_segment(Complex origin, Complex dir, Complex a, Complex b)
{
    const Complex e = b - a;
    const double denom = cross(dir, e);
    const Complex w = a - origin;
    const double scale = std::abs(e);
    if (std::abs(denom) <= 1e-14 * scale * std::abs(dir))
        return std::nullopt;
    const double t = cross(w, e) / denom;
    const double s = cross(w, dir) / denom;
    constexpr double slack = 1e-12;
    if (t <= slack || s < -slack || s > 1.0 + slack)
        return std::nullopt;
    return t;
}

} // namespace geom

/// A simple polygon with counterclockwise vertices. Edge k runs from
/// vertex k to vertex k+1 (mod m); corner k is vertex k.
class Region {
public:
    explicit Region(std::vector<Complex> vertices) : vertices_(std::move(vertices))
    {
        const auto m = vertices_.size();
        if (m < 3)
            throw GeometryError("region needs at least 3 vertices");
        for (const auto& v : vertices_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw GeometryError("region vertex is not finite");
        for (std::size_t k = 0; k < m; ++k)
            if (std::abs(vertices_[(k + 1) % m] - vertices_[k]) <= kBoundaryTolerance)
                throw GeometryError("consecutive vertices " + std::to_string(k) + " and " +
                                    std::to_string((k + 1) % m) + " coincide");
        const double area = signed_area();
        if (std::abs(area) <= kBoundaryTolerance)
            throw GeometryError("region has zero area");
        if (area < 0.0)
            std::reverse(vertices_.begin(), vertices_.end());
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                const bool adjacent = (j == i + 1) || (i == 0 && j == m - 1);
                if (adjacent)
                    continue;
                if (geom::segments_intersect(vertex(i), vertex(i + 1), vertex(j), vertex(j + 1)))
                    throw GeometryError("region is not simple: edges " + std::to_string(i) + " and " +
                                        std::to_string(j) + " intersect");
            }
        }
    }

    std::size_t size() const { return vertices_.size(); }
    const std::vector<Complex>& vertices() const { return vertices_; }
    Complex vertex(std::size_t k) const { return vertices_[k % vertices_.size()]; }

    double signed_area() const
    {
        double a = 0.0;
        for (std::size_t k = 0; k < vertices_.size(); ++k)
            a += geom::cross(vertex(k), vertex(k + 1));
        return 0.5 * a;
    }

    Complex centroid() const
    {
        Complex c = 0.0;
        double a = 0.0;
        for (std::size_t k = 0; k < size(); ++k) {
            const double w = geom::cross(vertex(k), vertex(k + 1));
            c += w * (vertex(k) + vertex(k + 1));
            a += w;
        }
        return c / (3.0 * a);
    }

    double edge_length(std::size_t edge) const { return std::abs(vertex(edge + 1) - vertex(edge)); }

    double perimeter() const
    {
        double p = 0.0;
        for (std::size_t k = 0; k < size(); ++k)
            p += edge_length(k);
        return p;
    }

    bool operator==(const Region&) const = default;

private:
    std::vector<Complex> vertices_;
};

inline Complex edge_point(const Region& region, std::size_t edge, double t)
{
    if (edge >= region.size())
        throw GeometryError("edge index " + std::to_string(edge) + " out of range");
    if (!(t >= 0.0 && t <= 1.0))
        throw GeometryError("edge parameter must lie in [0, 1]");
    const Complex a = region.vertex(edge);
    const Complex b = region.vertex(edge + 1);
    // Measured from the nearer endpoint so points close to either corner keep full precision.
    if (t <= 0.5)
        return a + t * (b - a);
    return b + (1.0 - t) * (a - b);
}

/// Unit vector bisecting the interior angle at a corner, pointing into the region.
inline Complex interior_bisector(const Region& region, std::size_t corner)
{
    if (corner >= region.size())
        throw GeometryError("corner index " + std::to_string(corner) + " out of range");
    const Complex c = region.vertex(corner);
    const Complex to_next = region.vertex(corner + 1) - c;
    const Complex to_prev = region.vertex(corner + region.size() - 1) - c;
    const Complex next_dir = to_next / std::abs(to_next);
    const Complex prev_dir = to_prev / std::abs(to_prev);
    // Interior is swept counterclockwise from the outgoing edge to the incoming one.
    double angle = std::arg(prev_dir / next_dir);
    if (angle <= 0.0)
        angle += 2.0 * std::numbers::pi;
    return next_dir * std::polar(1.0, 0.5 * angle);
}

/// Interior angle at a corner, in (0, 2*pi).
inline double interior_angle(const Region& region, std::size_t corner)
{
    const Complex c = region.vertex(corner);
    const Complex to_next = region.vertex(corner + 1) - c;
    const Complex to_prev = region.vertex(corner + region.size() - 1) - c;
    double angle = std::arg(to_prev / to_next);
    if (angle <= 0.0)
        angle += 2.0 * std::numbers::pi;
    return angle;
}

inline double distance_to_boundary(const Region& region, Complex p)
{
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < region.size(); ++k)
        d = std::min(d, geom::distance_to_segment(p, region.vertex(k), region.vertex(k + 1)));
    return d;
}

/// Strict containment; points within kBoundaryTolerance of the boundary are outside.
inline bool contains(const Region& region, Complex p)
{
    if (distance_to_boundary(region, p) <= kBoundaryTolerance)
        return false;
    bool inside = false;
    for (std::size_t k = 0; k < region.size(); ++k) {
        const Complex a = region.vertex(k);
        const Complex b = region.vertex(k + 1);
        if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
            const double x = a.real() + (p.imag() - a.imag()) / (b.imag() - a.imag()) * (b.real() - a.real());
            if (p.real() < x)
                inside = !inside;
        }
    }
    return inside;
}

/// Distance from a corner along its interior bisector to the first boundary hit.
inline double bisector_clip_length(const Region& region, std::size_t corner)
{
    const Complex c = region.vertex(corner);
    const Complex dir = interior_bisector(region, corner);
    const std::size_t m = region.size();
    const std::size_t before = (corner + m - 1) % m;
    std::optional<double> best;
    for (std::size_t k = 0; k < m; ++k) {
        if (k == corner || k == before)
            continue;
        if (auto t = geom::ray_segment(c, dir, region.vertex(k), region.vertex(k + 1)))
            if (!best || *t < *best)
                best = t;
    }
    if (!best)
        throw GeometryError("interior bisector at corner " + std::to_string(corner) +
                            " does not meet the boundary");
    return *best;
}

struct CornerId {
    std::size_t region = 0;
    std::size_t corner = 0;
    auto operator<=>(const CornerId&) const = default;
};

/// Disjoint regions plus the interior expansion centres used by the smooth part of the basis.
class Scene {
public:
    Scene(std::vector<Region> regions, std::vector<Complex> interior_points = {})
        : regions_(std::move(regions)), interior_points_(std::move(interior_points))
    {
        if (regions_.empty())
            throw GeometryError("scene needs at least one region");
        for (std::size_t i = 0; i < regions_.size(); ++i) {
            for (std::size_t j = i + 1; j < regions_.size(); ++j) {
                const auto& a = regions_[i];
                const auto& b = regions_[j];
                for (std::size_t p = 0; p < a.size(); ++p)
                    for (std::size_t q = 0; q < b.size(); ++q)
                        if (geom::segments_intersect(a.vertex(p), a.vertex(p + 1), b.vertex(q), b.vertex(q + 1)))
                            throw GeometryError("regions " + std::to_string(i) + " and " + std::to_string(j) +
                                                " touch or overlap");
                if (contains(a, b.vertex(0)) || contains(b, a.vertex(0)))
                    throw GeometryError("regions " + std::to_string(i) + " and " + std::to_string(j) +
                                        " are nested");
            }
        }
        if (interior_points_.empty()) {
            for (const auto& r : regions_)
                interior_points_.push_back(default_interior_point(r));
        }
        for (std::size_t i = 0; i < interior_points_.size(); ++i)
            if (!region_containing(interior_points_[i]))
                throw GeometryError("interior point " + std::to_string(i) + " is not strictly inside any region");
    }

    explicit Scene(Region region) : Scene(std::vector<Region>{std::move(region)}) {}

    const std::vector<Region>& regions() const { return regions_; }
    const Region& region(std::size_t i) const { return regions_.at(i); }
    const std::vector<Complex>& interior_points() const { return interior_points_; }

    std::size_t corner_count() const
    {
        std::size_t n = 0;
        for (const auto& r : regions_)
            n += r.size();
        return n;
    }

    std::optional<std::size_t> region_containing(Complex p) const
    {
        for (std::size_t i = 0; i < regions_.size(); ++i)
            if (contains(regions_[i], p))
                return i;
        return std::nullopt;
    }

    bool inside_any(Complex p) const { return region_containing(p).has_value(); }

    double bisector_clip_length(CornerId id) const
    {
        return lightning::bisector_clip_length(region(id.region), id.corner);
    }

    /// Centroid when it is interior, otherwise the midpoint of the first corner's clipped bisector.
    static Complex default_interior_point(const Region& r)
    {
        const Complex c = r.centroid();
        if (contains(r, c))
            return c;
        for (std::size_t k = 0; k < r.size(); ++k) {
            const Complex mid = r.vertex(k) + 0.5 * lightning::bisector_clip_length(r, k) * interior_bisector(r, k);
            if (contains(r, mid))
                return mid;
        }
        throw GeometryError("could not find an interior point for region");
    }

private:
    std::vector<Region> regions_;
    std::vector<Complex> interior_points_;
};

namespace shapes {

inline Region unit_square() { return Region({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

/// [-1,1]^2 with the quadrant (1/2,1]x(1/2,1] removed; reflex corner at (1/2,1/2) is corner 3.
inline Region lshape()
{
    return Region({{-1, -1}, {1, -1}, {1, 0.5}, {0.5, 0.5}, {0.5, 1}, {-1, 1}});
}

/// Thin rectangle of the given height and width, centred on the origin.
inline Region wall(double height = 3.0, double width = 0.1)
{
    if (!(height > 0.0) || !(width > 0.0))
        throw GeometryError("wall height and width must be positive");
    const double hx = 0.5 * width, hy = 0.5 * height;
    return Region({{-hx, -hy}, {hx, -hy}, {hx, hy}, {-hx, hy}});
}

inline Region translated(const Region& r, Complex shift)
{
    auto v = r.vertices();
    for (auto& z : v)
        z += shift;
    return Region(std::move(v));
}

} // namespace shapes

} // namespace lightning
