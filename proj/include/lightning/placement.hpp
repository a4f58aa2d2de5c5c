// Pole and collocation-point placement.
//
// Poles sit on each corner's interior bisector at distances
//     r_j = length_fraction * clip_length * exp(-rate * j / sqrt(p)),  j = 0..p-1,
// and candidates closer than min_distance to the corner are dropped.
// Samples on each half-edge sit at arclength fraction f(j/s), j = 1..s, from
// the corner, with f(t) = t^A exp(B (t - 1)).

#pragma once

#include "lightning/geometry.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace lightning {

/// Piecewise least-squares fit of the best pole rate against poles per corner
/// on the unit-square benchmark.
inline double recommended_rate(int poles_per_corner)
{
    if (poles_per_corner < 1)
        throw std::invalid_argument("recommended_rate: poles_per_corner must be >= 1");
    const double p = poles_per_corner;
    if (p < 40)
        return -0.000375 * p * p + 0.0333 * p + 1.578;
    if (p < 80)
        return 0.0006 * p + 2.268;
    if (p < 130)
        return -0.0108 * p + 3.133;
    return 0.00462 * p + 1.165;
}

struct Pole {
    Complex location;
    CornerId corner;
    double distance = 0.0; // to the owning corner
};

struct CornerOverride {
    std::optional<int> poles_per_corner;
    std::optional<double> rate;
};

struct PoleParams {
    int poles_per_corner = 80;
    double rate = 2.269;
    double length_fraction = 0.8;
    double min_distance = 1e-9;
    std::map<CornerId, CornerOverride> overrides;
};

struct PoleSet {
    std::vector<Pole> poles;
    PoleParams params;
    std::size_t dropped = 0;

    std::size_t size() const { return poles.size(); }
    std::vector<Complex> locations() const
    {
        std::vector<Complex> out;
        out.reserve(poles.size());
        for (const auto& p : poles)
            out.push_back(p.location);
        return out;
    }
};

inline PoleSet place_poles(const Scene& scene, const PoleParams& params)
{
    if (params.poles_per_corner < 1)
        throw std::invalid_argument("poles_per_corner must be >= 1");
    if (!(params.rate > 0.0))
        throw std::invalid_argument("pole rate must be > 0");
    if (!(params.length_fraction > 0.0 && params.length_fraction <= 1.0))
        throw std::invalid_argument("length_fraction must lie in (0, 1]");
    if (!(params.min_distance > 0.0))
        throw std::invalid_argument("min_distance must be > 0");

    PoleSet set;
    set.params = params;
    for (std::size_t r = 0; r < scene.regions().size(); ++r) {
        const Region& region = scene.region(r);
        for (std::size_t k = 0; k < region.size(); ++k) {
            const CornerId id{r, k};
            int count = params.poles_per_corner;
            double rate = params.rate;
            if (auto it = params.overrides.find(id); it != params.overrides.end()) {
                count = it->second.poles_per_corner.value_or(count);
                rate = it->second.rate.value_or(rate);
            }
            const Complex corner = region.vertex(k);
            const Complex dir = interior_bisector(region, k);
            const double scale = params.length_fraction * bisector_clip_length(region, k);
            const double root = std::sqrt(static_cast<double>(count));
            for (int j = 0; j < count; ++j) {
                const double dist = scale * std::exp(-rate * j / root);
                const Complex loc = corner + dist * dir;
                if (dist < params.min_distance || !contains(region, loc)) {
                    ++set.dropped;
                    continue;
                }
                set.poles.push_back({loc, id, dist});
            }
        }
    }
    return set;
}

inline PoleSet place_poles(const Scene& scene, int poles_per_corner, double rate, double length_fraction = 0.8,
                           double min_distance = 1e-9)
{
    PoleParams p;
    p.poles_per_corner = poles_per_corner;
    p.rate = rate;
    p.length_fraction = length_fraction;
    p.min_distance = min_distance;
    return place_poles(scene, p);
}

inline double sample_distribution(double t, double exponent, double rate_const = 4.0)
{
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("sample_distribution: t must lie in [0, 1]");
    if (!(exponent > 0.0) || !(rate_const >= 0.0))
        throw std::invalid_argument("sample_distribution: exponent must be > 0 and rate >= 0");
    if (t == 0.0)
        return 0.0;
    return std::pow(t, exponent) * std::exp(rate_const * (t - 1.0));
}

enum class SampleDistribution {
    PowerExponential,   // t^A e^{B(t-1)}
    ClusteredPlusUniform // e^{B sqrt(s) (t-1)} merged with s equispaced points
};

enum class HalfEdge { First, Second };

struct SampleParams {
    int per_side = 200;
    double exponent = 4.0;
    double rate_const = 4.0;
    SampleDistribution distribution = SampleDistribution::PowerExponential;
};

struct Sample {
    Complex location;
    std::size_t region = 0;
    std::size_t edge = 0;
    HalfEdge half = HalfEdge::First;
    double t = 0.0;   // absolute edge parameter
    CornerId corner;  // owning corner
};

struct SampleSet {
    std::vector<Sample> samples;
    SampleParams params;

    std::size_t size() const { return samples.size(); }
    std::vector<Complex> locations() const
    {
        std::vector<Complex> out;
        out.reserve(samples.size());
        for (const auto& s : samples)
            out.push_back(s.location);
        return out;
    }
};

/// Half-edge fractions (0 = corner, 1 = edge midpoint), strictly increasing.
inline std::vector<double> half_edge_fractions(const SampleParams& params)
{
    const int s = params.per_side;
    std::vector<double> out;
    if (params.distribution == SampleDistribution::PowerExponential) {
        for (int j = 1; j <= s; ++j)
            out.push_back(sample_distribution(static_cast<double>(j) / s, params.exponent, params.rate_const));
    } else {
        std::set<double> merged;
        const double root = std::sqrt(static_cast<double>(s));
        for (int j = 1; j <= s; ++j) {
            const double t = static_cast<double>(j) / s;
            merged.insert(std::exp(params.rate_const * root * (t - 1.0)));
            merged.insert(t);
        }
        out.assign(merged.begin(), merged.end());
    }
    return out;
}

inline SampleSet place_samples(const Scene& scene, const SampleParams& params)
{
    if (params.per_side < 2)
        throw std::invalid_argument("samples_per_corner_side must be >= 2");
    if (!(params.exponent > 0.0) || !(params.rate_const >= 0.0))
        throw std::invalid_argument("sample exponent must be > 0 and rate constant >= 0");

    const auto fractions = half_edge_fractions(params);
    SampleSet set;
    set.params = params;
    // Points that round onto a vertex or onto an earlier sample carry no information.
    std::set<std::pair<double, double>> seen;
    const auto push = [&](std::size_t r, std::size_t edge, HalfEdge half, double t, CornerId owner) {
        if (t <= 0.0 || t >= 1.0)
            return;
        const Region& region = scene.region(r);
        const Complex z = edge_point(region, edge, t);
        if (z == region.vertex(edge) || z == region.vertex(edge + 1))
            return;
        if (!seen.insert({z.real(), z.imag()}).second)
            return;
        set.samples.push_back({z, r, edge, half, t, owner});
    };
    for (std::size_t r = 0; r < scene.regions().size(); ++r) {
        const Region& region = scene.region(r);
        const std::size_t m = region.size();
        for (std::size_t k = 0; k < m; ++k) {
            const CornerId owner{r, k};
            for (double f : fractions)
                push(r, k, HalfEdge::First, 0.5 * f, owner);
            for (double f : fractions)
                push(r, (k + m - 1) % m, HalfEdge::Second, 1.0 - 0.5 * f, owner);
        }
    }
    return set;
}

inline SampleSet place_samples(const Scene& scene, int per_side, double exponent, double rate_const = 4.0)
{
    SampleParams p;
    p.per_side = per_side;
    p.exponent = exponent;
    p.rate_const = rate_const;
    return place_samples(scene, p);
}

} // namespace lightning
