// Problem configuration files: strict JSON, unknown keys rejected by name.
//
// {
//   "scene": {"regions": [{"type": "unit_square", "shift": [0, 0]}, ...],
//             "interior_points": [[x, y], ...]},
//   "wavenumber": 20,
//   "boundary": {"mode": "scattering",
//                "kind": {"type": "plane_wave", "angle_over_pi": 0.8333}},
//   "params": {"poles_per_corner": 80, "pole_rate": "auto", ...}
// }
//
// Region types: unit_square, lshape, wall (height, width), polygon (vertices).
// Wave kinds: plane_wave (angle | angle_over_pi), point_source (x, y),
// multipole (x, y, order), zero, sum (terms); any non-sum kind takes an
// optional amplitude, a number or [re, im].

#pragma once

#include "lightning/solver.hpp"

#include <json.hpp>

#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>
#include <string>

namespace lightning {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProblemConfig {
    nlohmann::json raw;
    Problem problem;
};

namespace config_detail {

using nlohmann::json;

inline std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

inline std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

[[noreturn]] inline void fail(const std::string& path, const std::string& msg)
{
    throw ConfigError(path.empty() ? msg : "'" + path + "': " + msg);
}

inline const json& object(const json& j, const std::string& path, std::initializer_list<const char*> allowed)
{
    if (!j.is_object())
        fail(path, "expected an object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            ok = ok || key == a;
        if (!ok)
            fail(join(path, key), "unknown key");
    }
    return j;
}

inline const json& required(const json& obj, const std::string& path, const char* key)
{
    if (!obj.contains(key))
        fail(join(path, key), "missing required key");
    return obj[key];
}

inline double number(const json& j, const std::string& path)
{
    if (!j.is_number())
        fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v))
        fail(path, "expected a finite number");
    return v;
}

inline double positive(const json& j, const std::string& path)
{
    const double v = number(j, path);
    if (!(v > 0.0))
        fail(path, "must be positive");
    return v;
}

inline int integer(const json& j, const std::string& path, int lo, int hi)
{
    if (!j.is_number_integer())
        fail(path, "expected an integer");
    const auto v = j.get<long long>();
    if (v < lo || v > hi)
        fail(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(v);
}

inline bool boolean(const json& j, const std::string& path)
{
    if (!j.is_boolean())
        fail(path, "expected true or false");
    return j.get<bool>();
}

inline std::string string(const json& j, const std::string& path)
{
    if (!j.is_string())
        fail(path, "expected a string");
    return j.get<std::string>();
}

inline Complex point(const json& j, const std::string& path)
{
    if (!j.is_array() || j.size() != 2)
        fail(path, "expected a point [x, y]");
    return {number(j[0], index(path, 0)), number(j[1], index(path, 1))};
}

inline std::vector<Complex> points(const json& j, const std::string& path)
{
    if (!j.is_array())
        fail(path, "expected an array of points");
    std::vector<Complex> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(point(j[i], index(path, i)));
    return out;
}

inline Region region(const json& j, const std::string& path)
{
    if (!j.is_object())
        fail(path, "expected an object");
    if (!j.contains("type"))
        object(j, path, {"type", "shift", "height", "width", "vertices"});
    const std::string type = string(required(j, path, "type"), join(path, "type"));
    Region r = shapes::unit_square();
    try {
        if (type == "unit_square") {
            object(j, path, {"type", "shift"});
        } else if (type == "lshape") {
            object(j, path, {"type", "shift"});
            r = shapes::lshape();
        } else if (type == "wall") {
            object(j, path, {"type", "shift", "height", "width"});
            const double h = j.contains("height") ? positive(j["height"], join(path, "height")) : 3.0;
            const double w = j.contains("width") ? positive(j["width"], join(path, "width")) : 0.1;
            r = shapes::wall(h, w);
        } else if (type == "polygon") {
            object(j, path, {"type", "shift", "vertices"});
            r = Region(points(required(j, path, "vertices"), join(path, "vertices")));
        } else {
            fail(join(path, "type"), "unknown region type '" + type + "'");
        }
    } catch (const GeometryError& e) {
        fail(path, e.what());
    }
    if (j.contains("shift"))
        r = shapes::translated(r, point(j["shift"], join(path, "shift")));
    return r;
}

inline Scene scene(const json& j, const std::string& path)
{
    object(j, path, {"regions", "interior_points"});
    const json& rs = required(j, path, "regions");
    if (!rs.is_array() || rs.empty())
        fail(join(path, "regions"), "expected a non-empty array");
    std::vector<Region> regions;
    for (std::size_t i = 0; i < rs.size(); ++i)
        regions.push_back(region(rs[i], index(join(path, "regions"), i)));
    std::vector<Complex> interior;
    if (j.contains("interior_points"))
        interior = points(j["interior_points"], join(path, "interior_points"));
    try {
        return Scene(std::move(regions), std::move(interior));
    } catch (const GeometryError& e) {
        fail(path, e.what());
    }
}

inline Complex amplitude(const json& j, const std::string& path)
{
    if (!j.contains("amplitude"))
        return 1.0;
    const json& a = j["amplitude"];
    return a.is_array() ? point(a, join(path, "amplitude")) : Complex(number(a, join(path, "amplitude")));
}

inline Wave wave(const json& j, const std::string& path)
{
    if (!j.is_object())
        fail(path, "expected an object");
    if (!j.contains("type"))
        object(j, path, {"type", "terms", "amplitude", "angle", "angle_over_pi", "x", "y", "order"});
    const std::string type = string(required(j, path, "type"), join(path, "type"));
    if (type == "sum") {
        object(j, path, {"type", "terms"});
        const json& ts = required(j, path, "terms");
        if (!ts.is_array() || ts.empty())
            fail(join(path, "terms"), "expected a non-empty array");
        Wave w;
        for (std::size_t i = 0; i < ts.size(); ++i)
            w = w + wave(ts[i], index(join(path, "terms"), i));
        return w;
    }
    if (type == "zero") {
        object(j, path, {"type"});
        return Wave();
    }
    Wave w;
    if (type == "plane_wave") {
        object(j, path, {"type", "amplitude", "angle", "angle_over_pi"});
        if (j.contains("angle") == j.contains("angle_over_pi"))
            fail(path, "give exactly one of 'angle' and 'angle_over_pi'");
        const double angle = j.contains("angle") ? number(j["angle"], join(path, "angle"))
                                                 : std::numbers::pi * number(j["angle_over_pi"], join(path, "angle_over_pi"));
        w = Wave::plane(angle);
    } else if (type == "point_source") {
        object(j, path, {"type", "amplitude", "x", "y"});
        w = Wave::point_source({number(required(j, path, "x"), join(path, "x")),
                                number(required(j, path, "y"), join(path, "y"))});
    } else if (type == "multipole") {
        object(j, path, {"type", "amplitude", "x", "y", "order"});
        const int order = j.contains("order") ? integer(j["order"], join(path, "order"), 0, 64) : 0;
        w = Wave::multipole({number(required(j, path, "x"), join(path, "x")),
                             number(required(j, path, "y"), join(path, "y"))},
                            order);
    } else {
        fail(join(path, "type"), "unknown wave type '" + type + "'");
    }
    return w.scaled(amplitude(j, path));
}

inline void boundary(const json& j, const std::string& path, Problem& p)
{
    object(j, path, {"mode", "kind"});
    p.mode = BoundaryMode::Scattering;
    if (j.contains("mode")) {
        const std::string mode = string(j["mode"], join(path, "mode"));
        if (mode == "direct")
            p.mode = BoundaryMode::Direct;
        else if (mode != "scattering")
            fail(join(path, "mode"), "expected 'direct' or 'scattering'");
    }
    p.incident = wave(required(j, path, "kind"), join(path, "kind"));
    try {
        p.incident.validate(p.scene);
    } catch (const std::invalid_argument& e) {
        fail(join(path, "kind"), e.what());
    }
}

inline void overrides(const json& j, const std::string& path, const Scene& scene, Placement& pl)
{
    if (!j.is_array())
        fail(path, "expected an array");
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string at = index(path, i);
        object(j[i], at, {"region", "corner", "poles_per_corner", "pole_rate"});
        const int r = integer(required(j[i], at, "region"), join(at, "region"), 0,
                              static_cast<int>(scene.regions().size()) - 1);
        const int c = integer(required(j[i], at, "corner"), join(at, "corner"), 0,
                              static_cast<int>(scene.region(r).size()) - 1);
        CornerOverride o;
        if (j[i].contains("poles_per_corner"))
            o.poles_per_corner = integer(j[i]["poles_per_corner"], join(at, "poles_per_corner"), 0, 100000);
        if (j[i].contains("pole_rate"))
            o.rate = positive(j[i]["pole_rate"], join(at, "pole_rate"));
        pl.overrides[{static_cast<std::size_t>(r), static_cast<std::size_t>(c)}] = o;
    }
}

inline void params(const json& j, const std::string& path, Problem& p)
{
    object(j, path,
           {"poles_per_corner", "pole_rate", "samples_per_corner_side", "sample_exponent", "sample_rate_const",
            "sample_distribution", "runge_degree", "newman_order", "length_fraction", "min_pole_distance",
            "negative_runge", "corner_overrides"});
    auto& pl = p.placement;
    const auto key = [&](const char* k) { return join(path, k); };
    if (j.contains("poles_per_corner"))
        pl.poles_per_corner = integer(j["poles_per_corner"], key("poles_per_corner"), 1, 100000);
    if (j.contains("pole_rate")) {
        const json& r = j["pole_rate"];
        if (r.is_string()) {
            if (r.get<std::string>() != "auto")
                fail(key("pole_rate"), "expected a number or \"auto\"");
        } else {
            pl.pole_rate = positive(r, key("pole_rate"));
        }
    }
    if (j.contains("samples_per_corner_side"))
        pl.samples.per_side = integer(j["samples_per_corner_side"], key("samples_per_corner_side"), 1, 1000000);
    if (j.contains("sample_exponent"))
        pl.samples.exponent = positive(j["sample_exponent"], key("sample_exponent"));
    if (j.contains("sample_rate_const"))
        pl.samples.rate_const = number(j["sample_rate_const"], key("sample_rate_const"));
    if (j.contains("sample_distribution")) {
        const std::string d = string(j["sample_distribution"], key("sample_distribution"));
        if (d == "power_exponential")
            pl.samples.distribution = SampleDistribution::PowerExponential;
        else if (d == "clustered_plus_uniform")
            pl.samples.distribution = SampleDistribution::ClusteredPlusUniform;
        else
            fail(key("sample_distribution"), "expected 'power_exponential' or 'clustered_plus_uniform'");
    }
    if (j.contains("runge_degree"))
        p.basis.runge_degree = integer(j["runge_degree"], key("runge_degree"), 0, 64);
    if (j.contains("newman_order"))
        p.basis.newman_order = integer(j["newman_order"], key("newman_order"), 1, 64);
    if (j.contains("negative_runge"))
        p.basis.negative_runge = boolean(j["negative_runge"], key("negative_runge"));
    if (j.contains("length_fraction")) {
        pl.length_fraction = positive(j["length_fraction"], key("length_fraction"));
        if (pl.length_fraction >= 1.0)
            fail(key("length_fraction"), "must lie in (0, 1)");
    }
    if (j.contains("min_pole_distance"))
        pl.min_pole_distance = positive(j["min_pole_distance"], key("min_pole_distance"));
    if (j.contains("corner_overrides"))
        overrides(j["corner_overrides"], key("corner_overrides"), p.scene, pl);
}

/// 1-based line and column of a byte offset.
inline std::string position(const std::string& text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

} // namespace config_detail

inline ProblemConfig parse_config(const nlohmann::json& j)
{
    using namespace config_detail;
    object(j, "", {"scene", "wavenumber", "boundary", "params"});
    ProblemConfig cfg{j, Problem{scene(required(j, "", "scene"), "scene")}};
    Problem& p = cfg.problem;
    p.wavenumber = positive(required(j, "", "wavenumber"), "wavenumber");
    boundary(required(j, "", "boundary"), "boundary", p);
    if (j.contains("params"))
        params(j["params"], "params", p);
    try {
        p.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

inline ProblemConfig parse_config_text(const std::string& text, const std::string& source = "config")
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(source + ": JSON syntax error at " + config_detail::position(text, e.byte));
    }
    try {
        return parse_config(j);
    } catch (const ConfigError& e) {
        throw ConfigError(source + ": " + e.what());
    }
}

inline ProblemConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

} // namespace lightning
