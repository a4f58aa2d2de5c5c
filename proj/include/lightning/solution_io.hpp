// Solution persistence as a single JSON document. Doubles are written in
// shortest round-trip form, so a reloaded solution evaluates bit-identically.

#pragma once

#include "lightning/format.hpp"
#include "lightning/solver.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <string>

namespace lightning {

namespace io {

using nlohmann::json;

inline json complex_array(const std::vector<Complex>& v)
{
    json a = json::array();
    for (const Complex& c : v)
        a.push_back({c.real(), c.imag()});
    return a;
}

inline std::vector<Complex> read_complex_array(const json& a, const std::string& field)
{
    if (!a.is_array())
        throw std::runtime_error("solution: '" + field + "' must be an array");
    std::vector<Complex> out;
    for (const auto& e : a) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw std::runtime_error("solution: '" + field + "' entries must be [re, im] pairs");
        out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
}

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline double number_or_nan(const json& obj, const char* key)
{
    if (!obj.contains(key) || obj[key].is_null())
        return std::numeric_limits<double>::quiet_NaN();
    return obj[key].get<double>();
}

} // namespace io

/// `problem`, when given, is embedded so that the file alone can be re-profiled or rendered.
inline nlohmann::json solution_to_json(const Solution& s, const std::optional<nlohmann::json>& problem = std::nullopt)
{
    using io::json;
    json ids = json::array();
    for (const auto& id : s.pole_corner_ids)
        ids.push_back({id.region, id.corner});
    json j = {
        {"wavenumber", s.wavenumber},
        {"basis", {{"m", s.basis.spec.newman_order}, {"n2", s.basis.spec.runge_degree},
                   {"negative_runge", s.basis.spec.negative_runge}}},
        {"poles", io::complex_array(s.basis.poles)},
        {"pole_corner_ids", ids},
        {"interior_points", io::complex_array(s.basis.centres)},
        {"coefficients", io::complex_array(s.coefficients)},
        {"diagnostics", {{"residual", io::finite_or_null(s.diagnostics.residual)},
                         {"rows", s.diagnostics.rows},
                         {"cols", s.diagnostics.cols},
                         {"dropped_poles", s.diagnostics.dropped_poles},
                         {"rank", s.diagnostics.rank},
                         {"condition", io::finite_or_null(s.diagnostics.condition)},
                         {"pole_rate", io::finite_or_null(s.diagnostics.pole_rate)}}},
    };
    if (problem)
        j["problem"] = *problem;
    return j;
}

inline Solution solution_from_json(const nlohmann::json& j)
{
    try {
        Solution s;
        s.wavenumber = j.at("wavenumber").get<double>();
        const auto& b = j.at("basis");
        s.basis.spec = BasisSpec{b.at("m").get<int>(), b.at("n2").get<int>(), b.at("negative_runge").get<bool>()};
        s.basis.spec.validate();
        s.basis.poles = io::read_complex_array(j.at("poles"), "poles");
        s.basis.centres = io::read_complex_array(j.at("interior_points"), "interior_points");
        s.coefficients = io::read_complex_array(j.at("coefficients"), "coefficients");
        for (const auto& id : j.at("pole_corner_ids"))
            s.pole_corner_ids.push_back({id.at(0).get<std::size_t>(), id.at(1).get<std::size_t>()});
        const auto& d = j.at("diagnostics");
        s.diagnostics.residual = io::number_or_nan(d, "residual");
        s.diagnostics.rows = d.at("rows").get<std::size_t>();
        s.diagnostics.cols = d.at("cols").get<std::size_t>();
        s.diagnostics.dropped_poles = d.at("dropped_poles").get<std::size_t>();
        s.diagnostics.rank = d.value("rank", std::size_t{0});
        s.diagnostics.condition = io::number_or_nan(d, "condition");
        s.diagnostics.pole_rate = io::number_or_nan(d, "pole_rate");
        if (!(s.wavenumber > 0.0))
            throw std::runtime_error("solution: wavenumber must be positive");
        if (s.coefficients.size() != s.basis.column_count())
            throw std::runtime_error("solution: " + std::to_string(s.coefficients.size()) +
                                     " coefficients for " + std::to_string(s.basis.column_count()) + " columns");
        if (s.pole_corner_ids.size() != s.basis.poles.size())
            throw std::runtime_error("solution: pole_corner_ids and poles differ in length");
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("solution: ") + e.what());
    }
}

inline void save_solution(const Solution& s, const std::string& path,
                          const std::optional<nlohmann::json>& problem = std::nullopt)
{
    auto out = open_output(path);
    out << solution_to_json(s, problem).dump(1) << '\n';
    finish_output(out, path);
}

struct LoadedSolution {
    Solution solution;
    std::optional<nlohmann::json> problem;
};

inline LoadedSolution load_solution(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    LoadedSolution out{solution_from_json(j), std::nullopt};
    if (j.contains("problem"))
        out.problem = j["problem"];
    return out;
}

} // namespace lightning
