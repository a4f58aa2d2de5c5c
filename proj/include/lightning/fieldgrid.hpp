// Field sampling on rectangular grids with obstacle masking, plus CSV and
// binary PPM export.
//
// Cell (i, j) has centre (xmin + (i + 1/2) dx, ymin + (j + 1/2) dy); values
// are stored with x varying fastest.

#pragma once

#include "lightning/format.hpp"
#include "lightning/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace lightning {

enum class FieldComponent { Scattered, Incident, Total };
enum class FieldPart { Re, Im, Abs };

struct Bounds {
    double xmin = -2.0, xmax = 3.0, ymin = -2.0, ymax = 3.0;

    void validate() const
    {
        if (!(xmax > xmin) || !(ymax > ymin) || !std::isfinite(xmax - xmin) || !std::isfinite(ymax - ymin))
            throw std::invalid_argument("grid bounds must satisfy xmin < xmax and ymin < ymax");
    }
};

struct FieldGrid {
    Bounds bounds;
    int nx = 0, ny = 0;
    FieldComponent component = FieldComponent::Scattered;
    std::vector<Complex> values; // meaningless where masked
    std::vector<bool> mask;      // true = cell centre inside an obstacle

    Complex centre(int i, int j) const
    {
        const double dx = (bounds.xmax - bounds.xmin) / nx;
        const double dy = (bounds.ymax - bounds.ymin) / ny;
        return {bounds.xmin + (i + 0.5) * dx, bounds.ymin + (j + 0.5) * dy};
    }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    std::size_t masked_count() const { return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true)); }
};

inline FieldGrid sample_grid(const Solution& solution, const Problem& problem, const Bounds& bounds, int nx, int ny,
                             FieldComponent component)
{
    bounds.validate();
    if (nx < 2 || ny < 2)
        throw std::invalid_argument("grid resolution must be at least 2 x 2");
    FieldGrid grid{bounds, nx, ny, component, {}, {}};
    grid.values.assign(static_cast<std::size_t>(nx) * ny, Complex(0.0));
    grid.mask.assign(grid.values.size(), false);
    std::vector<Complex> scratch;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const Complex z = grid.centre(i, j);
            const std::size_t k = grid.index(i, j);
            if (problem.scene.inside_any(z)) {
                grid.mask[k] = true;
                continue;
            }
            Complex v = 0.0;
            if (component != FieldComponent::Incident)
                v += evaluate(solution, z, scratch);
            if (component != FieldComponent::Scattered)
                v += problem.incident(problem.wavenumber, z);
            grid.values[k] = v;
        }
    return grid;
}

inline double select_part(Complex v, FieldPart part)
{
    switch (part) {
    case FieldPart::Re: return v.real();
    case FieldPart::Im: return v.imag();
    case FieldPart::Abs: return std::abs(v);
    }
    return v.real();
}

struct Rgb {
    unsigned char r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

inline constexpr Rgb kMaskColour{64, 64, 64};

/// Blue-white-red map: t = 0 blue, 1/2 white, 1 red.
inline Rgb colour_map(double x, FieldPart part, double vmax)
{
    double t;
    if (part == FieldPart::Abs)
        t = std::clamp(x, 0.0, vmax) / vmax;
    else
        t = (std::clamp(x, -vmax, vmax) + vmax) / (2.0 * vmax);
    const auto channel = [](double v) { return static_cast<unsigned char>(std::lround(255.0 * v)); };
    return {channel(t), channel(1.0 - std::abs(2.0 * t - 1.0)), channel(1.0 - t)};
}

/// Twice the largest unmasked |part|; 1 when that is zero.
inline double default_vmax(const FieldGrid& grid, FieldPart part)
{
    double m = 0.0;
    for (std::size_t k = 0; k < grid.values.size(); ++k)
        if (!grid.mask[k])
            m = std::max(m, std::abs(select_part(grid.values[k], part)));
    return m > 0.0 ? 2.0 * m : 1.0;
}

inline void write_ppm(const FieldGrid& grid, FieldPart part, double vmax, std::ostream& out)
{
    if (!(vmax > 0.0) || !std::isfinite(vmax))
        throw std::invalid_argument("vmax must be a positive finite number");
    out << "P6\n" << grid.nx << ' ' << grid.ny << "\n255\n";
    std::string row(static_cast<std::size_t>(grid.nx) * 3, '\0');
    for (int j = grid.ny - 1; j >= 0; --j) {
        for (int i = 0; i < grid.nx; ++i) {
            const std::size_t k = grid.index(i, j);
            const Rgb c = grid.mask[k] ? kMaskColour : colour_map(select_part(grid.values[k], part), part, vmax);
            row[3 * static_cast<std::size_t>(i)] = static_cast<char>(c.r);
            row[3 * static_cast<std::size_t>(i) + 1] = static_cast<char>(c.g);
            row[3 * static_cast<std::size_t>(i) + 2] = static_cast<char>(c.b);
        }
        out.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
}

inline void write_ppm(const FieldGrid& grid, FieldPart part, double vmax, const std::string& path)
{
    auto out = open_output(path, true);
    write_ppm(grid, part, vmax, out);
    finish_output(out, path);
}

inline void write_csv(const FieldGrid& grid, std::ostream& out)
{
    out << "x,y,re,im,mask\n";
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const Complex z = grid.centre(i, j);
            const std::size_t k = grid.index(i, j);
            out << format_double(z.real()) << ',' << format_double(z.imag()) << ',';
            if (grid.mask[k])
                out << ",,1\n";
            else
                out << format_double(grid.values[k].real()) << ',' << format_double(grid.values[k].imag()) << ",0\n";
        }
}

inline void write_csv(const FieldGrid& grid, const std::string& path)
{
    auto out = open_output(path);
    write_csv(grid, out);
    finish_output(out, path);
}

struct CsvCell {
    Complex location;
    std::optional<Complex> value; // empty when masked
};

/// Parses the output of write_csv.
inline std::vector<CsvCell> read_field_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != "x,y,re,im,mask")
        throw std::runtime_error("field CSV: missing or unexpected header");
    std::vector<CsvCell> cells;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ','))
            f.push_back(item);
        if (!line.empty() && line.back() == ',')
            f.emplace_back();
        if (f.size() != 5)
            throw std::runtime_error("field CSV line " + std::to_string(lineno) + ": expected 5 fields");
        CsvCell c{{std::stod(f[0]), std::stod(f[1])}, std::nullopt};
        if (f[4] == "0")
            c.value = Complex(std::stod(f[2]), std::stod(f[3]));
        else if (f[4] != "1")
            throw std::runtime_error("field CSV line " + std::to_string(lineno) + ": bad mask flag");
        cells.push_back(c);
    }
    return cells;
}

} // namespace lightning
