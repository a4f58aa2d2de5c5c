// Command-line front end: solve, sweep, profile, field, render, convergence.
// Exit status 0 on success, 1 on usage or configuration errors, 2 on
// numerical failure.

#include "lightning/analysis.hpp"
#include "lightning/config.hpp"
#include "lightning/fieldgrid.hpp"
#include "lightning/solution_io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace lightning;

namespace {

constexpr int kUsageError = 1;
constexpr int kNumericalError = 2;

/// A config, or a solution file carrying its config under "problem".
struct Input {
    ProblemConfig config;
    std::optional<Solution> solution;
};

Input load_input(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path + ": JSON syntax error at " + config_detail::position(text, e.byte));
    }
    if (!j.is_object() || !j.contains("coefficients"))
        return {parse_config_text(text, path), std::nullopt};
    if (!j.contains("problem"))
        throw ConfigError(path + ": solution file has no embedded problem config");
    Input input{parse_config_text(j["problem"].dump(), path + " (embedded problem)"), std::nullopt};
    try {
        input.solution = solution_from_json(j);
    } catch (const std::runtime_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return input;
}

const Solution& ensure_solution(Input& input)
{
    if (!input.solution)
        input.solution = solve(input.config.problem);
    return *input.solution;
}

void with_output(const std::string& path, bool binary, const std::function<void(std::ostream&)>& write)
{
    if (path.empty() || path == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    auto out = open_output(path, binary);
    write(out);
    finish_output(out, path);
}

std::vector<double> parse_values(const std::string& spec)
{
    const auto to_double = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size() || !std::isfinite(v))
            throw std::invalid_argument("--values: cannot parse '" + s + "' as a number");
        return v;
    };
    std::vector<std::string> parts;
    const char sep = spec.find(':') != std::string::npos ? ':' : ',';
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, sep);)
        parts.push_back(item);
    std::vector<double> out;
    if (sep == ':') {
        if (parts.size() != 3)
            throw std::invalid_argument("--values range must be start:stop:step");
        const double a = to_double(parts[0]), b = to_double(parts[1]), h = to_double(parts[2]);
        if (!(h > 0.0) || b < a)
            throw std::invalid_argument("--values range needs step > 0 and stop >= start");
        const auto n = static_cast<long>(std::floor((b - a) / h + 1e-9)) + 1;
        if (n > 100000)
            throw std::invalid_argument("--values range has too many entries");
        for (long i = 0; i < n; ++i)
            out.push_back(a + static_cast<double>(i) * h);
    } else {
        for (const auto& p : parts)
            out.push_back(to_double(p));
    }
    if (out.empty())
        throw std::invalid_argument("--values is empty");
    return out;
}

/// Max boundary error on the evenly spaced and the corner-clustered grids.
std::pair<double, double> quick_errors(const Solution& sol, const Problem& problem)
{
    ProfileOptions opts;
    opts.points_per_half_edge = 64;
    opts.grid = ProfileGrid::Uniform;
    const double uniform = error_profile(sol, problem, opts).max_error;
    opts.grid = ProfileGrid::Clustered;
    return {uniform, error_profile(sol, problem, opts).max_error};
}

struct GridArgs {
    std::vector<double> bounds{-2.0, 3.0, -2.0, 3.0};
    int nx = 200, ny = 200;
    FieldComponent component = FieldComponent::Total;
};

void add_grid_options(CLI::App* cmd, GridArgs& g)
{
    cmd->add_option("--bounds", g.bounds, "xmin,xmax,ymin,ymax")->expected(4)->delimiter(',')->capture_default_str();
    cmd->add_option("--nx", g.nx, "Cells in x")->capture_default_str();
    cmd->add_option("--ny", g.ny, "Cells in y")->capture_default_str();
    const std::map<std::string, FieldComponent> components{
        {"scattered", FieldComponent::Scattered}, {"incident", FieldComponent::Incident}, {"total", FieldComponent::Total}};
    cmd->add_option("--component", g.component, "scattered, incident or total")
        ->transform(CLI::CheckedTransformer(components, CLI::ignore_case))
        ->default_str("total");
}

FieldGrid make_grid(Input& input, const GridArgs& g)
{
    const Bounds b{g.bounds[0], g.bounds[1], g.bounds[2], g.bounds[3]};
    return sample_grid(ensure_solution(input), input.config.problem, b, g.nx, g.ny, g.component);
}

int run(int argc, char** argv)
{
    CLI::App app{"Exterior Helmholtz solver using exponentially clustered corner poles"};
    app.require_subcommand(1);

    std::string input_path, out_path;

    auto* solve_cmd = app.add_subcommand("solve", "Solve a config and write the solution JSON");
    solve_cmd->add_option("config", input_path, "Problem config")->required();
    solve_cmd->add_option("-o,--output", out_path, "Solution file (omit to skip writing)");

    std::string param, values;
    int profile_points = 100;
    auto* sweep_cmd = app.add_subcommand("sweep", "Solve once per parameter value; CSV table");
    sweep_cmd->add_option("config", input_path, "Problem config")->required();
    sweep_cmd->add_option("--param", param, "Parameter name")->required()->check(CLI::IsMember(sweep_parameters()));
    sweep_cmd->add_option("--values", values, "start:stop:step (inclusive) or a comma list")->required();
    sweep_cmd->add_option("-o,--output", out_path, "CSV file (default stdout)");

    ProfileGrid grid = ProfileGrid::Clustered;
    const std::map<std::string, ProfileGrid> grids{{"clustered", ProfileGrid::Clustered},
                                                   {"uniform", ProfileGrid::Uniform}};
    sweep_cmd->add_option("--points", profile_points, "Profile points per half-edge")->capture_default_str();
    sweep_cmd->add_option("--grid", grid, "clustered or uniform")
        ->transform(CLI::CheckedTransformer(grids, CLI::ignore_case))
        ->default_str("clustered");

    auto* profile_cmd = app.add_subcommand("profile", "Boundary error trace as CSV");
    profile_cmd->add_option("input", input_path, "Problem config or solution file")->required();
    profile_cmd->add_option("--points", profile_points, "Points per half-edge (>= 8)")->capture_default_str();
    profile_cmd->add_option("--grid", grid, "clustered or uniform")
        ->transform(CLI::CheckedTransformer(grids, CLI::ignore_case))
        ->default_str("clustered");
    profile_cmd->add_option("-o,--output", out_path, "CSV file (default stdout)");

    GridArgs field_args;
    auto* field_cmd = app.add_subcommand("field", "Field values on a grid as CSV");
    field_cmd->add_option("input", input_path, "Problem config or solution file")->required();
    add_grid_options(field_cmd, field_args);
    field_cmd->add_option("-o,--output", out_path, "CSV file (default stdout)");

    GridArgs render_args;
    FieldPart part = FieldPart::Re;
    std::optional<double> vmax;
    auto* render_cmd = app.add_subcommand("render", "Field image as binary PPM");
    render_cmd->add_option("input", input_path, "Problem config or solution file")->required();
    add_grid_options(render_cmd, render_args);
    const std::map<std::string, FieldPart> parts{
        {"re", FieldPart::Re}, {"im", FieldPart::Im}, {"abs", FieldPart::Abs}};
    render_cmd->add_option("--part", part, "re, im or abs")
        ->transform(CLI::CheckedTransformer(parts, CLI::ignore_case))
        ->default_str("re");
    render_cmd->add_option("--vmax", vmax, "Colour scale limit (default twice the field maximum)");
    render_cmd->add_option("-o,--output", out_path, "PPM file")->required();

    std::vector<int> counts{20, 40, 60, 80, 100};
    auto* conv_cmd = app.add_subcommand("convergence", "Error against sqrt(poles per corner) with a line fit");
    conv_cmd->add_option("config", input_path, "Problem config")->required();
    conv_cmd->add_option("--counts", counts, "Pole counts")->delimiter(',')->capture_default_str();
    conv_cmd->add_option("--points", profile_points, "Profile points per half-edge")->capture_default_str();
    conv_cmd->add_option("--grid", grid, "clustered or uniform")
        ->transform(CLI::CheckedTransformer(grids, CLI::ignore_case))
        ->default_str("clustered");
    conv_cmd->add_option("-o,--output", out_path, "CSV file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kUsageError;
    }

    ProfileOptions popts;
    popts.points_per_half_edge = profile_points;
    popts.grid = grid;

    if (solve_cmd->parsed()) {
        Input input = load_input(input_path);
        const Problem& problem = input.config.problem;
        const auto t0 = std::chrono::steady_clock::now();
        const Solution sol = solve(problem);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const auto [uniform, clustered] = quick_errors(sol, problem);
        if (!out_path.empty())
            save_solution(sol, out_path, input.config.raw);
        std::printf("rows=%zu cols=%zu residual=%.3e max_boundary_error=%.3e max_boundary_error_clustered=%.3e "
                    "seconds=%.3f\n",
                    sol.diagnostics.rows, sol.diagnostics.cols, sol.diagnostics.residual, uniform, clustered,
                    seconds);
        return std::isfinite(uniform) ? 0 : kNumericalError;
    }
    if (sweep_cmd->parsed()) {
        const Input input = load_input(input_path);
        const auto table = sweep(input.config.problem, param, parse_values(values), popts);
        with_output(out_path, false, [&](std::ostream& os) { write_sweep_csv(table, os); });
        return 0;
    }
    if (profile_cmd->parsed()) {
        Input input = load_input(input_path);
        const auto prof = error_profile(ensure_solution(input), input.config.problem, popts);
        with_output(out_path, false, [&](std::ostream& os) { write_profile_csv(prof, os); });
        return 0;
    }
    if (field_cmd->parsed()) {
        Input input = load_input(input_path);
        const FieldGrid g = make_grid(input, field_args);
        with_output(out_path, false, [&](std::ostream& os) { write_csv(g, os); });
        return 0;
    }
    if (render_cmd->parsed()) {
        Input input = load_input(input_path);
        const FieldGrid g = make_grid(input, render_args);
        write_ppm(g, part, vmax.value_or(default_vmax(g, part)), out_path);
        return 0;
    }
    if (conv_cmd->parsed()) {
        const Input input = load_input(input_path);
        const auto study = convergence_study(input.config.problem, counts, popts);
        with_output(out_path, false, [&](std::ostream& os) { write_convergence_csv(study, os); });
        std::fprintf(out_path.empty() ? stderr : stdout, "slope=%.6g intercept=%.6g correlation=%.6g\n",
                     study.fit.slope, study.fit.intercept, study.fit.correlation);
        return 0;
    }
    return kUsageError;
}

} // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumericalError;
    }
}
