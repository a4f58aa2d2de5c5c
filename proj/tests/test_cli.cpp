#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const fs::path kBinary = LIGHTNING_CLI;
const fs::path kConfigs = LIGHTNING_CONFIG_DIR;

struct CliRun {
    int status = -1;
    std::string output; // stdout
    std::string errors; // stderr
};

CliRun run(const std::string& args)
{
    const fs::path err = fs::temp_directory_path() / "lightning_cli_test.stderr";
    const std::string cmd = kBinary.string() + " " + args + " 2>" + err.string();
    CliRun r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0)
        r.output.append(buf, n);
    const int status = pclose(pipe);
    r.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(err);
    std::stringstream ss;
    ss << in.rdbuf();
    r.errors = ss.str();
    return r;
}

std::string config(const std::string& name) { return (kConfigs / name).string(); }

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "lightning_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double summary_value(const std::string& out, const std::string& key)
{
    const auto at = out.find(key + "=");
    if (at == std::string::npos)
        return NAN;
    return std::stod(out.substr(at + key.size() + 1));
}

std::vector<std::vector<double>> csv_rows(const std::string& text)
{
    std::vector<std::vector<double>> rows;
    std::stringstream ss(text);
    std::string line;
    std::getline(ss, line);
    while (std::getline(ss, line)) {
        std::vector<double> row;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');)
            row.push_back(cell.empty() ? NAN : std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

} // namespace

TEST(Cli, SolveSquareReportsAccurateFit)
{
    const auto out = scratch("square.sol.json");
    const CliRun r = run("solve " + config("unit_square_k20.json") + " -o " + out.string());
    ASSERT_EQ(r.status, 0) << r.errors;
    EXPECT_EQ(summary_value(r.output, "rows"), 1596.0);
    EXPECT_EQ(summary_value(r.output, "cols"), 661.0);
    const double err = summary_value(r.output, "max_boundary_error");
    EXPECT_GT(err, 0.0);
    EXPECT_LE(err, 1e-6) << r.output;
    EXPECT_TRUE(std::isfinite(summary_value(r.output, "max_boundary_error_clustered")));
    EXPECT_TRUE(fs::exists(out));
}

TEST(Cli, SolveLShapeMeetsTunedTarget)
{
    const CliRun r = run("solve " + config("lshape_k20.json"));
    ASSERT_EQ(r.status, 0) << r.errors;
    EXPECT_LE(summary_value(r.output, "max_boundary_error"), 1e-7) << r.output;
}

TEST(Cli, UnknownKeyIsNamedAndUsageErrorsExitOne)
{
    const auto bad = scratch("typo.json");
    std::string text = slurp(config("unit_square_k20.json"));
    text.replace(text.find("\"poles_per_corner\""), 18, "\"poles_per_cornr\"");
    std::ofstream(bad) << text;
    CliRun r = run("solve " + bad.string());
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.errors.find("poles_per_cornr"), std::string::npos) << r.errors;

    EXPECT_EQ(run("").status, 1);
    EXPECT_EQ(run("frobnicate").status, 1);
    EXPECT_EQ(run("solve /nonexistent.json").status, 1);
    EXPECT_EQ(run("sweep " + config("zero_data.json") + " --param pole_speed --values 1").status, 1);
    EXPECT_EQ(run("sweep " + config("zero_data.json") + " --param pole_rate --values 3:1:0.5").status, 1);
    EXPECT_EQ(run("profile " + config("zero_data.json") + " --points 4").status, 1);
    EXPECT_EQ(run("--help").status, 0);
}

TEST(Cli, NumericalFailureExitsTwo)
{
    const auto bad = scratch("tiny_k.json");
    std::ofstream(bad) << R"({"scene": {"regions": [{"type": "unit_square"}]}, "wavenumber": 1e-300,
        "boundary": {"kind": {"type": "plane_wave", "angle": 1}},
        "params": {"poles_per_corner": 10, "samples_per_corner_side": 40}})";
    const CliRun r = run("solve " + bad.string());
    EXPECT_EQ(r.status, 2) << r.errors;
}

TEST(Cli, SweepRowCounts)
{
    CliRun r = run("sweep " + config("zero_data.json") + " --param pole_rate --values 0.1:3.1:0.3");
    ASSERT_EQ(r.status, 0) << r.errors;
    EXPECT_EQ(line_count(r.output), 12u);
    EXPECT_EQ(r.output.rfind("pole_rate,max_error,residual,seconds,rows,cols,pole_rate\n", 0), 0u);
    const auto rows = csv_rows(r.output);
    EXPECT_NEAR(rows.back()[0], 3.1, 1e-12);

    r = run("sweep " + config("zero_data.json") + " --param poles_per_corner --values 50,100,130");
    ASSERT_EQ(r.status, 0) << r.errors;
    EXPECT_EQ(line_count(r.output), 4u);
}

TEST(Cli, PoleRateSweepMinimumNearRecommendedRate)
{
    const auto out = scratch("rate_sweep.csv");
    const CliRun r = run("sweep " + config("unit_square_k20.json") +
                      " --param pole_rate --values 0.1:3.1:0.3 --grid uniform -o " + out.string());
    ASSERT_EQ(r.status, 0) << r.errors;
    const auto rows = csv_rows(slurp(out));
    ASSERT_EQ(rows.size(), 11u);
    const auto best = std::min_element(rows.begin(), rows.end(), [](auto& a, auto& b) { return a[1] < b[1]; });
    EXPECT_GE((*best)[0], 1.8);
    EXPECT_LE((*best)[0], 2.8);
}

TEST(Cli, ProfileOutputs)
{
    CliRun r = run("profile " + config("unit_square_k20.json") + " --grid uniform");
    ASSERT_EQ(r.status, 0) << r.errors;
    EXPECT_EQ(r.output.rfind("index,x,y,error\n", 0), 0u);
    auto rows = csv_rows(r.output);
    ASSERT_EQ(rows.size(), 800u);
    double mx = 0;
    for (const auto& row : rows)
        mx = std::max(mx, row[3]);
    EXPECT_GT(mx, 0.0);
    EXPECT_LE(mx, 1e-6);

    r = run("profile " + config("zero_data.json") + " --points 50");
    ASSERT_EQ(r.status, 0) << r.errors;
    for (const auto& row : csv_rows(r.output))
        EXPECT_LE(row[3], 1e-13);

    r = run("profile " + config("square_slow_clustering.json"));
    ASSERT_EQ(r.status, 0) << r.errors;
    double near = 0, far = 0;
    const std::complex<double> corners[] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    for (const auto& row : csv_rows(r.output)) {
        double d = 1;
        for (const auto c : corners)
            d = std::min(d, std::abs(std::complex<double>(row[1], row[2]) - c));
        double& slot = d < 0.05 ? near : far;
        slot = std::max(slot, row[3]);
    }
    EXPECT_GE(near, 1e3 * far) << near << " vs " << far;
}

TEST(Cli, FieldCsvRowCount)
{
    const CliRun r = run("field " + config("zero_data.json") + " --nx 17 --ny 11 --component scattered");
    ASSERT_EQ(r.status, 0) << r.errors;
    EXPECT_EQ(line_count(r.output), 17u * 11u + 1u);
    EXPECT_EQ(r.output.rfind("x,y,re,im,mask\n", 0), 0u);
}

TEST(Cli, RenderFromSolutionMatchesFreshSolve)
{
    const auto sol = scratch("render.sol.json");
    ASSERT_EQ(run("solve " + config("unit_square_k20.json") + " -o " + sol.string()).status, 0);
    const std::string grid = " --bounds -1,2,-1,2 --nx 30 --ny 30 --part abs -o ";
    const auto a = scratch("fresh.ppm"), b = scratch("reloaded.ppm");
    ASSERT_EQ(run("render " + config("unit_square_k20.json") + grid + a.string()).status, 0);
    ASSERT_EQ(run("render " + sol.string() + grid + b.string()).status, 0);
    const std::string pa = slurp(a), pb = slurp(b);
    EXPECT_EQ(pa, pb);

    const std::string header = "P6\n30 30\n255\n";
    ASSERT_EQ(pa.size(), header.size() + 3u * 900u);
    for (int row = 0; row < 30; ++row)
        for (int col = 0; col < 30; ++col) {
            const std::size_t k = header.size() + 3u * static_cast<std::size_t>(row * 30 + col);
            const bool grey = pa[k] == 64 && pa[k + 1] == 64 && pa[k + 2] == 64;
            EXPECT_EQ(grey, row >= 10 && row < 20 && col >= 10 && col < 20) << row << "," << col;
        }

    const CliRun f1 = run("field " + sol.string() + " --nx 12 --ny 12");
    const CliRun f2 = run("field " + config("unit_square_k20.json") + " --nx 12 --ny 12");
    EXPECT_EQ(f1.output, f2.output);
}

TEST(Cli, ConvergenceReportsFit)
{
    const CliRun r = run("convergence " + config("zero_data.json") + " --counts 8,12,16,20");
    ASSERT_EQ(r.status, 0) << r.errors;
    EXPECT_NE(r.output.find("poles_per_corner,sqrt_p,pole_rate,max_error,log10_error"), std::string::npos);
    EXPECT_NE(r.errors.find("slope=0 "), std::string::npos) << r.errors;
    EXPECT_EQ(run("convergence " + config("zero_data.json") + " --counts 8,12,16").status, 1);
}
