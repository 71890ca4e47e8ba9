// SPDX-License-Identifier: Apache-2.0
//
// vafim: command-line front end.
//
//   vafim describe <config>
//   vafim eigen-sweep <config> [--sigma-min] [--sigma-max] [--points] [--reflector] [--out]
//   vafim peb-sweep <config> --case A|B [grid flags] [--out]
//   vafim validate [--trials] [--seed]
//
// Exit codes: 0 success, 1 validation failure, 2 config or usage error,
// 3 geometry or degeneracy error.

#include "vafim/analysis.hpp"
#include "vafim/config.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

enum ExitCode
{
    kOk = 0,
    kValidationFailed = 1,
    kConfigError = 2,
    kGeometryError = 3,
};

struct GridOptions
{
    double sigma_min = 1e-3;
    double sigma_max = 1e3;
    std::size_t points = 61;
};

void add_grid_options(CLI::App *cmd, GridOptions &grid)
{
    cmd->add_option("--sigma-min", grid.sigma_min, "Smallest sigma_ref [m]")->capture_default_str();
    cmd->add_option("--sigma-max", grid.sigma_max, "Largest sigma_ref [m]")->capture_default_str();
    cmd->add_option("--points", grid.points, "Number of log-spaced grid points")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
}

// Writes to the file, or stdout for "-". Binary mode keeps LF line endings.
void emit(const std::string &path, const std::string &content)
{
    if (path == "-")
    {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw vafim::Error(vafim::ErrorCode::invalid_argument, "cannot write '" + path + "'");
    out << content;
}

struct Loaded
{
    vafim::Experiment experiment;
    std::string hash;
};

Loaded load(const std::string &path)
{
    const std::string bytes = vafim::read_text_file(path);
    return {vafim::parse_config(bytes), vafim::fnv1a_hex(bytes)};
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Position and orientation Fisher information bounds for single-anchor mm-wave localization"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path = "-";
    GridOptions grid;
    std::size_t reflector = 1;
    std::string case_name;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    double tolerance_scale = 1.0;

    CLI::App *describe = app.add_subcommand("describe", "Print the derived path geometry of a scenario");
    describe->add_option("config", config_path, "Scenario file")->required();

    CLI::App *eigen = app.add_subcommand("eigen-sweep", "Eigen-structure of one NLOS path EFIM versus sigma_ref");
    eigen->add_option("config", config_path, "Scenario file")->required();
    add_grid_options(eigen, grid);
    eigen->add_option("--reflector", reflector, "Reflector index (1-based)")->capture_default_str();
    eigen->add_option("--out", out_path, "Output CSV ('-' for stdout)")->capture_default_str();

    CLI::App *peb = app.add_subcommand("peb-sweep", "Rx and VA-1 PEB versus sigma_ref for an NLOS-only case");
    peb->add_option("config", config_path, "Scenario file")->required();
    peb->add_option("--case", case_name, "Path case: A (VAs 1,2) or B (VAs 1,3)")
        ->required()
        ->check(CLI::IsMember({"A", "B", "a", "b"}));
    add_grid_options(peb, grid);
    peb->add_option("--out", out_path, "Output CSV ('-' for stdout)")->capture_default_str();

    CLI::App *validate = app.add_subcommand("validate", "Check the closed forms against numerical EFIMs");
    validate->add_option("--trials", trials, "Number of random scenarios")->capture_default_str();
    validate->add_option("--seed", seed, "Random seed")->capture_default_str();
    validate->add_option("--tolerance-scale", tolerance_scale)->group("");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try
    {
        if (*describe)
        {
            std::ostringstream text;
            vafim::write_description(text, load(config_path).experiment);
            std::cout << text.str();
        }
        else if (*eigen)
        {
            const Loaded loaded = load(config_path);
            if (reflector < 1 || reflector > loaded.experiment.scenario.reflectors.size())
                throw vafim::Error(vafim::ErrorCode::invalid_argument, "--reflector out of range");
            const auto rows = vafim::eigen_sweep(
                loaded.experiment, vafim::SweepGrid::log_spaced(grid.sigma_min, grid.sigma_max, grid.points),
                reflector - 1);
            std::ostringstream csv;
            vafim::write_eigen_csv(csv, rows, loaded.hash, loaded.experiment.ofdm.pilot_seed);
            emit(out_path, csv.str());
        }
        else if (*peb)
        {
            const Loaded loaded = load(config_path);
            if (loaded.experiment.scenario.reflectors.size() < 3)
                throw vafim::Error(vafim::ErrorCode::invalid_argument, "cases A and B need three reflectors");
            const auto rows = vafim::peb_sweep(
                loaded.experiment, vafim::SweepGrid::log_spaced(grid.sigma_min, grid.sigma_max, grid.points),
                vafim::path_case_from(case_name));
            std::ostringstream csv;
            vafim::write_peb_csv(csv, rows, loaded.hash, loaded.experiment.ofdm.pilot_seed);
            emit(out_path, csv.str());
        }
        else if (*validate)
        {
            const vafim::ValidationReport report = vafim::validation_report(trials, seed, tolerance_scale);
            std::ostringstream text;
            report.write(text);
            std::cout << text.str();
            return report.passed() ? kOk : kValidationFailed;
        }
    }
    catch (const vafim::Error &e)
    {
        std::cerr << "error [" << vafim::to_string(e.code()) << "]: " << e.what() << '\n';
        return e.is_geometric() ? kGeometryError : kConfigError;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }
    return kOk;
}
