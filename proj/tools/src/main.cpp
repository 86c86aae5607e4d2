#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "drokit/cli/commands.hpp"
#include "drokit/cli/io.hpp"

namespace {

using namespace drokit;
using namespace drokit::cli;

std::vector<std::string> split_csv_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

std::vector<double> split_real_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    for (const std::string& item : split_csv_list(text)) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError(flag + ": cannot parse '" + item + "' as a real");
        }
    }
    return out;
}

std::optional<RunConfig> load_config_or_report(const std::string& path) {
    try {
        return parse_config_text(read_file(path));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return std::nullopt;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"drokit: scenario-based distributionally robust design optimization"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> out_override;
    std::optional<std::string> design_file;
    std::vector<std::string> compare_files;
    std::string calibrate_csv;
    std::string calibrate_columns = "mach,cl";
    std::string bin_widths;
    std::string bin_origins;
    double alpha = 0.05;
    std::string validate_problem;
    std::uint64_t validate_seed = 20240117;

    CLI::App* run = app.add_subcommand("run", "optimize a design per the config");
    run->add_option("--config", config_path, "JSON run configuration")->required();
    run->add_option("--seed", seed_override, "override optimizer.seed");
    run->add_option("--out", out_override, "override output.dir");

    CLI::App* sweep = app.add_subcommand("sweep", "evaluate a design across a scenario grid");
    sweep->add_option("--config", config_path, "JSON run configuration with a sweep section")
        ->required();
    sweep->add_option("--design", design_file, "result.json supplying the design (final_x)");
    sweep->add_option("--seed", seed_override, "override optimizer.seed");
    sweep->add_option("--out", out_override, "override output.dir");

    CLI::App* compare = app.add_subcommand("compare", "tabulate result.json files");
    compare->add_option("files", compare_files, "result.json files (two or more)")->required();
    compare->add_option("--out", out_override, "directory for compare.json");

    CLI::App* calibrate =
        app.add_subcommand("calibrate", "likelihood-robust radius from observed data");
    calibrate->add_option("--csv", calibrate_csv, "observations, CSV with header")->required();
    calibrate->add_option("--columns", calibrate_columns, "comma-separated column names");
    calibrate->add_option("--bin-width", bin_widths, "comma-separated bin widths");
    calibrate->add_option("--bin-origin", bin_origins, "comma-separated bin origins");
    calibrate->add_option("--alpha", alpha, "confidence level in (0, 1]");
    calibrate->add_option("--out", out_override, "directory for calibration.json");

    CLI::App* validate = app.add_subcommand("validate", "gradient and oracle self-checks");
    validate->add_option("--problem", validate_problem,
                         "check a single problem (default: the full suite)");
    validate->add_option("--seed", validate_seed, "seed for the oracle suite");

    CLI11_PARSE(app, argc, argv);

    CommandOptions options{seed_override, out_override};
    if (run->parsed()) {
        const auto config = load_config_or_report(config_path);
        if (!config) return kBadConfig;
        return cmd_run(*config, options);
    }
    if (sweep->parsed()) {
        const auto config = load_config_or_report(config_path);
        if (!config) return kBadConfig;
        return cmd_sweep(*config, options, design_file);
    }
    if (compare->parsed()) return cmd_compare(compare_files, out_override);
    if (calibrate->parsed()) {
        try {
            std::optional<BinningSpec> binning;
            if (!bin_widths.empty()) {
                BinningSpec spec;
                spec.widths = split_real_list(bin_widths, "--bin-width");
                if (!bin_origins.empty()) {
                    spec.origins = split_real_list(bin_origins, "--bin-origin");
                }
                binning = std::move(spec);
            }
            return cmd_calibrate(calibrate_csv, split_csv_list(calibrate_columns), binning,
                                 alpha, out_override);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kBadConfig;
        }
    }
    if (validate->parsed()) return cmd_validate(validate_problem, validate_seed);
    return kBadConfig;
}
