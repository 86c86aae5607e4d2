#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drokit/cli/config.hpp"

namespace drokit::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,   // validate: some check failed
    kBadConfig = 2,     // config/input validation failure
    kInfeasibleStart = 3,
    kNumericalFailure = 4,
};

struct CommandOptions {
    std::optional<std::uint64_t> seed; // --seed overrides optimizer.seed
    std::optional<std::string> out;    // --out overrides output.dir
};

/// Optimize per the config; writes trace.csv and result.json into the output
/// directory.
int cmd_run(const RunConfig& config, const CommandOptions& options);

/// Evaluate a fixed design across a scenario grid; writes sweep.csv
/// (header "xi,loss"). The design comes from --design (a result.json), the
/// config's design.x, or the problem default start, in that order.
int cmd_sweep(const RunConfig& config, const CommandOptions& options,
              const std::optional<std::string>& design_file);

/// Tabulate mean/variance/worst-case/nominal loss across result.json files.
int cmd_compare(const std::vector<std::string>& result_files,
                const std::optional<std::string>& out);

/// Likelihood-robust calibration of a CSV data set: prints and writes
/// {support, counts, gamma_star, rho, alpha}.
int cmd_calibrate(const std::string& csv_path, const std::vector<std::string>& columns,
                  const std::optional<BinningSpec>& binning, double alpha,
                  const std::optional<std::string>& out);

/// Gradient hygiene plus the dual-vs-oracle suite. An empty selector checks
/// every built-in problem and runs the 200-instance oracle suite; a named
/// selector checks just that problem.
int cmd_validate(const std::string& problem_selector, std::uint64_t seed);

} // namespace drokit::cli
