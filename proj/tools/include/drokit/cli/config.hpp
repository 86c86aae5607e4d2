#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "drokit/gdam.hpp"
#include "drokit/objectives.hpp"
#include "drokit/problems.hpp"
#include "drokit/scenario.hpp"

namespace drokit::cli {

/// Invalid run configuration; the message names the offending key.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ProblemConfig {
    std::string name = "toy_beyer";
    std::vector<double> center{1.0, 1.0}; // constrained_quadratic
    std::vector<double> a{1.0, 0.0};
    double b = 0.5;
    double sigma = 0.0;
    std::size_t dimension = 3; // airfoil_surrogate
};

struct DataConfig {
    std::string source = "builtin"; // "builtin" | "csv"
    std::string path;
    std::vector<std::string> columns{"mach", "cl"};
    std::optional<BinningSpec> binning;
};

struct ObjectiveConfig {
    std::string mode = "empirical_mean";
    std::vector<double> nominal; // empty: problem default
    double mu = 0.0;
    std::string kind = "chi2";
    double delta = 1.0;
    double rho = 0.0;
};

struct OptimizerConfig {
    std::string algorithm = "gdam"; // "gdam" | "sgd"
    std::vector<double> x0;         // empty: problem default
    GdamConfig gdam;
};

struct SweepConfig {
    std::size_t coordinate = 0;
    double min = 0.0;
    double max = 1.0;
    long steps = 2;
};

struct RunConfig {
    ProblemConfig problem;
    DataConfig data;
    ObjectiveConfig objective;
    OptimizerConfig optimizer;
    std::string output_dir = ".";
    std::optional<SweepConfig> sweep;
    std::optional<std::vector<double>> design_x;
};

/// Strict parse: every key must be known and every value in range; violations
/// throw ConfigError naming the key. The result round-trips through to_json.
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_text(const std::string& text);
nlohmann::json to_json(const RunConfig& config);

std::shared_ptr<const StochasticProblem> make_problem(const ProblemConfig& config);

/// Builtin support or CSV ingestion (plus optional binning) per the config.
EmpiricalDistribution make_distribution(const DataConfig& data,
                                        const StochasticProblem& problem);

/// Resolve the objective mode; an empty nominal falls back to the problem's.
RobustnessSpec make_robustness(const ObjectiveConfig& objective,
                               const StochasticProblem& problem);

} // namespace drokit::cli
