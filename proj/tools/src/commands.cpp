#include "drokit/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "drokit/cli/io.hpp"
#include "drokit/errors.hpp"
#include "drokit/gdam.hpp"
#include "drokit/validation.hpp"

namespace drokit::cli {

namespace {

using nlohmann::json;

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadConfig;
    } catch (const FeasibilityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInfeasibleStart;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadConfig;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadConfig;
    } catch (const std::invalid_argument& e) { // parameter/contract violations
        std::cerr << "error: " << e.what() << "\n";
        return kBadConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericalFailure;
    }
}

Scenario resolve_nominal(const RunConfig& config, const StochasticProblem& problem) {
    if (!config.objective.nominal.empty()) return Scenario{config.objective.nominal, 0};
    return problem.default_nominal();
}

std::string render_trace_csv(const OptimizerTrace& trace, std::size_t dim,
                             std::size_t constraints) {
    std::ostringstream out;
    out << "k";
    for (std::size_t j = 0; j < dim; ++j) out << ",x" << j;
    out << ",objective,zeta,step,eta";
    for (std::size_t i = 0; i < constraints; ++i) out << ",g" << i;
    out << "\n";
    for (const IterateRecord& r : trace.records) {
        out << r.k;
        for (std::size_t j = 0; j < dim; ++j) out << "," << format_real(r.x[j]);
        out << "," << format_real(r.objective_estimate) << "," << format_real(r.zeta) << ","
            << format_real(r.step_length) << "," << format_real(r.implied_eta);
        for (std::size_t i = 0; i < constraints; ++i) {
            out << "," << format_real(r.constraint_values[i]);
        }
        out << "\n";
    }
    return out.str();
}

/// Post-run performance statistics at the final design: full-support
/// evaluation when the set is small, a seeded 200-draw otherwise.
json evaluate_design(const StochasticProblem& problem, const EmpiricalDistribution& dist,
                     const RobustnessSpec& spec, const Scenario& nominal,
                     std::span<const double> x, std::uint64_t seed) {
    constexpr std::size_t kEvalSamples = 200;
    ObjectiveReport stats;
    ObjectiveReport objective;
    std::size_t samples = dist.size();
    if (dist.size() <= kEvalSamples) {
        stats = robust_objective(problem, x, dist, RobustnessSpec::empirical_mean());
        objective = robust_objective(problem, x, dist, spec);
    } else {
        Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
        const std::vector<std::size_t> draw = sample_batch(dist, kEvalSamples, rng);
        std::vector<Scenario> batch;
        batch.reserve(draw.size());
        for (std::size_t idx : draw) batch.push_back(dist.set().scenario(idx));
        stats = robust_objective(problem, x, batch, RobustnessSpec::empirical_mean());
        objective = robust_objective(problem, x, batch, spec);
        samples = kEvalSamples;
    }
    const double worst =
        *std::max_element(stats.per_scenario_losses.begin(), stats.per_scenario_losses.end());

    json out;
    out["num_samples"] = samples;
    out["mean"] = stats.mean;
    out["variance"] = stats.variance;
    out["worst_case"] = worst;
    out["nominal_loss"] = problem.loss(x, nominal);
    out["objective_value"] = objective.value;
    if (objective.worst_case_q) {
        out["worst_case_q"] = *objective.worst_case_q;
    } else {
        out["worst_case_q"] = nullptr;
    }
    return out;
}

OptimizerTrace dispatch_run(const RunConfig& config, const StochasticProblem& problem,
                            const EmpiricalDistribution& dist, const RobustnessSpec& spec,
                            std::span<const double> x0) {
    if (config.optimizer.algorithm == "sgd") {
        return run_sgd(problem, dist, spec, config.optimizer.gdam, x0);
    }
    if (spec.mode == RobustnessSpec::Mode::Deterministic) {
        return run_deterministic_gdam(problem, spec, config.optimizer.gdam, x0);
    }
    return run_stochastic_gdam(problem, dist, spec, config.optimizer.gdam, x0);
}

} // namespace

int cmd_run(const RunConfig& config_in, const CommandOptions& options) {
    return guarded([&] {
        RunConfig config = config_in;
        if (options.seed) config.optimizer.gdam.seed = *options.seed;
        if (options.out) config.output_dir = *options.out;

        const auto problem = make_problem(config.problem);
        const EmpiricalDistribution dist = make_distribution(config.data, *problem);
        const RobustnessSpec spec = make_robustness(config.objective, *problem);
        const std::vector<double> x0 =
            config.optimizer.x0.empty() ? problem->default_start() : config.optimizer.x0;

        const OptimizerTrace trace = dispatch_run(config, *problem, dist, spec, x0);

        const std::filesystem::path out_dir(config.output_dir);
        std::filesystem::create_directories(out_dir);
        atomic_write(out_dir / "trace.csv",
                     render_trace_csv(trace, problem->dimension(), problem->constraint_count()));

        json result;
        result["final_x"] = trace.final_x;
        result["iterations"] = trace.records.size();
        result["termination"] = to_string(trace.reason);
        result["seed"] = config.optimizer.gdam.seed;
        result["evaluation"] =
            evaluate_design(*problem, dist, spec, resolve_nominal(config, *problem),
                            trace.final_x, config.optimizer.gdam.seed);
        result["config"] = to_json(config);
        atomic_write(out_dir / "result.json", result.dump(2) + "\n");
        return kOk;
    });
}

int cmd_sweep(const RunConfig& config_in, const CommandOptions& options,
              const std::optional<std::string>& design_file) {
    return guarded([&] {
        RunConfig config = config_in;
        if (options.out) config.output_dir = *options.out;
        if (!config.sweep) throw ConfigError("sweep: config requires a sweep section");

        const auto problem = make_problem(config.problem);
        std::vector<double> design;
        if (design_file) {
            const json result = json::parse(read_file(*design_file));
            if (!result.contains("final_x")) {
                throw ConfigError("sweep: design file lacks final_x: " + *design_file);
            }
            design = result["final_x"].get<std::vector<double>>();
        } else if (config.design_x) {
            design = *config.design_x;
        } else {
            design = problem->default_start();
        }
        if (design.size() != problem->dimension()) {
            throw ConfigError("sweep: design dimension mismatch");
        }

        Scenario scenario = resolve_nominal(config, *problem);
        const SweepConfig& grid = *config.sweep;
        if (grid.coordinate >= scenario.values.size()) {
            throw ConfigError("sweep.coordinate exceeds the scenario dimension");
        }

        std::ostringstream csv;
        csv << "xi,loss\n";
        for (long t = 0; t < grid.steps; ++t) {
            const double xi = grid.min + (grid.max - grid.min) * static_cast<double>(t) /
                                             static_cast<double>(grid.steps - 1);
            scenario.values[grid.coordinate] = xi;
            csv << format_real(xi) << "," << format_real(problem->loss(design, scenario))
                << "\n";
        }

        const std::filesystem::path out_dir(config.output_dir);
        std::filesystem::create_directories(out_dir);
        atomic_write(out_dir / "sweep.csv", csv.str());
        return kOk;
    });
}

int cmd_compare(const std::vector<std::string>& result_files,
                const std::optional<std::string>& out) {
    return guarded([&] {
        if (result_files.size() < 2) {
            throw ConfigError("compare: at least two result files are required");
        }
        json table = json::array();
        for (const std::string& file : result_files) {
            json result;
            try {
                result = json::parse(read_file(file));
            } catch (const std::exception& e) {
                throw ConfigError("compare: cannot read '" + file + "': " + e.what());
            }
            if (!result.contains("evaluation")) {
                throw ConfigError("compare: '" + file + "' lacks an evaluation section");
            }
            const json& eval = result["evaluation"];
            for (const char* key : {"mean", "variance", "worst_case", "nominal_loss"}) {
                if (!eval.contains(key)) {
                    throw ConfigError("compare: '" + file + "' lacks evaluation." + key);
                }
            }
            json row;
            row["design"] = std::filesystem::path(file).stem().string();
            row["mean"] = eval["mean"];
            row["variance"] = eval["variance"];
            row["worst_case"] = eval["worst_case"];
            row["nominal_loss"] = eval["nominal_loss"];
            table.push_back(std::move(row));
        }

        std::printf("%-24s %14s %14s %14s %14s\n", "design", "mean", "variance", "worst_case",
                    "nominal_loss");
        for (const json& row : table) {
            std::printf("%-24s %14.8g %14.8g %14.8g %14.8g\n",
                        row["design"].get<std::string>().c_str(), row["mean"].get<double>(),
                        row["variance"].get<double>(), row["worst_case"].get<double>(),
                        row["nominal_loss"].get<double>());
        }
        if (out) {
            std::filesystem::create_directories(*out);
            atomic_write(std::filesystem::path(*out) / "compare.json", table.dump(2) + "\n");
        }
        return kOk;
    });
}

int cmd_calibrate(const std::string& csv_path, const std::vector<std::string>& columns,
                  const std::optional<BinningSpec>& binning, double alpha,
                  const std::optional<std::string>& out) {
    return guarded([&] {
        std::ifstream in(csv_path);
        if (!in) throw ConfigError("calibrate: cannot open '" + csv_path + "'");
        ScenarioSet set = load_csv(in, columns);
        if (binning) set = bin_scenarios(set, *binning);
        const double gamma_star = likelihood_gamma_star(set, alpha);
        const double rho = gamma_to_rho(set, gamma_star);

        json report;
        report["support"] = set.size();
        report["counts"] = std::vector<long>(set.counts().begin(), set.counts().end());
        report["gamma_star"] = gamma_star;
        report["rho"] = rho;
        report["alpha"] = alpha;
        std::cout << report.dump(2) << "\n";
        if (out) {
            std::filesystem::create_directories(*out);
            atomic_write(std::filesystem::path(*out) / "calibration.json",
                         report.dump(2) + "\n");
        }
        return kOk;
    });
}

int cmd_validate(const std::string& problem_selector, std::uint64_t seed) {
    return guarded([&] {
        bool ok = true;
        auto check_problem = [&](const std::shared_ptr<const StochasticProblem>& problem) {
            const std::vector<double> x = problem->default_start();
            const double err = finite_difference_check(*problem, x, 1e-6);
            const bool pass = err <= 1e-5;
            std::printf("%-30s gradient check: worst relative error %.3e  %s\n",
                        problem->name().c_str(), err, pass ? "ok" : "FAILED");
            ok = ok && pass;
        };

        if (!problem_selector.empty()) {
            ProblemConfig pc;
            pc.name = problem_selector;
            if (problem_selector == "constrained_quadratic") pc.sigma = 0.1;
            check_problem(make_problem(pc));
            return ok ? kOk : kCheckFailed;
        }

        check_problem(toy_beyer());
        check_problem(constrained_quadratic(0.1));
        check_problem(airfoil_surrogate(3));

        const OracleAgreement agreement = dual_oracle_agreement(200, seed);
        const bool oracle_ok = agreement.worst_rel_error <= 1e-6;
        std::printf("dual-vs-oracle suite (%zu instances): worst relative error %.3e  %s\n",
                    agreement.instances, agreement.worst_rel_error,
                    oracle_ok ? "ok" : "FAILED");
        ok = ok && oracle_ok;
        return ok ? kOk : kCheckFailed;
    });
}

} // namespace drokit::cli
