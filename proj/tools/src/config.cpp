#include "drokit/cli/config.hpp"

#include <algorithm>
#include <fstream>

#include "drokit/errors.hpp"

namespace drokit::cli {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& context,
                         std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
                return item.key() == k;
            }) == allowed.end()) {
            throw ConfigError(context + ": unknown key '" + item.key() + "'");
        }
    }
}

double get_real(const json& obj, const std::string& context, const char* key,
                double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw ConfigError(context + "." + key + " must be a number");
    return obj[key].get<double>();
}

long get_integer(const json& obj, const std::string& context, const char* key, long fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) {
        throw ConfigError(context + "." + key + " must be an integer");
    }
    return obj[key].get<long>();
}

bool get_boolean(const json& obj, const std::string& context, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) throw ConfigError(context + "." + key + " must be a boolean");
    return obj[key].get<bool>();
}

std::string get_text(const json& obj, const std::string& context, const char* key,
                     const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_string()) throw ConfigError(context + "." + key + " must be a string");
    return obj[key].get<std::string>();
}

std::vector<double> get_real_array(const json& obj, const std::string& context, const char* key,
                                   std::vector<double> fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_array()) throw ConfigError(context + "." + key + " must be an array");
    std::vector<double> out;
    for (const auto& v : obj[key]) {
        if (!v.is_number()) throw ConfigError(context + "." + key + " must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

ProblemConfig parse_problem(const json& j) {
    ProblemConfig out;
    if (j.is_null()) return out;
    reject_unknown_keys(j, "problem", {"name", "center", "a", "b", "sigma", "dimension"});
    out.name = get_text(j, "problem", "name", out.name);
    static const char* known[] = {"toy_beyer", "constrained_quadratic", "airfoil_surrogate",
                                  "corrupted_gradient_fixture"};
    if (std::find(std::begin(known), std::end(known), out.name) == std::end(known)) {
        throw ConfigError("problem.name: unknown problem '" + out.name + "'");
    }
    out.center = get_real_array(j, "problem", "center", out.center);
    out.a = get_real_array(j, "problem", "a", out.a);
    out.b = get_real(j, "problem", "b", out.b);
    out.sigma = get_real(j, "problem", "sigma", out.sigma);
    if (!(out.sigma >= 0.0)) throw ConfigError("problem.sigma must be >= 0");
    const long dim = get_integer(j, "problem", "dimension", static_cast<long>(out.dimension));
    if (dim < 1) throw ConfigError("problem.dimension must be >= 1");
    out.dimension = static_cast<std::size_t>(dim);
    if (out.center.size() != out.a.size()) {
        throw ConfigError("problem.center and problem.a must have equal length");
    }
    return out;
}

DataConfig parse_data(const json& j) {
    DataConfig out;
    if (j.is_null()) return out;
    reject_unknown_keys(j, "data", {"source", "path", "columns", "binning"});
    out.source = get_text(j, "data", "source", out.source);
    if (out.source != "builtin" && out.source != "csv") {
        throw ConfigError("data.source must be 'builtin' or 'csv'");
    }
    out.path = get_text(j, "data", "path", out.path);
    if (out.source == "csv" && out.path.empty()) {
        throw ConfigError("data.path is required when data.source is 'csv'");
    }
    if (j.contains("columns")) {
        if (!j["columns"].is_array()) throw ConfigError("data.columns must be an array");
        out.columns.clear();
        for (const auto& c : j["columns"]) {
            if (!c.is_string()) throw ConfigError("data.columns must hold strings");
            out.columns.push_back(c.get<std::string>());
        }
        if (out.columns.empty()) throw ConfigError("data.columns must be nonempty");
    }
    if (j.contains("binning") && !j["binning"].is_null()) {
        const json& b = j["binning"];
        reject_unknown_keys(b, "data.binning", {"widths", "origins"});
        BinningSpec spec;
        spec.widths = get_real_array(b, "data.binning", "widths", {});
        spec.origins = get_real_array(b, "data.binning", "origins", {});
        if (spec.widths.empty()) throw ConfigError("data.binning.widths must be nonempty");
        for (double w : spec.widths) {
            if (!(w > 0.0)) throw ConfigError("data.binning.widths must be positive");
        }
        out.binning = std::move(spec);
    }
    return out;
}

ObjectiveConfig parse_objective(const json& j) {
    ObjectiveConfig out;
    if (j.is_null()) return out;
    reject_unknown_keys(j, "objective", {"mode", "nominal", "mu", "kind", "delta", "rho"});
    out.mode = get_text(j, "objective", "mode", out.mode);
    static const char* modes[] = {"deterministic", "empirical_mean", "mean_variance",
                                  "dro_penalized", "dro_constrained"};
    if (std::find(std::begin(modes), std::end(modes), out.mode) == std::end(modes)) {
        throw ConfigError("objective.mode: unknown mode '" + out.mode + "'");
    }
    out.nominal = get_real_array(j, "objective", "nominal", out.nominal);
    out.mu = get_real(j, "objective", "mu", out.mu);
    if (!(out.mu >= 0.0)) throw ConfigError("objective.mu must be >= 0");
    out.kind = get_text(j, "objective", "kind", out.kind);
    if (out.kind != "chi2" && out.kind != "kl" && out.kind != "burg") {
        throw ConfigError("objective.kind must be 'chi2', 'kl' or 'burg'");
    }
    out.delta = get_real(j, "objective", "delta", out.delta);
    if (!(out.delta > 0.0)) throw ConfigError("objective.delta must be > 0");
    out.rho = get_real(j, "objective", "rho", out.rho);
    if (!(out.rho >= 0.0)) throw ConfigError("objective.rho must be >= 0");
    return out;
}

OptimizerConfig parse_optimizer(const json& j) {
    OptimizerConfig out;
    if (j.is_null()) return out;
    reject_unknown_keys(j, "optimizer",
                        {"algorithm", "x0", "zeta0", "tau", "beta", "batch_size", "max_iters",
                         "stall_window", "seed", "momentum", "line_search"});
    out.algorithm = get_text(j, "optimizer", "algorithm", out.algorithm);
    if (out.algorithm != "gdam" && out.algorithm != "sgd") {
        throw ConfigError("optimizer.algorithm must be 'gdam' or 'sgd'");
    }
    out.x0 = get_real_array(j, "optimizer", "x0", out.x0);
    GdamConfig& g = out.gdam;
    g.zeta0 = get_real(j, "optimizer", "zeta0", g.zeta0);
    if (!(g.zeta0 >= 0.0) || g.zeta0 >= 1.0) throw ConfigError("optimizer.zeta0 must be in [0, 1)");
    g.tau = get_real(j, "optimizer", "tau", g.tau);
    if (!(g.tau > 0.0) || g.tau >= 1.0) throw ConfigError("optimizer.tau must be in (0, 1)");
    g.beta = get_real(j, "optimizer", "beta", g.beta);
    if (!(g.beta > 0.0)) throw ConfigError("optimizer.beta must be > 0");
    const long batch = get_integer(j, "optimizer", "batch_size",
                                   static_cast<long>(g.batch_size));
    if (batch < 1) throw ConfigError("optimizer.batch_size must be >= 1");
    g.batch_size = static_cast<std::size_t>(batch);
    g.max_iters = get_integer(j, "optimizer", "max_iters", g.max_iters);
    if (g.max_iters < 1) throw ConfigError("optimizer.max_iters must be >= 1");
    const long window = get_integer(j, "optimizer", "stall_window",
                                    static_cast<long>(g.stall_window));
    if (window < 1) throw ConfigError("optimizer.stall_window must be >= 1");
    g.stall_window = static_cast<std::size_t>(window);
    const long seed = get_integer(j, "optimizer", "seed", static_cast<long>(g.seed));
    if (seed < 0) throw ConfigError("optimizer.seed must be >= 0");
    g.seed = static_cast<std::uint64_t>(seed);
    g.momentum = get_real(j, "optimizer", "momentum", g.momentum);
    if (!(g.momentum >= 0.0) || g.momentum >= 1.0) {
        throw ConfigError("optimizer.momentum must be in [0, 1)");
    }
    g.line_search = get_boolean(j, "optimizer", "line_search", g.line_search);
    return out;
}

SweepConfig parse_sweep(const json& j) {
    reject_unknown_keys(j, "sweep", {"coordinate", "min", "max", "steps"});
    SweepConfig out;
    const long coord = get_integer(j, "sweep", "coordinate", 0);
    if (coord < 0) throw ConfigError("sweep.coordinate must be >= 0");
    out.coordinate = static_cast<std::size_t>(coord);
    if (!j.contains("min") || !j.contains("max")) {
        throw ConfigError("sweep.min and sweep.max are required");
    }
    out.min = get_real(j, "sweep", "min", 0.0);
    out.max = get_real(j, "sweep", "max", 0.0);
    if (!(out.max > out.min)) throw ConfigError("sweep.max must exceed sweep.min");
    out.steps = get_integer(j, "sweep", "steps", 2);
    if (out.steps < 2) throw ConfigError("sweep.steps must be >= 2");
    return out;
}

} // namespace

RunConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
    reject_unknown_keys(j, "config",
                        {"problem", "data", "objective", "optimizer", "output", "sweep",
                         "design"});
    RunConfig out;
    out.problem = parse_problem(j.value("problem", json()));
    out.data = parse_data(j.value("data", json()));
    out.objective = parse_objective(j.value("objective", json()));
    out.optimizer = parse_optimizer(j.value("optimizer", json()));
    if (j.contains("output")) {
        reject_unknown_keys(j["output"], "output", {"dir"});
        out.output_dir = get_text(j["output"], "output", "dir", out.output_dir);
    }
    if (j.contains("sweep") && !j["sweep"].is_null()) out.sweep = parse_sweep(j["sweep"]);
    if (j.contains("design") && !j["design"].is_null()) {
        reject_unknown_keys(j["design"], "design", {"x"});
        out.design_x = get_real_array(j["design"], "design", "x", {});
        if (out.design_x->empty()) throw ConfigError("design.x must be nonempty");
    }
    return out;
}

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

nlohmann::json to_json(const RunConfig& config) {
    json j;
    j["problem"] = {{"name", config.problem.name},
                    {"center", config.problem.center},
                    {"a", config.problem.a},
                    {"b", config.problem.b},
                    {"sigma", config.problem.sigma},
                    {"dimension", config.problem.dimension}};
    j["data"] = {{"source", config.data.source},
                 {"path", config.data.path},
                 {"columns", config.data.columns}};
    if (config.data.binning) {
        j["data"]["binning"] = {{"widths", config.data.binning->widths},
                                {"origins", config.data.binning->origins}};
    }
    j["objective"] = {{"mode", config.objective.mode}, {"nominal", config.objective.nominal},
                      {"mu", config.objective.mu},     {"kind", config.objective.kind},
                      {"delta", config.objective.delta}, {"rho", config.objective.rho}};
    const GdamConfig& g = config.optimizer.gdam;
    j["optimizer"] = {{"algorithm", config.optimizer.algorithm},
                      {"x0", config.optimizer.x0},
                      {"zeta0", g.zeta0},
                      {"tau", g.tau},
                      {"beta", g.beta},
                      {"batch_size", g.batch_size},
                      {"max_iters", g.max_iters},
                      {"stall_window", g.stall_window},
                      {"seed", g.seed},
                      {"momentum", g.momentum},
                      {"line_search", g.line_search}};
    j["output"] = {{"dir", config.output_dir}};
    if (config.sweep) {
        j["sweep"] = {{"coordinate", config.sweep->coordinate},
                      {"min", config.sweep->min},
                      {"max", config.sweep->max},
                      {"steps", config.sweep->steps}};
    }
    if (config.design_x) j["design"] = {{"x", *config.design_x}};
    return j;
}

std::shared_ptr<const StochasticProblem> make_problem(const ProblemConfig& config) {
    if (config.name == "toy_beyer") return toy_beyer();
    if (config.name == "constrained_quadratic") {
        return constrained_quadratic(config.center, config.a, config.b, config.sigma);
    }
    if (config.name == "airfoil_surrogate") return airfoil_surrogate(config.dimension);
    if (config.name == "corrupted_gradient_fixture") return corrupted_gradient_fixture();
    throw ConfigError("problem.name: unknown problem '" + config.name + "'");
}

EmpiricalDistribution make_distribution(const DataConfig& data,
                                        const StochasticProblem& problem) {
    if (data.source == "builtin") {
        return EmpiricalDistribution(problem.default_scenarios());
    }
    std::ifstream in(data.path);
    if (!in) throw ConfigError("data.path: cannot open '" + data.path + "'");
    ScenarioSet set = load_csv(in, data.columns);
    if (data.binning) set = bin_scenarios(set, *data.binning);
    return EmpiricalDistribution(std::make_shared<const ScenarioSet>(std::move(set)));
}

RobustnessSpec make_robustness(const ObjectiveConfig& objective,
                               const StochasticProblem& problem) {
    auto nominal = [&]() {
        if (objective.nominal.empty()) return problem.default_nominal();
        return Scenario{objective.nominal, 0};
    };
    DivergenceKind kind = DivergenceKind::Chi2;
    if (objective.kind == "kl") kind = DivergenceKind::KL;
    if (objective.kind == "burg") kind = DivergenceKind::Burg;

    if (objective.mode == "deterministic") return RobustnessSpec::deterministic(nominal());
    if (objective.mode == "empirical_mean") return RobustnessSpec::empirical_mean();
    if (objective.mode == "mean_variance") return RobustnessSpec::mean_variance(objective.mu);
    if (objective.mode == "dro_penalized") {
        return RobustnessSpec::dro_penalized(kind, objective.delta);
    }
    if (objective.mode == "dro_constrained") {
        return RobustnessSpec::dro_constrained(kind, objective.rho);
    }
    throw ConfigError("objective.mode: unknown mode '" + objective.mode + "'");
}

} // namespace drokit::cli
