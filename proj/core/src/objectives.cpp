#include "drokit/objectives.hpp"

#include <cmath>
#include <cstdlib>
#include <future>
#include <thread>

#include "drokit/dro_inner.hpp"
#include "drokit/errors.hpp"
#include "drokit/parallel.hpp"
#include "drokit/summation.hpp"

namespace drokit {

// ---------------------------------------------------------------------------
// Parallel fan-out
// ---------------------------------------------------------------------------

std::size_t effective_thread_count() {
    static const std::size_t count = [] {
        if (const char* env = std::getenv("DROKIT_THREADS")) {
            const long v = std::atol(env);
            if (v >= 1) return static_cast<std::size_t>(v);
            return static_cast<std::size_t>(1);
        }
        const unsigned hw = std::thread::hardware_concurrency();
        return static_cast<std::size_t>(hw == 0 ? 1 : (hw > 8 ? 8 : hw));
    }();
    return count;
}

void parallel_for_index(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = effective_thread_count();
    if (workers <= 1 || n < 16) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t chunks = workers < n ? workers : n;
    std::vector<std::future<void>> futures;
    futures.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t begin = n * c / chunks;
        const std::size_t end = n * (c + 1) / chunks;
        futures.push_back(std::async(std::launch::async, [begin, end, &fn] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        }));
    }
    for (auto& f : futures) f.get(); // rethrows worker exceptions
}

// ---------------------------------------------------------------------------
// Box and problem defaults
// ---------------------------------------------------------------------------

bool Box::contains(std::span<const double> x, double margin) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lower[i] + margin || x[i] > upper[i] - margin) return false;
    }
    return true;
}

void Box::clip(std::vector<double>& x) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lower[i]) x[i] = lower[i];
        if (x[i] > upper[i]) x[i] = upper[i];
    }
}

double StochasticProblem::constraint(std::size_t, std::span<const double>) const {
    throw ContractError(name() + ": constraint index out of range");
}

std::vector<double> StochasticProblem::constraint_gradient(std::size_t,
                                                           std::span<const double>) const {
    throw ContractError(name() + ": constraint index out of range");
}

Scenario StochasticProblem::default_nominal() const {
    const auto set = default_scenarios();
    // Count-weighted center of the default support.
    std::vector<double> center(set->dimension(), 0.0);
    for (std::size_t d = 0; d < set->dimension(); ++d) {
        CompensatedSum acc;
        for (std::size_t i = 0; i < set->size(); ++i) {
            acc.add(static_cast<double>(set->count(i)) * set->scenario(i).values[d]);
        }
        center[d] = acc.value() / static_cast<double>(set->total());
    }
    return Scenario{std::move(center), 0};
}

// ---------------------------------------------------------------------------
// RobustnessSpec constructors
// ---------------------------------------------------------------------------

RobustnessSpec RobustnessSpec::deterministic(Scenario nominal) {
    RobustnessSpec spec;
    spec.mode = Mode::Deterministic;
    spec.nominal = std::move(nominal);
    return spec;
}

RobustnessSpec RobustnessSpec::empirical_mean() {
    RobustnessSpec spec;
    spec.mode = Mode::EmpiricalMean;
    return spec;
}

RobustnessSpec RobustnessSpec::mean_variance(double mu) {
    if (!(mu >= 0.0)) throw ParameterError("RobustnessSpec: mu must be >= 0");
    RobustnessSpec spec;
    spec.mode = Mode::MeanVariance;
    spec.mu = mu;
    return spec;
}

RobustnessSpec RobustnessSpec::dro_penalized(DivergenceKind kind, double delta) {
    if (!(delta > 0.0)) throw ParameterError("RobustnessSpec: delta must be > 0");
    RobustnessSpec spec;
    spec.mode = Mode::DroPenalized;
    spec.kind = kind;
    spec.delta = delta;
    return spec;
}

RobustnessSpec RobustnessSpec::dro_constrained(DivergenceKind kind, double rho) {
    if (!(rho >= 0.0)) throw ParameterError("RobustnessSpec: rho must be >= 0");
    RobustnessSpec spec;
    spec.mode = Mode::DroConstrained;
    spec.kind = kind;
    spec.rho = rho;
    return spec;
}

// ---------------------------------------------------------------------------
// Estimators
// ---------------------------------------------------------------------------

namespace {

struct ScenarioView {
    std::size_t count = 0;
    std::function<const Scenario&(std::size_t)> at;
};

void fill_losses_and_gradients(const StochasticProblem& problem, std::span<const double> x,
                               const ScenarioView& view, std::vector<double>& losses,
                               std::vector<std::vector<double>>& gradients) {
    losses.assign(view.count, 0.0);
    gradients.assign(view.count, {});
    parallel_for_index(view.count, [&](std::size_t i) {
        const Scenario& xi = view.at(i);
        losses[i] = problem.loss(x, xi);
        gradients[i] = problem.loss_gradient(x, xi);
    });
}

ObjectiveReport deterministic_report(const StochasticProblem& problem,
                                     std::span<const double> x, const Scenario& nominal) {
    ObjectiveReport report;
    report.value = problem.loss(x, nominal);
    report.gradient = problem.loss_gradient(x, nominal);
    report.per_scenario_losses = {report.value};
    report.mean = report.value;
    report.variance = 0.0;
    return report;
}

ObjectiveReport evaluate(const StochasticProblem& problem, std::span<const double> x,
                         const ScenarioView& view, std::span<const double> weights,
                         const RobustnessSpec& spec) {
    if (spec.mode == RobustnessSpec::Mode::Deterministic) {
        return deterministic_report(problem, x, spec.nominal);
    }
    if (view.count == 0) throw ContractError("objective: empty scenario batch");

    ObjectiveReport report;
    std::vector<std::vector<double>> gradients;
    fill_losses_and_gradients(problem, x, view, report.per_scenario_losses, gradients);
    const std::span<const double> losses(report.per_scenario_losses);
    const std::size_t dim = problem.dimension();

    CompensatedSum mean_acc;
    for (std::size_t i = 0; i < view.count; ++i) mean_acc.add(weights[i] * losses[i]);
    report.mean = mean_acc.value();
    CompensatedSum var_acc;
    for (std::size_t i = 0; i < view.count; ++i) {
        const double d = losses[i] - report.mean;
        var_acc.add(weights[i] * d * d);
    }
    report.variance = std::max(0.0, var_acc.value());

    switch (spec.mode) {
        case RobustnessSpec::Mode::EmpiricalMean: {
            report.value = report.mean;
            report.gradient.assign(dim, 0.0);
            for (std::size_t j = 0; j < dim; ++j) {
                CompensatedSum acc;
                for (std::size_t i = 0; i < view.count; ++i) {
                    acc.add(weights[i] * gradients[i][j]);
                }
                report.gradient[j] = acc.value();
            }
            break;
        }
        case RobustnessSpec::Mode::MeanVariance: {
            report.value = report.mean + spec.mu * report.variance;
            report.gradient.assign(dim, 0.0);
            for (std::size_t j = 0; j < dim; ++j) {
                CompensatedSum acc;
                for (std::size_t i = 0; i < view.count; ++i) {
                    const double centered = losses[i] - report.mean;
                    acc.add(weights[i] * gradients[i][j] * (1.0 + 2.0 * spec.mu * centered));
                }
                report.gradient[j] = acc.value();
            }
            break;
        }
        case RobustnessSpec::Mode::DroPenalized:
        case RobustnessSpec::Mode::DroConstrained: {
            const InnerSpec inner = spec.mode == RobustnessSpec::Mode::DroPenalized
                                        ? InnerSpec::penalized(spec.kind, spec.delta)
                                        : InnerSpec::constrained(spec.kind, spec.rho);
            DroValueGradient vg = dro_value_and_gradient(losses, gradients, weights, inner);
            report.value = vg.psi;
            report.gradient = std::move(vg.gradient);
            report.worst_case_q = std::move(vg.solution.q_star);
            report.clamped = std::move(vg.solution.clamped);
            break;
        }
        case RobustnessSpec::Mode::Deterministic:
            break; // handled above
    }
    return report;
}

} // namespace

double multipoint(std::span<const double> weights, const std::vector<Scenario>& points,
                  const StochasticProblem& problem, std::span<const double> x) {
    if (weights.size() != points.size()) {
        throw ContractError("multipoint: weights and points must have equal length");
    }
    for (double w : weights) {
        if (!(w >= 0.0)) throw ContractError("multipoint: weights must be nonnegative");
    }
    std::vector<double> losses(points.size(), 0.0);
    parallel_for_index(points.size(),
                       [&](std::size_t i) { losses[i] = problem.loss(x, points[i]); });
    CompensatedSum acc;
    for (std::size_t i = 0; i < points.size(); ++i) acc.add(weights[i] * losses[i]);
    return acc.value();
}

ObjectiveReport empirical_mean(const StochasticProblem& problem, std::span<const double> x,
                               const EmpiricalDistribution& dist) {
    return robust_objective(problem, x, dist, RobustnessSpec::empirical_mean());
}

ObjectiveReport mean_variance(const StochasticProblem& problem, std::span<const double> x,
                              const EmpiricalDistribution& dist, double mu) {
    return robust_objective(problem, x, dist, RobustnessSpec::mean_variance(mu));
}

ObjectiveReport robust_objective(const StochasticProblem& problem, std::span<const double> x,
                                 const EmpiricalDistribution& dist,
                                 const RobustnessSpec& spec) {
    ScenarioView view{dist.size(),
                      [&dist](std::size_t i) -> const Scenario& { return dist.set().scenario(i); }};
    return evaluate(problem, x, view, dist.p(), spec);
}

ObjectiveReport robust_objective(const StochasticProblem& problem, std::span<const double> x,
                                 const std::vector<Scenario>& batch,
                                 const RobustnessSpec& spec) {
    if (batch.empty() && spec.mode != RobustnessSpec::Mode::Deterministic) {
        throw ContractError("robust_objective: batch must be nonempty");
    }
    const std::vector<double> weights(batch.size(), 1.0 / static_cast<double>(batch.size()));
    ScenarioView view{batch.size(),
                      [&batch](std::size_t i) -> const Scenario& { return batch[i]; }};
    return evaluate(problem, x, view, weights, spec);
}

double finite_difference_check(const StochasticProblem& problem, std::span<const double> x,
                               double h) {
    if (!(h > 0.0)) throw ParameterError("finite_difference_check: h must be > 0");
    if (const auto box = problem.feasible_box(); box && !box->contains(x, h)) {
        throw ParameterError(
            "finite_difference_check: x must sit inside the feasible box with margin >= h");
    }

    const std::size_t dim = problem.dimension();
    std::vector<double> xp(x.begin(), x.end());
    std::vector<double> xm(x.begin(), x.end());
    double worst = 0.0;

    auto check_one = [&](auto&& value_fn, const std::vector<double>& analytic) {
        for (std::size_t j = 0; j < dim; ++j) {
            xp[j] = x[j] + h;
            xm[j] = x[j] - h;
            const double fd = (value_fn(xp) - value_fn(xm)) / (2.0 * h);
            xp[j] = x[j];
            xm[j] = x[j];
            const double err = std::abs(fd - analytic[j]) / std::max(1.0, std::abs(analytic[j]));
            if (err > worst) worst = err;
        }
    };

    const auto set = problem.default_scenarios();
    for (std::size_t i = 0; i < set->size(); ++i) {
        const Scenario& xi = set->scenario(i);
        check_one([&](const std::vector<double>& at) { return problem.loss(at, xi); },
                  problem.loss_gradient(x, xi));
    }
    for (std::size_t c = 0; c < problem.constraint_count(); ++c) {
        check_one([&](const std::vector<double>& at) { return problem.constraint(c, at); },
                  problem.constraint_gradient(c, x));
    }
    return worst;
}

} // namespace drokit
