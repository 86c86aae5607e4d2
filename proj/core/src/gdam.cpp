#include "drokit/gdam.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "drokit/errors.hpp"
#include "drokit/parallel.hpp"
#include "drokit/summation.hpp"

namespace drokit {

void GdamConfig::validate() const {
    if (!(zeta0 >= 0.0) || zeta0 >= 1.0) throw ParameterError("GdamConfig: zeta0 must be in [0, 1)");
    if (!(tau > 0.0) || tau >= 1.0) throw ParameterError("GdamConfig: tau must be in (0, 1)");
    if (!(beta > 0.0)) throw ParameterError("GdamConfig: beta must be > 0");
    if (batch_size < 1) throw ParameterError("GdamConfig: batch_size must be >= 1");
    if (max_iters < 1) throw ParameterError("GdamConfig: max_iters must be >= 1");
    if (stall_window < 1) throw ParameterError("GdamConfig: stall_window must be >= 1");
    if (!(momentum >= 0.0) || momentum >= 1.0) {
        throw ParameterError("GdamConfig: momentum must be in [0, 1)");
    }
}

std::string to_string(Termination reason) {
    switch (reason) {
        case Termination::MaxIters: return "max-iters";
        case Termination::Tolerance: return "tolerance";
        case Termination::ZetaFloor: return "zeta-floor";
        case Termination::StepCollapse: return "step-collapse";
    }
    return "unknown";
}

std::pair<double, std::vector<double>> barrier_value_gradient(std::span<const double> x,
                                                              const StochasticProblem& problem) {
    const std::size_t m = problem.constraint_count();
    CompensatedSum phi;
    std::vector<double> grad(problem.dimension(), 0.0);
    std::vector<CompensatedSum> grad_acc(problem.dimension());
    for (std::size_t i = 0; i < m; ++i) {
        const double g = problem.constraint(i, x);
        if (!(g < 0.0)) {
            throw FeasibilityError("barrier: constraint " + std::to_string(i) +
                                       " is not strictly satisfied (g = " + std::to_string(g) +
                                       ")",
                                   static_cast<int>(i));
        }
        phi.add(-std::log(-g));
        const std::vector<double> gg = problem.constraint_gradient(i, x);
        for (std::size_t j = 0; j < grad.size(); ++j) grad_acc[j].add(gg[j] / (-g));
    }
    for (std::size_t j = 0; j < grad.size(); ++j) grad[j] = grad_acc[j].value();
    return {phi.value(), std::move(grad)};
}

std::optional<std::vector<double>> gdam_direction(std::span<const double> grad_f,
                                                  std::span<const double> grad_phi,
                                                  double zeta) {
    const double nf = norm2(grad_f);
    if (nf == 0.0) return std::nullopt;
    std::vector<double> s(grad_f.size());
    const double np = grad_phi.empty() ? 0.0 : norm2(grad_phi);
    for (std::size_t j = 0; j < s.size(); ++j) {
        s[j] = -grad_f[j] / nf;
        if (np > 0.0) s[j] -= zeta * grad_phi[j] / np;
    }
    return s;
}

std::optional<double> implied_barrier_parameter(std::span<const double> grad_f,
                                                std::span<const double> grad_phi, double zeta) {
    const double np = norm2(grad_phi);
    if (np == 0.0) return std::nullopt;
    return zeta * norm2(grad_f) / np;
}

// ---------------------------------------------------------------------------
// Step machinery
// ---------------------------------------------------------------------------

namespace {

bool strictly_feasible(const StochasticProblem& problem, std::span<const double> x) {
    for (std::size_t i = 0; i < problem.constraint_count(); ++i) {
        if (!(problem.constraint(i, x) < 0.0)) return false;
    }
    return true;
}

struct StepResult {
    std::vector<double> x;
    double length = 0.0;
    bool adjusted = false;
    bool collapsed = false;
};

std::vector<double> propose(const StochasticProblem& problem, std::span<const double> x,
                            std::span<const double> unit, double length) {
    std::vector<double> cand(x.begin(), x.end());
    for (std::size_t j = 0; j < cand.size(); ++j) cand[j] += length * unit[j];
    if (const auto box = problem.feasible_box()) box->clip(cand);
    return cand;
}

// Largest halved step along `unit` (starting from `length`) that keeps strict
// feasibility; fails after `max_halvings`.
std::optional<std::pair<std::vector<double>, double>> halved_feasible_step(
    const StochasticProblem& problem, std::span<const double> x, std::span<const double> unit,
    double length, int max_halvings) {
    double local = length;
    for (int h = 0; h <= max_halvings; ++h, local *= 0.5) {
        std::vector<double> cand = propose(problem, x, unit, local);
        if (strictly_feasible(problem, cand)) return std::make_pair(std::move(cand), local);
    }
    return std::nullopt;
}

/** Fixed-length update with the feasibility guard.
 *
 *  A trial step crossing the boundary is rejected and retried at half length
 *  (locally; beta itself is untouched). When halving jams, i.e. only a
 *  negligible fraction of beta fits before the boundary, the infeasible
 *  normal components are removed and the remaining tangential part of the
 *  direction is stepped instead, so the iterate can slide along an active
 *  constraint instead of stalling against it.
 */
StepResult take_step(const StochasticProblem& problem, std::span<const double> x,
                     std::span<const double> direction, double beta) {
    StepResult result;
    const double ns = norm2(direction);
    if (ns == 0.0) {
        result.x.assign(x.begin(), x.end());
        result.collapsed = true;
        return result;
    }
    std::vector<double> unit(direction.size());
    for (std::size_t j = 0; j < unit.size(); ++j) unit[j] = direction[j] / ns;

    auto finish = [&](std::vector<double> cand) {
        std::vector<double> diff(cand.size());
        for (std::size_t j = 0; j < cand.size(); ++j) diff[j] = cand[j] - x[j];
        result.length = norm2(diff);
        result.adjusted = std::abs(result.length - beta) > 1e-9 * beta;
        result.x = std::move(cand);
    };

    auto direct = halved_feasible_step(problem, x, unit, beta, 40);
    if (direct && direct->second > beta * 0x1.0p-12) {
        finish(std::move(direct->first));
        return result;
    }

    // Jammed against the boundary: drop the inward normal components of the
    // blocked constraints and step the tangential remainder.
    std::vector<double> tangent = unit;
    const std::vector<double> full = propose(problem, x, unit, beta);
    for (std::size_t i = 0; i < problem.constraint_count(); ++i) {
        if (problem.constraint(i, full) < 0.0) continue;
        std::vector<double> n = problem.constraint_gradient(i, x);
        const double nn = norm2(n);
        if (nn == 0.0) continue;
        for (double& v : n) v /= nn;
        const double inward = compensated_dot(tangent, n);
        if (inward > 0.0) {
            for (std::size_t j = 0; j < tangent.size(); ++j) tangent[j] -= inward * n[j];
        }
    }
    const double nt = norm2(tangent);
    if (nt > 1e-12) {
        std::vector<double> tunit(tangent.size());
        for (std::size_t j = 0; j < tangent.size(); ++j) tunit[j] = tangent[j] / nt;
        auto slide = halved_feasible_step(problem, x, tunit, beta * nt, 40);
        if (slide && (!direct || slide->second > direct->second)) {
            finish(std::move(slide->first));
            result.adjusted = true;
            return result;
        }
    }
    if (direct) {
        finish(std::move(direct->first));
        result.adjusted = true;
        return result;
    }
    result.x.assign(x.begin(), x.end());
    result.collapsed = true;
    return result;
}

// Windowed descent monitor feeding the zeta relaxation and, for the
// deterministic runner, the stall termination. Differences are paired
// (same-batch) objective changes across one step.
class DescentMonitor {
public:
    explicit DescentMonitor(std::size_t window) : window_(window) {}

    // Returns {should_relax, windowed_change} once a full window exists.
    std::optional<std::pair<bool, double>> push(double diff) {
        diffs_.push_back(diff);
        if (diffs_.size() > window_) diffs_.pop_front();
        if (diffs_.size() < window_) return std::nullopt;
        CompensatedSum acc;
        for (double d : diffs_) acc.add(d);
        const double change = acc.value();
        return std::make_pair(change > 0.0, change);
    }

private:
    std::size_t window_;
    std::deque<double> diffs_;
};

std::vector<double> start_point(const StochasticProblem& problem, std::span<const double> x0) {
    if (x0.size() != problem.dimension()) {
        throw ContractError(problem.name() + ": start point dimension mismatch");
    }
    std::vector<double> x(x0.begin(), x0.end());
    if (const auto box = problem.feasible_box()) {
        if (!box->contains(x)) {
            throw FeasibilityError(problem.name() + ": start point outside the feasible box");
        }
    }
    for (std::size_t i = 0; i < problem.constraint_count(); ++i) {
        const double g = problem.constraint(i, x);
        if (!(g < 0.0)) {
            throw FeasibilityError(problem.name() + ": start point violates constraint " +
                                       std::to_string(i),
                                   static_cast<int>(i));
        }
    }
    return x;
}

std::vector<double> constraint_values(const StochasticProblem& problem,
                                      std::span<const double> x) {
    std::vector<double> g(problem.constraint_count());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = problem.constraint(i, x);
    return g;
}

void smooth_direction(std::vector<double>& carry, std::vector<double>& s, double momentum) {
    if (momentum <= 0.0) return;
    if (carry.empty()) {
        carry = s;
        return;
    }
    for (std::size_t j = 0; j < s.size(); ++j) {
        carry[j] = momentum * carry[j] + (1.0 - momentum) * s[j];
        s[j] = carry[j];
    }
}

constexpr double kZetaFloor = 1e-6;
constexpr double kStallTolerance = 1e-12;

} // namespace

// ---------------------------------------------------------------------------
// Deterministic GDAM
// ---------------------------------------------------------------------------

OptimizerTrace run_deterministic_gdam(const StochasticProblem& problem,
                                      const RobustnessSpec& spec, const GdamConfig& config,
                                      std::span<const double> x0) {
    if (spec.mode != RobustnessSpec::Mode::Deterministic) {
        throw ContractError("run_deterministic_gdam: spec must be in deterministic mode");
    }
    config.validate();
    std::vector<double> x = start_point(problem, x0);
    const bool has_constraints = problem.constraint_count() > 0;

    OptimizerTrace trace;
    DescentMonitor monitor(config.stall_window);
    std::vector<double> carry;
    double zeta = config.zeta0;

    for (long k = 0; k < config.max_iters; ++k) {
        const double f = problem.loss(x, spec.nominal);
        const std::vector<double> grad_f = problem.loss_gradient(x, spec.nominal);
        std::vector<double> grad_phi;
        if (has_constraints) grad_phi = barrier_value_gradient(x, problem).second;

        IterateRecord record;
        record.k = k;
        record.x = x;
        record.objective_estimate = f;
        record.constraint_values = constraint_values(problem, x);
        record.zeta = zeta;
        record.implied_eta = implied_barrier_parameter(grad_f, grad_phi, zeta).value_or(0.0);

        auto direction = gdam_direction(grad_f, grad_phi, zeta);
        if (!direction) {
            trace.records.push_back(std::move(record));
            trace.reason = Termination::Tolerance;
            trace.final_x = x;
            return trace;
        }
        smooth_direction(carry, *direction, config.momentum);

        double beta = config.beta;
        if (config.line_search) {
            const double ns = norm2(*direction);
            for (int h = 0; h < 8 && ns > 0.0; ++h) {
                std::vector<double> cand = propose(problem, x, *direction, beta / ns);
                if (strictly_feasible(problem, cand) &&
                    problem.loss(cand, spec.nominal) < f) {
                    break;
                }
                beta *= 0.5;
            }
        }

        StepResult step = take_step(problem, x, *direction, beta);
        record.step_length = step.length;
        record.step_adjusted = step.adjusted;
        trace.records.push_back(std::move(record));
        if (step.collapsed || step.length < 1e-12) {
            trace.reason = Termination::StepCollapse;
            trace.final_x = x;
            return trace;
        }
        const double f_new = problem.loss(step.x, spec.nominal);
        x = std::move(step.x);

        if (const auto verdict = monitor.push(f_new - f)) {
            if (std::abs(verdict->second) < kStallTolerance) {
                trace.reason = Termination::Tolerance;
                trace.final_x = x;
                return trace;
            }
            if (verdict->first) {
                zeta *= config.tau;
                if (zeta < kZetaFloor) {
                    trace.reason = Termination::ZetaFloor;
                    trace.final_x = x;
                    return trace;
                }
            }
        }
    }
    trace.reason = Termination::MaxIters;
    trace.final_x = x;
    return trace;
}

// ---------------------------------------------------------------------------
// Stochastic GDAM
// ---------------------------------------------------------------------------

OptimizerTrace run_stochastic_gdam(const StochasticProblem& problem,
                                   const EmpiricalDistribution& dist,
                                   const RobustnessSpec& spec, const GdamConfig& config,
                                   std::span<const double> x0) {
    if (spec.mode == RobustnessSpec::Mode::Deterministic) {
        throw ContractError("run_stochastic_gdam: use run_deterministic_gdam for the "
                            "deterministic objective");
    }
    if (dist.size() == 0) throw ContractError("run_stochastic_gdam: empty distribution");
    config.validate();
    std::vector<double> x = start_point(problem, x0);
    const bool has_constraints = problem.constraint_count() > 0;

    OptimizerTrace trace;
    DescentMonitor monitor(config.stall_window);
    std::vector<double> carry;
    double zeta = config.zeta0;
    Rng rng(config.seed);

    for (long k = 0; k < config.max_iters; ++k) {
        const std::vector<std::size_t> batch = sample_batch(dist, config.batch_size, rng);
        std::vector<Scenario> scenarios;
        scenarios.reserve(batch.size());
        for (std::size_t idx : batch) scenarios.push_back(dist.set().scenario(idx));

        std::vector<double> grad_phi;
        if (has_constraints) grad_phi = barrier_value_gradient(x, problem).second;
        const double nphi = grad_phi.empty() ? 0.0 : norm2(grad_phi);

        const ObjectiveReport report = robust_objective(problem, x, scenarios, spec);
        CompensatedSum mean_acc;
        for (double fl : report.per_scenario_losses) mean_acc.add(fl);
        const double batch_mean =
            mean_acc.value() / static_cast<double>(report.per_scenario_losses.size());

        // Direction: line 5 of the stochastic scheme averages per-sample GDAM
        // directions for the separable empirical-mean estimate; the coupled
        // estimators feed their batch-level gradient into a single direction.
        std::vector<double> direction(problem.dimension(), 0.0);
        bool stationary = false;
        if (spec.mode == RobustnessSpec::Mode::EmpiricalMean) {
            std::vector<std::vector<double>> grads(scenarios.size());
            parallel_for_index(scenarios.size(), [&](std::size_t j) {
                grads[j] = problem.loss_gradient(x, scenarios[j]);
            });
            std::vector<CompensatedSum> acc(problem.dimension());
            bool any = false;
            for (std::size_t j = 0; j < grads.size(); ++j) {
                const double ng = norm2(grads[j]);
                for (std::size_t c = 0; c < acc.size(); ++c) {
                    double term = 0.0;
                    if (ng > 0.0) {
                        term -= grads[j][c] / ng;
                        any = true;
                    }
                    if (nphi > 0.0) term -= zeta * grad_phi[c] / nphi;
                    acc[c].add(term);
                }
            }
            for (std::size_t c = 0; c < acc.size(); ++c) {
                direction[c] = acc[c].value() / static_cast<double>(grads.size());
            }
            stationary = !any && nphi == 0.0;
        } else {
            auto dir = gdam_direction(report.gradient, grad_phi, zeta);
            if (!dir) {
                stationary = true;
            } else {
                direction = std::move(*dir);
            }
        }

        IterateRecord record;
        record.k = k;
        record.x = x;
        record.objective_estimate = report.value;
        record.constraint_values = constraint_values(problem, x);
        record.zeta = zeta;
        record.batch = batch;
        record.implied_eta =
            implied_barrier_parameter(report.gradient, grad_phi, zeta).value_or(0.0);

        if (stationary || norm2(direction) == 0.0) {
            trace.records.push_back(std::move(record));
            trace.reason = Termination::Tolerance;
            trace.final_x = x;
            return trace;
        }
        smooth_direction(carry, direction, config.momentum);

        auto batch_mean_at = [&](std::span<const double> at) {
            std::vector<double> losses(scenarios.size(), 0.0);
            parallel_for_index(scenarios.size(), [&](std::size_t j) {
                losses[j] = problem.loss(at, scenarios[j]);
            });
            CompensatedSum acc;
            for (double fl : losses) acc.add(fl);
            return acc.value() / static_cast<double>(losses.size());
        };

        double beta = config.beta;
        if (config.line_search) {
            const double ns = norm2(direction);
            for (int h = 0; h < 8 && ns > 0.0; ++h) {
                std::vector<double> cand = propose(problem, x, direction, beta / ns);
                if (strictly_feasible(problem, cand) && batch_mean_at(cand) < batch_mean) break;
                beta *= 0.5;
            }
        }

        StepResult step = take_step(problem, x, direction, beta);
        record.step_length = step.length;
        record.step_adjusted = step.adjusted;
        trace.records.push_back(std::move(record));
        if (step.collapsed || step.length < 1e-12) {
            trace.reason = Termination::StepCollapse;
            trace.final_x = x;
            return trace;
        }
        // Same-batch comparison across the step; a fresh batch is drawn next
        // iteration.
        const double mean_after = batch_mean_at(step.x);
        x = std::move(step.x);

        if (const auto verdict = monitor.push(mean_after - batch_mean)) {
            if (verdict->first) {
                zeta *= config.tau;
                if (zeta < kZetaFloor) {
                    trace.reason = Termination::ZetaFloor;
                    trace.final_x = x;
                    return trace;
                }
            }
        }
    }
    trace.reason = Termination::MaxIters;
    trace.final_x = x;
    return trace;
}

// ---------------------------------------------------------------------------
// SGD baseline
// ---------------------------------------------------------------------------

OptimizerTrace run_sgd(const StochasticProblem& problem, const EmpiricalDistribution& dist,
                       const RobustnessSpec& spec, const GdamConfig& config,
                       std::span<const double> x0) {
    if (problem.constraint_count() > 0) {
        throw ContractError("run_sgd: inequality-constrained problems are unsupported; "
                            "use run_stochastic_gdam");
    }
    if (spec.mode == RobustnessSpec::Mode::Deterministic) {
        throw ContractError("run_sgd: spec must be a stochastic objective mode");
    }
    config.validate();
    std::vector<double> x = start_point(problem, x0);

    OptimizerTrace trace;
    Rng rng(config.seed);
    for (long k = 0; k < config.max_iters; ++k) {
        const std::vector<std::size_t> batch = sample_batch(dist, config.batch_size, rng);
        std::vector<Scenario> scenarios;
        scenarios.reserve(batch.size());
        for (std::size_t idx : batch) scenarios.push_back(dist.set().scenario(idx));

        const ObjectiveReport report = robust_objective(problem, x, scenarios, spec);

        IterateRecord record;
        record.k = k;
        record.x = x;
        record.objective_estimate = report.value;
        record.zeta = 0.0;
        record.batch = batch;
        record.implied_eta = 0.0;

        const double ng = norm2(report.gradient);
        if (ng == 0.0) {
            trace.records.push_back(std::move(record));
            trace.reason = Termination::Tolerance;
            trace.final_x = x;
            return trace;
        }
        std::vector<double> cand(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) {
            cand[j] = x[j] - (config.beta / ng) * report.gradient[j];
        }
        if (const auto box = problem.feasible_box()) box->clip(cand);
        std::vector<double> diff(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) diff[j] = cand[j] - x[j];
        const double step_length = norm2(diff);
        record.step_length = step_length;
        record.step_adjusted = std::abs(step_length - config.beta) > 1e-9 * config.beta;
        trace.records.push_back(std::move(record));
        if (step_length == 0.0) {
            trace.reason = Termination::Tolerance;
            trace.final_x = x;
            return trace;
        }
        x = std::move(cand);
    }
    trace.reason = Termination::MaxIters;
    trace.final_x = x;
    return trace;
}

} // namespace drokit
