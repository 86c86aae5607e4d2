#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "drokit/divergence.hpp"
#include "drokit/scenario.hpp"

namespace drokit {

/// Per-coordinate bounds on the design vector. Enforced by optimizers
/// through proposal clipping, not through barrier terms.
struct Box {
    std::vector<double> lower;
    std::vector<double> upper;

    bool contains(std::span<const double> x, double margin = 0.0) const;
    void clip(std::vector<double>& x) const;
};

/** A stochastic design problem: a loss f(x; xi) with analytic gradient,
 *  optional smooth inequality constraints g_i(x) <= 0, and an optional
 *  feasible box. Implementations are immutable and shareable across threads.
 */
class StochasticProblem {
public:
    virtual ~StochasticProblem() = default;

    virtual std::string name() const = 0;
    virtual std::size_t dimension() const = 0;

    virtual double loss(std::span<const double> x, const Scenario& xi) const = 0;
    virtual std::vector<double> loss_gradient(std::span<const double> x,
                                              const Scenario& xi) const = 0;

    virtual std::size_t constraint_count() const { return 0; }
    virtual double constraint(std::size_t i, std::span<const double> x) const;
    virtual std::vector<double> constraint_gradient(std::size_t i,
                                                    std::span<const double> x) const;

    virtual std::optional<Box> feasible_box() const { return std::nullopt; }

    // Defaults used by the CLI when the config does not override them.
    virtual std::vector<double> default_start() const = 0;
    virtual std::shared_ptr<const ScenarioSet> default_scenarios() const = 0;
    virtual Scenario default_nominal() const;
};

/// Objective mode selector: plain deterministic loss at a nominal scenario,
/// empirical mean, mean-variance with weight mu, or worst-case DRO with the
/// divergence as penalty (delta) or hard ball (rho).
struct RobustnessSpec {
    enum class Mode { Deterministic, EmpiricalMean, MeanVariance, DroPenalized, DroConstrained };

    Mode mode = Mode::EmpiricalMean;
    Scenario nominal;                        // Deterministic
    double mu = 0.0;                         // MeanVariance, >= 0
    DivergenceKind kind = DivergenceKind::Chi2;
    double delta = 1.0;                      // DroPenalized, > 0
    double rho = 0.0;                        // DroConstrained, >= 0

    static RobustnessSpec deterministic(Scenario nominal);
    static RobustnessSpec empirical_mean();
    static RobustnessSpec mean_variance(double mu);
    static RobustnessSpec dro_penalized(DivergenceKind kind, double delta);
    static RobustnessSpec dro_constrained(DivergenceKind kind, double rho);

    bool is_dro() const {
        return mode == Mode::DroPenalized || mode == Mode::DroConstrained;
    }
};

/// Everything an estimator call produces: the objective value and gradient
/// plus the per-scenario losses and distributional diagnostics behind them.
/// worst_case_q (and the chi-square clamp flags) are present iff a DRO mode.
struct ObjectiveReport {
    double value = 0.0;
    std::vector<double> gradient;
    std::vector<double> per_scenario_losses;
    std::optional<std::vector<double>> worst_case_q;
    std::vector<char> clamped;
    double mean = 0.0;
    double variance = 0.0;
};

/// Weighted multi-point objective sum_i w_i f(x; xi_i), w_i >= 0.
double multipoint(std::span<const double> weights, const std::vector<Scenario>& points,
                  const StochasticProblem& problem, std::span<const double> x);

ObjectiveReport empirical_mean(const StochasticProblem& problem, std::span<const double> x,
                               const EmpiricalDistribution& dist);

/// value = mean + mu * variance (population weighting by p); the gradient
/// uses grad V = 2 E[(f - E f) grad f].
ObjectiveReport mean_variance(const StochasticProblem& problem, std::span<const double> x,
                              const EmpiricalDistribution& dist, double mu);

/// Dispatch over all objective modes against a full empirical distribution.
ObjectiveReport robust_objective(const StochasticProblem& problem, std::span<const double> x,
                                 const EmpiricalDistribution& dist, const RobustnessSpec& spec);

/// Same dispatch against a sampled batch (plug-in estimator: uniform weights
/// over the drawn scenarios, duplicates counted by multiplicity).
ObjectiveReport robust_objective(const StochasticProblem& problem, std::span<const double> x,
                                 const std::vector<Scenario>& batch,
                                 const RobustnessSpec& spec);

/** Central-difference validation of every analytic gradient the problem
 *  exposes (loss gradients across the default scenario set and all constraint
 *  gradients). Returns the worst relative error. x must sit inside the
 *  feasible box with margin >= h.
 */
double finite_difference_check(const StochasticProblem& problem, std::span<const double> x,
                               double h);

} // namespace drokit
