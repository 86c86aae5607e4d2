#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "drokit/objectives.hpp"

namespace drokit {

/// Hyperparameters shared by the constrained descent runners.
struct GdamConfig {
    double zeta0 = 0.9;          // barrier mixing weight, in [0, 1)
    double tau = 0.9;            // zeta relaxation factor, in (0, 1)
    double beta = 1e-3;          // fixed step length, > 0
    std::size_t batch_size = 16; // >= 1
    long max_iters = 10000;
    std::size_t stall_window = 1; // window 1 is the raw one-step comparison
    std::uint64_t seed = 0;
    double momentum = 0.0;       // direction smoothing, in [0, 1); 0 disables
    bool line_search = false;

    void validate() const;
};

/// Snapshot of iteration k: the (strictly feasible) iterate, the objective
/// estimate used for descent monitoring, and the step taken from it.
/// step_adjusted marks feasibility-halved, boundary-sliding or box-clipped
/// steps, whose length differs from beta.
struct IterateRecord {
    long k = 0;
    std::vector<double> x;
    double objective_estimate = 0.0;
    std::vector<double> constraint_values;
    double zeta = 0.0;
    double step_length = 0.0;
    bool step_adjusted = false;
    std::vector<std::size_t> batch;
    double implied_eta = 0.0;
};

enum class Termination { MaxIters, Tolerance, ZetaFloor, StepCollapse };

std::string to_string(Termination reason);

struct OptimizerTrace {
    std::vector<IterateRecord> records;
    std::vector<double> final_x;
    Termination reason = Termination::MaxIters;
};

/** Logarithmic barrier of the problem's inequality constraints,
 *
 *      Phi(x) = -sum_i log(-g_i(x)),    grad Phi = sum_i grad g_i / (-g_i),
 *
 *  defined on the strictly feasible set. Throws FeasibilityError carrying the
 *  first violating index when some g_i(x) >= 0.
 */
std::pair<double, std::vector<double>> barrier_value_gradient(std::span<const double> x,
                                                              const StochasticProblem& problem);

/** Interior-point descent direction
 *
 *      s_zeta = -grad f / ||grad f|| - zeta * grad Phi / ||grad Phi||.
 *
 *  Returns nullopt when grad f vanishes (stationarity; the caller stops).
 *  A vanishing barrier gradient falls back to plain normalized descent,
 *  i.e. zeta is treated as 0 for the step.
 */
std::optional<std::vector<double>> gdam_direction(std::span<const double> grad_f,
                                                  std::span<const double> grad_phi,
                                                  double zeta);

/// Barrier parameter implied by the current direction mix,
/// eta = zeta * ||grad f|| / ||grad Phi||. Diagnostic only; nullopt when the
/// barrier gradient vanishes.
std::optional<double> implied_barrier_parameter(std::span<const double> grad_f,
                                                std::span<const double> grad_phi, double zeta);

/// Single-loop GDAM on the deterministic objective loss(x, nominal), with the
/// fixed-length step rule x_{k+1} = x_k + (beta/||s||) s and strict
/// feasibility maintained at every iterate.
OptimizerTrace run_deterministic_gdam(const StochasticProblem& problem,
                                      const RobustnessSpec& spec, const GdamConfig& config,
                                      std::span<const double> x0);

/** Stochastic GDAM: per iteration, sample a batch of scenarios, form the
 *  descent direction from the batch estimate, take a fixed-length step, and
 *  relax zeta <- tau * zeta whenever the batch-mean objective fails to
 *  decrease (window-averaged; window 1 reproduces the one-step rule). For the
 *  empirical-mean objective the direction is the average of per-sample GDAM
 *  directions; mean-variance and DRO objectives couple scenarios, so their
 *  batch-level gradient feeds a single GDAM direction.
 */
OptimizerTrace run_stochastic_gdam(const StochasticProblem& problem,
                                   const EmpiricalDistribution& dist,
                                   const RobustnessSpec& spec, const GdamConfig& config,
                                   std::span<const double> x0);

/// Unconstrained stochastic gradient baseline with the comparable normalized
/// step x_{k+1} = clip(x_k - (beta/||g||) g). Rejects problems with
/// inequality constraints.
OptimizerTrace run_sgd(const StochasticProblem& problem, const EmpiricalDistribution& dist,
                       const RobustnessSpec& spec, const GdamConfig& config,
                       std::span<const double> x0);

} // namespace drokit
