#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "drokit/divergence.hpp"

namespace drokit {

/// Which inner worst-case problem to solve: divergence as a soft penalty with
/// weight delta, or as a hard ball constraint with radius rho.
struct InnerSpec {
    enum class Mode { Penalized, Constrained };

    DivergenceKind kind = DivergenceKind::Chi2;
    Mode mode = Mode::Penalized;
    double delta = 1.0;      // penalized mode, > 0
    double rho = 0.0;        // constrained mode, >= 0
    double tolerance = 1e-10; // relative floor on psi accuracy

    static InnerSpec penalized(DivergenceKind kind, double delta, double tolerance = 1e-10);
    static InnerSpec constrained(DivergenceKind kind, double rho, double tolerance = 1e-10);
};

/// Result of an inner maximization: the worst-case value Psi, the dual
/// multipliers, and the worst-case distribution. clamped[i] marks scenarios
/// whose chi-square score fell below the conjugate kink (s_i < -1), i.e.
/// scenarios whose gradient contribution vanishes.
struct InnerSolution {
    double psi = 0.0;
    double lambda_star = 0.0;
    std::optional<double> nu_star; // constrained mode only
    std::vector<double> q_star;
    std::vector<char> clamped;
    bool closed_form_valid = false;
};

/** Penalized inner problem
 *
 *      Psi = max_{q >= 0, sum q = 1} { sum_i q_i f_i - delta d_phi(q, p) }
 *          = min_lambda  sum_i p_i [ delta phi*((f_i - lambda)/delta) ] + lambda.
 *
 *  For chi-square divergence the closed form Psi = mean + V/(2 delta) is used
 *  whenever its validity condition max_k(mean - f_k) <= delta holds; the
 *  general path minimizes the dual by bisection on the subgradient.
 */
InnerSolution solve_penalized_dual(std::span<const double> losses, std::span<const double> p,
                                   const InnerSpec& spec);

/** Hard-constrained inner problem
 *
 *      Psi = max_{d_phi(q,p) <= rho} sum_i q_i f_i
 *          = min_{lambda, nu >= 0} sum_i p_i [ nu phi*((f_i - lambda)/nu) ] + lambda + nu rho.
 *
 *  rho = 0 returns the nominal mean with q = p. For chi-square the closed
 *  form Psi = mean + sqrt(2 rho V) (with nu* = sqrt(V / (2 rho)) and
 *  lambda* = mean) applies when (mean - f_k) sqrt(2 rho) <= sqrt(V) for all
 *  k; otherwise a nested solve runs golden section on log(nu) with an inner
 *  lambda bisection per nu.
 */
InnerSolution solve_constrained_dual(std::span<const double> losses, std::span<const double> p,
                                     const InnerSpec& spec);

/// Chi-square fast path, penalized: (mean + V/(2 delta), condition holds?).
std::pair<double, bool> chi2_closed_form_penalized(std::span<const double> losses,
                                                   std::span<const double> p, double delta);

/// Chi-square fast path, constrained: (mean + sqrt(2 rho V), condition holds?).
std::pair<double, bool> chi2_closed_form_constrained(std::span<const double> losses,
                                                     std::span<const double> p, double rho);

/** Recover the worst-case distribution from the dual solution:
 *
 *      q_i = p_i (phi*)'((f_i - lambda) / scale),
 *
 *  where scale is delta (penalized) or nu* (constrained). The result is
 *  renormalized exactly when |sum q - 1| <= 1e-6 and rejected as a solver
 *  inconsistency otherwise. Chi-square clamps negative mass to zero.
 */
std::vector<double> worst_case_distribution(std::span<const double> losses,
                                            std::span<const double> p, DivergenceKind kind,
                                            double lambda, double scale);

/** Brute-force primal maximizer for testing and validation, independent of
 *  the conjugate-dual path. Penalized mode runs projected gradient ascent on
 *  the simplex from 5 seeded random starts; constrained mode wraps it in a
 *  bisection on the divergence constraint via a penalty sweep. Supports at
 *  most 8 scenarios.
 */
InnerSolution primal_oracle(std::span<const double> losses, std::span<const double> p,
                            const InnerSpec& spec, std::uint64_t seed);

struct DroValueGradient {
    double psi = 0.0;
    std::vector<double> gradient;
    InnerSolution solution;
};

/// Danskin envelope gradient: solves the mode-appropriate inner problem and
/// returns grad = sum_i q*_i grad_f_i, the q*-weighted convex combination of
/// the per-scenario gradients.
DroValueGradient dro_value_and_gradient(std::span<const double> losses,
                                        const std::vector<std::vector<double>>& loss_gradients,
                                        std::span<const double> p, const InnerSpec& spec);

namespace detail {

/// General conjugate-dual paths without the chi-square shortcut, exposed so
/// the closed forms can be validated against the iterative solvers.
InnerSolution solve_penalized_bisection(std::span<const double> losses,
                                        std::span<const double> p, const InnerSpec& spec);
InnerSolution solve_constrained_nested(std::span<const double> losses,
                                       std::span<const double> p, const InnerSpec& spec);

/// Euclidean projection onto the probability simplex.
std::vector<double> project_to_simplex(std::span<const double> v);

} // namespace detail

} // namespace drokit
