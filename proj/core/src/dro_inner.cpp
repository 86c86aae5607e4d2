#include "drokit/dro_inner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "drokit/errors.hpp"
#include "drokit/rng.hpp"
#include "drokit/summation.hpp"

namespace drokit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_instance(std::span<const double> losses, std::span<const double> p) {
    if (losses.empty()) throw ContractError("inner solver: losses must be nonempty");
    if (losses.size() != p.size()) {
        throw ContractError("inner solver: losses and p must have equal length");
    }
    CompensatedSum sum;
    for (std::size_t i = 0; i < losses.size(); ++i) {
        if (!std::isfinite(losses[i])) throw ContractError("inner solver: losses must be finite");
        if (!(p[i] > 0.0)) throw ContractError("inner solver: p must have full support");
        sum.add(p[i]);
    }
    if (std::abs(sum.value() - 1.0) > 1e-10) {
        throw ContractError("inner solver: p must lie on the probability simplex");
    }
}

struct Moments {
    double mean;
    double variance;
};

Moments weighted_moments(std::span<const double> f, std::span<const double> p) {
    CompensatedSum m;
    for (std::size_t i = 0; i < f.size(); ++i) m.add(p[i] * f[i]);
    const double mean = m.value();
    CompensatedSum v;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double d = f[i] - mean;
        v.add(p[i] * d * d);
    }
    return {mean, std::max(0.0, v.value())};
}

// delta * phi*((f - lambda)/delta) evaluated without cancellation; u = f - lambda.
double scaled_conjugate(DivergenceKind kind, double u, double scale) {
    switch (kind) {
        case DivergenceKind::Chi2: {
            const double s = u / scale;
            if (s < -1.0) return -0.5 * scale;
            return u * (0.5 * s + 1.0);
        }
        case DivergenceKind::KL: {
            const double s = u / scale;
            if (s > 709.0) return kInf;
            return scale * std::expm1(s);
        }
        case DivergenceKind::Burg: {
            const double s = u / scale;
            if (s >= 1.0) return kInf;
            return -scale * std::log1p(-s);
        }
    }
    return 0.0;
}

// Dual objective sum_i p_i scale*phi*((f_i - lambda)/scale) + lambda [+ nu*rho
// added by the constrained caller].
double dual_value(std::span<const double> f, std::span<const double> p, DivergenceKind kind,
                  double scale, double lambda) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double term = scaled_conjugate(kind, f[i] - lambda, scale);
        if (std::isinf(term)) return kInf;
        acc.add(p[i] * term);
    }
    return acc.value() + lambda;
}

// Subgradient of the dual in lambda: 1 - sum_i p_i (phi*)'((f_i - lambda)/scale).
// Monotone nondecreasing in lambda; -inf where the conjugate blows up.
double dual_subgradient(std::span<const double> f, std::span<const double> p,
                        DivergenceKind kind, double scale, double lambda) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double d = phi_conjugate_derivative(kind, (f[i] - lambda) / scale);
        if (std::isinf(d)) return -kInf;
        acc.add(p[i] * d);
    }
    return 1.0 - acc.value();
}

/** Bisection for the dual minimizer lambda at a fixed scale.
 *
 *  The subgradient changes sign on the initial bracket for each divergence
 *  (expanded geometrically as a safeguard); the loop then runs the bracket
 *  down to floating-point resolution so that the recovered q sums to 1 even
 *  when scale is many orders of magnitude below the loss spread.
 */
double solve_lambda(std::span<const double> f, std::span<const double> p, DivergenceKind kind,
                    double scale, double minf, double maxf) {
    double lo = minf;
    double hi = maxf;
    switch (kind) {
        case DivergenceKind::Chi2: lo = minf - scale; break;
        case DivergenceKind::KL: lo = minf; break;
        case DivergenceKind::Burg: lo = maxf - scale; break;
    }

    const double span = std::max({1.0, maxf - minf, scale});
    double widen = span;
    for (int tries = 0; tries < 80 && dual_subgradient(f, p, kind, scale, hi) < 0.0; ++tries) {
        hi += widen;
        widen *= 2.0;
    }
    if (kind != DivergenceKind::Burg) { // Burg's domain is bounded below at maxf - scale
        widen = span;
        for (int tries = 0; tries < 80 && dual_subgradient(f, p, kind, scale, lo) > 0.0;
             ++tries) {
            lo -= widen;
            widen *= 2.0;
        }
    }

    for (int iter = 0; iter < 220; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo) || !(mid < hi)) break; // bracket at ulp resolution
        if (dual_subgradient(f, p, kind, scale, mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi; // the side with nonnegative subgradient stays inside every domain
}

std::vector<char> clamp_flags(std::span<const double> f, DivergenceKind kind, double lambda,
                              double scale) {
    std::vector<char> flags(f.size(), 0);
    if (kind == DivergenceKind::Chi2) {
        for (std::size_t i = 0; i < f.size(); ++i) {
            flags[i] = (f[i] - lambda) / scale < -1.0 ? 1 : 0;
        }
    }
    return flags;
}

InnerSolution constant_losses_solution(std::span<const double> losses,
                                       std::span<const double> p, DivergenceKind kind) {
    InnerSolution sol;
    sol.psi = weighted_moments(losses, p).mean;
    sol.lambda_star = sol.psi;
    sol.q_star.assign(p.begin(), p.end());
    sol.clamped.assign(p.size(), 0);
    sol.closed_form_valid = kind == DivergenceKind::Chi2;
    return sol;
}

double max_of(std::span<const double> v) { return *std::max_element(v.begin(), v.end()); }
double min_of(std::span<const double> v) { return *std::min_element(v.begin(), v.end()); }

// Losses whose spread sits at rounding scale are constant for all practical
// purposes; solving the dual there divides subtraction noise by a vanishing
// multiplier scale and corrupts the recovered distribution.
bool effectively_constant(double minf, double maxf) {
    return maxf - minf <= 1e-12 * std::max({1.0, std::abs(minf), std::abs(maxf)});
}

} // namespace

InnerSpec InnerSpec::penalized(DivergenceKind kind, double delta, double tolerance) {
    if (!(delta > 0.0)) throw ParameterError("InnerSpec: delta must be > 0");
    if (!(tolerance > 0.0)) throw ParameterError("InnerSpec: tolerance must be > 0");
    InnerSpec spec;
    spec.kind = kind;
    spec.mode = Mode::Penalized;
    spec.delta = delta;
    spec.tolerance = tolerance;
    return spec;
}

InnerSpec InnerSpec::constrained(DivergenceKind kind, double rho, double tolerance) {
    if (!(rho >= 0.0)) throw ParameterError("InnerSpec: rho must be >= 0");
    if (!(tolerance > 0.0)) throw ParameterError("InnerSpec: tolerance must be > 0");
    InnerSpec spec;
    spec.kind = kind;
    spec.mode = Mode::Constrained;
    spec.rho = rho;
    spec.tolerance = tolerance;
    return spec;
}

std::pair<double, bool> chi2_closed_form_penalized(std::span<const double> losses,
                                                   std::span<const double> p, double delta) {
    if (!(delta > 0.0)) throw ParameterError("chi2_closed_form_penalized: delta must be > 0");
    validate_instance(losses, p);
    const auto [mean, variance] = weighted_moments(losses, p);
    bool valid = true;
    for (double f : losses) {
        if (mean - f > delta) valid = false;
    }
    return {mean + variance / (2.0 * delta), valid};
}

std::pair<double, bool> chi2_closed_form_constrained(std::span<const double> losses,
                                                     std::span<const double> p, double rho) {
    if (!(rho >= 0.0)) throw ParameterError("chi2_closed_form_constrained: rho must be >= 0");
    validate_instance(losses, p);
    const auto [mean, variance] = weighted_moments(losses, p);
    if (rho == 0.0) return {mean, true};
    const double sqrt_v = std::sqrt(variance);
    bool valid = true;
    for (double f : losses) {
        if ((mean - f) * std::sqrt(2.0 * rho) > sqrt_v) valid = false;
    }
    return {mean + std::sqrt(2.0 * rho * variance), valid};
}

std::vector<double> worst_case_distribution(std::span<const double> losses,
                                            std::span<const double> p, DivergenceKind kind,
                                            double lambda, double scale) {
    if (!(scale > 0.0)) throw ParameterError("worst_case_distribution: scale must be > 0");
    validate_instance(losses, p);
    std::vector<double> q(losses.size());
    CompensatedSum sum;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double d = phi_conjugate_derivative(kind, (losses[i] - lambda) / scale);
        if (!std::isfinite(d)) {
            throw SolverError("worst_case_distribution: conjugate derivative not finite");
        }
        q[i] = p[i] * d;
        sum.add(q[i]);
    }
    const double total = sum.value();
    if (std::abs(total - 1.0) > 1e-6) {
        throw SolverError("worst_case_distribution: recovered mass " + std::to_string(total) +
                          " deviates from 1 beyond 1e-6 (inner solver inconsistency)");
    }
    for (double& w : q) w /= total;
    return q;
}

namespace detail {

InnerSolution solve_penalized_bisection(std::span<const double> losses,
                                        std::span<const double> p, const InnerSpec& spec) {
    validate_instance(losses, p);
    const double minf = min_of(losses);
    const double maxf = max_of(losses);
    if (effectively_constant(minf, maxf)) return constant_losses_solution(losses, p, spec.kind);

    const double lambda = solve_lambda(losses, p, spec.kind, spec.delta, minf, maxf);
    InnerSolution sol;
    sol.lambda_star = lambda;
    sol.psi = std::min(dual_value(losses, p, spec.kind, spec.delta, lambda), maxf);
    sol.q_star = worst_case_distribution(losses, p, spec.kind, lambda, spec.delta);
    sol.clamped = clamp_flags(losses, spec.kind, lambda, spec.delta);
    sol.closed_form_valid = spec.kind == DivergenceKind::Chi2 &&
                            chi2_closed_form_penalized(losses, p, spec.delta).second;
    return sol;
}

InnerSolution solve_constrained_nested(std::span<const double> losses,
                                       std::span<const double> p, const InnerSpec& spec) {
    validate_instance(losses, p);
    const double minf = min_of(losses);
    const double maxf = max_of(losses);
    if (effectively_constant(minf, maxf)) return constant_losses_solution(losses, p, spec.kind);

    const double scale = std::max(1.0, maxf - minf);
    const double rho = spec.rho;

    // Outer objective G(nu) = min_lambda dual(lambda; nu) + nu*rho is convex in
    // nu, hence unimodal along the log-parametrized bracket.
    auto outer = [&](double nu) {
        const double lambda = solve_lambda(losses, p, spec.kind, nu, minf, maxf);
        return dual_value(losses, p, spec.kind, nu, lambda) + nu * rho;
    };

    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = std::log(1e-8 * scale);
    double b = std::log(1e8 * scale);
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = outer(std::exp(x1));
    double f2 = outer(std::exp(x2));
    for (int iter = 0; iter < 220 && (b - a) > 1e-14; ++iter) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = outer(std::exp(x1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = outer(std::exp(x2));
        }
    }
    const double nu = std::exp(0.5 * (a + b));
    const double lambda = solve_lambda(losses, p, spec.kind, nu, minf, maxf);

    InnerSolution sol;
    sol.lambda_star = lambda;
    sol.nu_star = nu;
    sol.psi = std::min(dual_value(losses, p, spec.kind, nu, lambda) + nu * rho, maxf);
    sol.q_star = worst_case_distribution(losses, p, spec.kind, lambda, nu);
    sol.clamped = clamp_flags(losses, spec.kind, lambda, nu);
    sol.closed_form_valid = spec.kind == DivergenceKind::Chi2 &&
                            chi2_closed_form_constrained(losses, p, rho).second;
    return sol;
}

} // namespace detail

InnerSolution solve_penalized_dual(std::span<const double> losses, std::span<const double> p,
                                   const InnerSpec& spec) {
    if (spec.mode != InnerSpec::Mode::Penalized) {
        throw ContractError("solve_penalized_dual: spec is not in penalized mode");
    }
    if (!(spec.delta > 0.0)) throw ParameterError("solve_penalized_dual: delta must be > 0");
    validate_instance(losses, p);
    if (effectively_constant(min_of(losses), max_of(losses))) {
        return constant_losses_solution(losses, p, spec.kind);
    }

    if (spec.kind == DivergenceKind::Chi2) {
        const auto [psi, valid] = chi2_closed_form_penalized(losses, p, spec.delta);
        if (valid) {
            const double mean = weighted_moments(losses, p).mean;
            InnerSolution sol;
            sol.psi = psi;
            sol.lambda_star = mean;
            sol.q_star = worst_case_distribution(losses, p, spec.kind, mean, spec.delta);
            sol.clamped.assign(losses.size(), 0);
            sol.closed_form_valid = true;
            return sol;
        }
    }
    return detail::solve_penalized_bisection(losses, p, spec);
}

InnerSolution solve_constrained_dual(std::span<const double> losses, std::span<const double> p,
                                     const InnerSpec& spec) {
    if (spec.mode != InnerSpec::Mode::Constrained) {
        throw ContractError("solve_constrained_dual: spec is not in constrained mode");
    }
    if (!(spec.rho >= 0.0)) throw ParameterError("solve_constrained_dual: rho must be >= 0");
    validate_instance(losses, p);
    if (effectively_constant(min_of(losses), max_of(losses))) {
        return constant_losses_solution(losses, p, spec.kind);
    }

    if (spec.rho <= 1e-16) {
        InnerSolution sol;
        const auto [mean, variance] = weighted_moments(losses, p);
        (void)variance;
        sol.psi = mean;
        sol.lambda_star = mean;
        sol.q_star.assign(p.begin(), p.end());
        sol.clamped.assign(p.size(), 0);
        sol.closed_form_valid = spec.kind == DivergenceKind::Chi2;
        return sol;
    }

    if (spec.kind == DivergenceKind::Chi2) {
        const auto [psi, valid] = chi2_closed_form_constrained(losses, p, spec.rho);
        const auto [mean, variance] = weighted_moments(losses, p);
        if (valid && variance > 0.0) {
            const double nu = std::sqrt(variance / (2.0 * spec.rho));
            InnerSolution sol;
            sol.psi = psi;
            sol.lambda_star = mean;
            sol.nu_star = nu;
            sol.q_star = worst_case_distribution(losses, p, spec.kind, mean, nu);
            sol.clamped.assign(losses.size(), 0);
            sol.closed_form_valid = true;
            return sol;
        }
        if (valid) { // constant losses
            return constant_losses_solution(losses, p, spec.kind);
        }
    }
    return detail::solve_constrained_nested(losses, p, spec);
}

// ---------------------------------------------------------------------------
// Primal oracle: direct maximization over the simplex.
// ---------------------------------------------------------------------------

namespace detail {

std::vector<double> project_to_simplex(std::span<const double> v) {
    std::vector<double> u(v.begin(), v.end());
    std::sort(u.begin(), u.end(), std::greater<>());
    double cum = 0.0;
    double tau = 0.0;
    std::size_t support = 0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        cum += u[j];
        const double candidate = (cum - 1.0) / static_cast<double>(j + 1);
        if (u[j] - candidate > 0.0) {
            tau = candidate;
            support = j + 1;
        }
    }
    std::vector<double> w(v.size());
    if (support == 0) {
        // Degenerate at extreme magnitudes where cum - 1 rounds to cum; the
        // projection of a far-away point is a vertex.
        const std::size_t amax = static_cast<std::size_t>(
            std::max_element(v.begin(), v.end()) - v.begin());
        w[amax] = 1.0;
        return w;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        w[i] = std::max(0.0, v[i] - tau);
        total += w[i];
    }
    for (double& x : w) x /= total;
    return w;
}

} // namespace detail

namespace {

double phi_prime(DivergenceKind kind, double t) {
    switch (kind) {
        case DivergenceKind::Chi2: return t - 1.0;
        case DivergenceKind::KL: return std::log(t);
        case DivergenceKind::Burg: return 1.0 - 1.0 / t;
    }
    return 0.0;
}

// Penalized primal objective sum q f - delta * sum p phi(q/p); -inf signals an
// infeasible Burg boundary point.
double primal_value(std::span<const double> f, std::span<const double> p, DivergenceKind kind,
                    double delta, std::span<const double> q) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double t = q[i] <= 0.0 ? 0.0 : q[i] / p[i];
        const double pen = phi(kind, t);
        if (std::isinf(pen)) return -kInf;
        acc.add(q[i] * f[i] - delta * p[i] * pen);
    }
    return acc.value();
}

/** Projected gradient ascent on the simplex.
 *
 *  Phase one follows the diminishing schedule 1/(k+100); it is globally
 *  stable but its tail rate is too slow for weakly curved instances, so a
 *  monotone backtracked fixed-step phase finishes the climb. Terminates early
 *  once the projected-gradient residual is negligible.
 */
std::vector<double> ascend(std::span<const double> f, std::span<const double> p,
                           DivergenceKind kind, double delta, std::vector<double> q,
                           long budget) {
    const long warmup = std::min<long>(budget / 4, 20000);
    const double fmax_abs = std::max(std::abs(max_of(f)), std::abs(min_of(f)));
    const double span = max_of(f) - min_of(f);
    std::vector<double> grad(f.size());
    std::vector<double> trial(f.size());

    // KL and Burg have interior optima; flooring iterates there keeps the
    // ascent away from the (infinite-gradient) boundary without moving the
    // optimum. The Burg floor tracks where its optimum coordinates actually
    // live, q_i* ~ p_i delta / (lambda + delta - f_i); a fixed deep floor
    // would let the 1/t barrier gradient dwarf every other component and
    // freeze the capped step. Chi-square optima sit on the boundary and the
    // iterates stay untouched.
    double floor = 0.0;
    if (kind != DivergenceKind::Chi2) {
        const double pmin = min_of(p);
        floor = kind == DivergenceKind::Burg
                    ? std::min(0.5 * pmin, 1e-3 * pmin * delta / (delta + span + 1.0))
                    : 1e-18;
        floor = std::max(floor, 1e-300);
    }
    auto interiorize = [&](std::vector<double> at) {
        if (kind == DivergenceKind::Chi2) return at;
        double total = 0.0;
        for (double& w : at) {
            if (w < floor) w = floor;
            total += w;
        }
        for (double& w : at) w /= total;
        return at;
    };

    auto fill_grad = [&](const std::vector<double>& at) {
        double largest = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double t = std::max(at[i], std::max(floor, 1e-300)) / p[i];
            grad[i] = f[i] - delta * phi_prime(kind, t);
            largest = std::max(largest, std::abs(grad[i]));
        }
        return largest;
    };
    // The move is capped at unit infinity-norm: the simplex has diameter
    // sqrt(2), and uncapped steps against the Burg barrier overflow the
    // projection.
    auto shifted = [&](const std::vector<double>& at, double step, double grad_inf) {
        const double eff = grad_inf > 0.0 ? std::min(step, 1.0 / grad_inf) : step;
        for (std::size_t i = 0; i < f.size(); ++i) trial[i] = at[i] + eff * grad[i];
        return interiorize(detail::project_to_simplex(trial));
    };

    double step = 1e-2;
    q = interiorize(std::move(q));
    double value = primal_value(f, p, kind, delta, q);
    for (long k = 0; k < budget; ++k) {
        const double grad_inf = fill_grad(q);
        if (k % 64 == 0) {
            const std::vector<double> probe = shifted(q, 1e-3, grad_inf);
            CompensatedSum r2;
            for (std::size_t i = 0; i < q.size(); ++i) {
                const double d = probe[i] - q[i];
                r2.add(d * d);
            }
            if (std::sqrt(r2.value()) / 1e-3 < 1e-12 * (1.0 + fmax_abs)) break;
        }
        if (k < warmup) {
            q = shifted(q, 1.0 / static_cast<double>(k + 100), grad_inf);
            value = primal_value(f, p, kind, delta, q);
        } else {
            std::vector<double> next = shifted(q, step, grad_inf);
            const double next_value = primal_value(f, p, kind, delta, next);
            if (next_value >= value - 1e-18) {
                q = std::move(next);
                value = next_value;
                step = std::min(step * 1.25, 1e6);
            } else {
                step *= 0.5;
                if (step < 1e-18) break;
            }
        }
    }
    return q;
}

std::vector<double> random_simplex_point(std::size_t n, Rng& rng) {
    std::vector<double> q(n);
    double total = 0.0;
    for (double& w : q) {
        w = -std::log(std::max(uniform_unit(rng), 1e-300));
        total += w;
    }
    for (double& w : q) w /= total;
    return q;
}

// Raw divergence of the oracle iterate (no simplex contract checks).
double oracle_divergence(std::span<const double> q, std::span<const double> p,
                         DivergenceKind kind) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double t = q[i] <= 0.0 ? 0.0 : q[i] / p[i];
        const double pen = phi(kind, t);
        if (std::isinf(pen)) return kInf;
        acc.add(p[i] * pen);
    }
    return std::max(0.0, acc.value());
}

double estimate_lambda(std::span<const double> f, std::span<const double> p,
                       DivergenceKind kind, double scale, std::span<const double> q) {
    std::vector<double> candidates;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] > 1e-9) {
            candidates.push_back(f[i] - scale * phi_prime(kind, q[i] / p[i]));
        }
    }
    if (candidates.empty()) return max_of(f);
    std::sort(candidates.begin(), candidates.end());
    return candidates[candidates.size() / 2];
}

InnerSolution oracle_penalized(std::span<const double> f, std::span<const double> p,
                               DivergenceKind kind, double delta, std::uint64_t seed) {
    Rng rng(seed);
    double best_value = -kInf;
    std::vector<double> best_q;
    for (int start = 0; start < 5; ++start) {
        std::vector<double> q =
            ascend(f, p, kind, delta, random_simplex_point(f.size(), rng), 100000);
        const double value = primal_value(f, p, kind, delta, q);
        if (value > best_value) {
            best_value = value;
            best_q = std::move(q);
        }
    }
    InnerSolution sol;
    sol.psi = best_value;
    sol.q_star = best_q;
    sol.lambda_star = estimate_lambda(f, p, kind, delta, best_q);
    sol.clamped.assign(f.size(), 0);
    for (std::size_t i = 0; i < best_q.size(); ++i) sol.clamped[i] = best_q[i] <= 1e-12 ? 1 : 0;
    sol.closed_form_valid = false;
    return sol;
}

InnerSolution oracle_constrained(std::span<const double> f, std::span<const double> p,
                                 DivergenceKind kind, double rho, std::uint64_t seed) {
    InnerSolution sol;
    sol.clamped.assign(f.size(), 0);
    const auto [mean, variance] = weighted_moments(f, p);
    (void)variance;
    if (rho <= 1e-16) {
        sol.psi = mean;
        sol.lambda_star = mean;
        sol.q_star.assign(p.begin(), p.end());
        return sol;
    }

    const double maxf = max_of(f);
    const std::size_t amax = static_cast<std::size_t>(
        std::max_element(f.begin(), f.end()) - f.begin());
    std::vector<double> point_mass(f.size(), 0.0);
    point_mass[amax] = 1.0;
    const double dmax = oracle_divergence(point_mass, p, kind);
    if (rho >= dmax - 1e-9) { // ball reaches the worst vertex
        sol.psi = maxf;
        sol.lambda_star = maxf;
        sol.nu_star = 0.0;
        sol.q_star = point_mass;
        for (std::size_t i = 0; i < f.size(); ++i) sol.clamped[i] = i == amax ? 0 : 1;
        return sol;
    }

    // Penalty sweep: the divergence of the penalized maximizer decreases
    // monotonically in the penalty weight; bisect it onto the ball radius.
    const double scale = std::max(1.0, maxf - min_of(f));
    Rng rng(seed);
    double lo = 1e-9 * scale; // divergence above rho here
    double hi = 1e9 * scale;  // divergence ~ 0 here
    std::vector<double> q = std::vector<double>(p.begin(), p.end());
    std::vector<double> q_feasible(p.begin(), p.end());
    double dt_feasible = hi;
    for (int iter = 0; iter < 70; ++iter) {
        const double mid = std::sqrt(lo * hi);
        q = ascend(f, p, kind, mid, q, 60000);
        const double d = oracle_divergence(q, p, kind);
        if (d > rho) {
            lo = mid;
        } else {
            hi = mid;
            q_feasible = q;
            dt_feasible = mid;
        }
        if (hi / lo < 1.0 + 1e-13) break;
    }
    // Long polish at the bracketing penalty, kept only if it stays feasible.
    const std::vector<double> polished = ascend(f, p, kind, dt_feasible, q_feasible, 100000);
    if (oracle_divergence(polished, p, kind) <= rho) q_feasible = polished;
    CompensatedSum value;
    for (std::size_t i = 0; i < f.size(); ++i) value.add(q_feasible[i] * f[i]);
    sol.psi = value.value();
    sol.q_star = q_feasible;
    sol.nu_star = dt_feasible;
    sol.lambda_star = estimate_lambda(f, p, kind, dt_feasible, q_feasible);
    for (std::size_t i = 0; i < q_feasible.size(); ++i) {
        sol.clamped[i] = q_feasible[i] <= 1e-12 ? 1 : 0;
    }
    return sol;
}

} // namespace

InnerSolution primal_oracle(std::span<const double> losses, std::span<const double> p,
                            const InnerSpec& spec, std::uint64_t seed) {
    validate_instance(losses, p);
    if (losses.size() > 8) {
        throw SolverError("primal_oracle: support size " + std::to_string(losses.size()) +
                          " exceeds the oracle limit of 8");
    }
    if (spec.mode == InnerSpec::Mode::Penalized) {
        if (!(spec.delta > 0.0)) throw ParameterError("primal_oracle: delta must be > 0");
        return oracle_penalized(losses, p, spec.kind, spec.delta, seed);
    }
    if (!(spec.rho >= 0.0)) throw ParameterError("primal_oracle: rho must be >= 0");
    return oracle_constrained(losses, p, spec.kind, spec.rho, seed);
}

DroValueGradient dro_value_and_gradient(std::span<const double> losses,
                                        const std::vector<std::vector<double>>& loss_gradients,
                                        std::span<const double> p, const InnerSpec& spec) {
    if (loss_gradients.size() != losses.size()) {
        throw ContractError("dro_value_and_gradient: one gradient per scenario required");
    }
    const std::size_t dim = loss_gradients.empty() ? 0 : loss_gradients.front().size();
    for (const auto& g : loss_gradients) {
        if (g.size() != dim) {
            throw ContractError("dro_value_and_gradient: gradient dimension mismatch");
        }
    }

    DroValueGradient out;
    out.solution = spec.mode == InnerSpec::Mode::Penalized
                       ? solve_penalized_dual(losses, p, spec)
                       : solve_constrained_dual(losses, p, spec);
    out.psi = out.solution.psi;
    out.gradient.assign(dim, 0.0);
    for (std::size_t j = 0; j < dim; ++j) {
        CompensatedSum acc;
        for (std::size_t i = 0; i < losses.size(); ++i) {
            acc.add(out.solution.q_star[i] * loss_gradients[i][j]);
        }
        out.gradient[j] = acc.value();
    }
    return out;
}

} // namespace drokit
