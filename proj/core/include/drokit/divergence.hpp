#pragma once

#include <span>
#include <string>

namespace drokit {

/// The three phi-divergences supported by the inner solvers. Each variant has
/// a generator phi, its convex conjugate phi*, and the conjugate derivative on
/// the domains documented below.
enum class DivergenceKind { Chi2, KL, Burg };

std::string to_string(DivergenceKind kind);

/** Divergence generator phi(t) on t >= 0:
 *
 *      Chi2:  (1/2) (t - 1)^2
 *      KL:    t log t - t + 1          (limit 1 at t = 0)
 *      Burg:  -log t + t - 1           (+infinity at t = 0)
 *
 *  Nonnegative, convex, and exactly 0 at t = 1. Infinite values are returned
 *  as +infinity rather than thrown; t < 0 is a domain error.
 */
double phi(DivergenceKind kind, double t);

/** Convex conjugate phi*(s) = sup_{t >= 0} { s t - phi(t) }:
 *
 *      Chi2:  -1/2 for s < -1,  s^2/2 + s for s >= -1
 *      KL:    e^s - 1
 *      Burg:  -log(1 - s) for s < 1, +infinity otherwise
 */
double phi_conjugate(DivergenceKind kind, double s);

/// Derivative of phi*; at the Chi2 kink s = -1 the right derivative 0 is
/// returned. This is the density recovery map t = (phi*)'(s).
double phi_conjugate_derivative(DivergenceKind kind, double s);

/** d_phi(q, p) = sum_i p_i phi(q_i / p_i) between probability vectors.
 *
 *  Both vectors must have the same length and lie on the simplex to 1e-10;
 *  the nominal p must have full support. Summation runs in ascending index
 *  order with compensated accumulation. A Burg divergence with q_i = 0 is
 *  +infinity, returned as a value.
 */
double divergence(DivergenceKind kind, std::span<const double> q, std::span<const double> p);

/// Membership test for the ambiguity set { q : d_phi(q, p) <= rho } with a
/// 1e-12 boundary tolerance.
bool in_ball(DivergenceKind kind, std::span<const double> q, std::span<const double> p,
             double rho);

} // namespace drokit
