#pragma once

namespace drokit {

/// Regularized lower incomplete gamma function P(a, x), a > 0, x >= 0.
/// Series expansion for x < a + 1, Lentz continued fraction otherwise;
/// absolute accuracy is ~1e-14 over the range used here.
double gamma_p(double a, double x);

/// CDF of the chi-square distribution with dof degrees of freedom.
double chi_square_cdf(int dof, double x);

/** Quantile of the chi-square distribution with dof degrees of freedom.
 *
 *  Solves CDF(q) = prob by bisection on gamma_p over the bracket
 *  [0, dof + 10*sqrt(2 dof) + 50] (expanded geometrically if needed), to
 *  better than 1e-9 accuracy in CDF space.
 *
 *  Requires dof >= 1 and 0 <= prob < 1; prob == 0 returns 0.
 */
double chi_square_quantile(int dof, double prob);

} // namespace drokit
