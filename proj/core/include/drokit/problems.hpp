#pragma once

#include <memory>
#include <vector>

#include "drokit/objectives.hpp"

namespace drokit {

/** Scalar illustrative problem
 *
 *      loss(x; xi) = xi - (xi - 1) x^2,   x in [0, 1],
 *
 *  with the uniform five-point support {-0.8, -0.4, 0.0, 0.4, 0.8}. The
 *  empirical mean is minimized at x = 0, the variance at x = 1, so the mode
 *  selector moves the optimum across [0, 1]. Box-constrained only.
 */
std::shared_ptr<const StochasticProblem> toy_beyer();

/** Quadratic bowl with a linear halfspace constraint:
 *
 *      loss(x; xi) = || x - center - sigma * xi ||^2,    a . x <= b,
 *
 *  where scenarios are zero-mean perturbation directions. The analytic
 *  solution is the projection of center onto the halfspace; with the default
 *  center (1,1), a = (1,0), b = 0.5 that is (0.5, 1).
 */
std::shared_ptr<const StochasticProblem> constrained_quadratic(std::vector<double> center,
                                                               std::vector<double> a, double b,
                                                               double noise_scale);

/// Default geometry: center (1,1), a = (1,0), b = 0.5.
std::shared_ptr<const StochasticProblem> constrained_quadratic(double noise_scale = 0.0);

/** Smooth analytic stand-in for a transonic drag minimization study.
 *
 *  The loss is a quadratic bowl around a reference design plus a softplus
 *  drag-rise ramp that steepens once the Mach scenario exceeds a
 *  design-dependent divergence threshold; spending design budget raises the
 *  threshold, so robust objective modes trade bowl cost against tail
 *  exposure. Two inequality constraints mimic a linear pitching-moment limit
 *  and a concave thickness limit, both strictly satisfied at the reference
 *  design. The scenario is the 1-D Mach number with a binomially weighted
 *  support centered at 0.729.
 */
std::shared_ptr<const StochasticProblem> airfoil_surrogate(std::size_t dimension = 3);

/// Negative control for gradient validation: the toy problem with a
/// deliberately corrupted loss gradient (scaled by 1.5).
std::shared_ptr<const StochasticProblem> corrupted_gradient_fixture();

} // namespace drokit
