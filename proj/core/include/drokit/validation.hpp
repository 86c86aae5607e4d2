#pragma once

#include <cstddef>
#include <cstdint>

namespace drokit {

struct OracleAgreement {
    double worst_rel_error = 0.0;
    std::size_t instances = 0;
};

/** Dual-vs-oracle randomized agreement suite.
 *
 *  Draws seeded random instances (support 2-6, losses uniform in [-5, 5],
 *  random full-support nominal) across all three divergences, alternating
 *  penalized mode over delta in {0.05, 0.5, 5} and constrained mode over rho
 *  in {0.01, 0.1, 0.5}, and compares the conjugate-dual solvers against the
 *  brute-force primal oracle. Reports the worst relative error
 *  |psi_dual - psi_oracle| / (1 + |psi_dual|).
 */
OracleAgreement dual_oracle_agreement(std::size_t instance_count, std::uint64_t seed);

} // namespace drokit
