#include "drokit/validation.hpp"

#include <cmath>
#include <vector>

#include "drokit/dro_inner.hpp"
#include "drokit/rng.hpp"
#include "drokit/summation.hpp"

namespace drokit {

OracleAgreement dual_oracle_agreement(std::size_t instance_count, std::uint64_t seed) {
    constexpr double deltas[] = {0.05, 0.5, 5.0};
    constexpr double rhos[] = {0.01, 0.1, 0.5};
    Rng rng(seed);

    OracleAgreement result;
    for (std::size_t i = 0; i < instance_count; ++i) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng() % 5);
        std::vector<double> losses(n);
        std::vector<double> raw(n);
        for (std::size_t j = 0; j < n; ++j) {
            losses[j] = uniform_range(rng, -5.0, 5.0);
            raw[j] = 0.25 + uniform_unit(rng);
        }
        const double total = compensated_sum(raw);
        std::vector<double> p(n);
        for (std::size_t j = 0; j < n; ++j) p[j] = raw[j] / total;

        const DivergenceKind kind = static_cast<DivergenceKind>(i % 3);
        const InnerSpec spec = (i % 2 == 0)
                                   ? InnerSpec::penalized(kind, deltas[(i / 2) % 3])
                                   : InnerSpec::constrained(kind, rhos[(i / 2) % 3]);

        const InnerSolution dual = spec.mode == InnerSpec::Mode::Penalized
                                       ? solve_penalized_dual(losses, p, spec)
                                       : solve_constrained_dual(losses, p, spec);
        const InnerSolution oracle = primal_oracle(losses, p, spec, seed ^ (i * 0x9e3779b9ULL));

        const double err = std::abs(dual.psi - oracle.psi) / (1.0 + std::abs(dual.psi));
        if (err > result.worst_rel_error) result.worst_rel_error = err;
        ++result.instances;
    }
    return result;
}

} // namespace drokit
