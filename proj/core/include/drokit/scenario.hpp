#pragma once

#include <cstddef>
#include <istream>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "drokit/rng.hpp"

namespace drokit {

/// One realization of the uncertain parameter vector (e.g. Mach number and
/// target lift coefficient). Values are finite; the dimension is identical
/// for every scenario in a set.
struct Scenario {
    std::vector<double> values;
    std::size_t index = 0;
};

/// Finite support of the uncertain parameter together with occurrence counts.
/// Immutable after construction and safe to share across threads.
class ScenarioSet {
public:
    /// Raw observations, one scenario per row, all counts 1.
    static ScenarioSet from_rows(std::vector<std::vector<double>> rows);

    /// Explicit support with per-point occurrence counts (all counts >= 1).
    static ScenarioSet from_support(std::vector<std::vector<double>> support,
                                    std::vector<long> counts);

    std::size_t size() const noexcept { return scenarios_.size(); }
    std::size_t dimension() const noexcept { return dimension_; }
    long total() const noexcept { return total_; }

    const Scenario& scenario(std::size_t i) const { return scenarios_.at(i); }
    long count(std::size_t i) const { return counts_.at(i); }
    std::span<const long> counts() const noexcept { return counts_; }

private:
    ScenarioSet() = default;

    std::vector<Scenario> scenarios_;
    std::vector<long> counts_;
    std::size_t dimension_ = 0;
    long total_ = 0;
};

/// Per-dimension regular binning grid: bin k covers
/// [origin + k*width, origin + (k+1)*width), represented by its center.
struct BinningSpec {
    std::vector<double> widths;
    std::vector<double> origins; // empty means all zero
};

/// Probability vector on a ScenarioSet; defaults to the empirical weights
/// N_i / N. The set is shared, not copied.
class EmpiricalDistribution {
public:
    explicit EmpiricalDistribution(std::shared_ptr<const ScenarioSet> set);
    EmpiricalDistribution(std::shared_ptr<const ScenarioSet> set, std::vector<double> p);

    const ScenarioSet& set() const noexcept { return *set_; }
    std::shared_ptr<const ScenarioSet> set_ptr() const noexcept { return set_; }
    std::span<const double> p() const noexcept { return p_; }
    std::size_t size() const noexcept { return p_.size(); }

private:
    std::shared_ptr<const ScenarioSet> set_;
    std::vector<double> p_;
};

/** Parse CSV text with a header row into a ScenarioSet.
 *
 *  Selects the requested columns (in the given order); every selected cell
 *  must parse as a finite real with '.' as decimal point. Rows become
 *  scenarios in file order with counts all 1; duplicates are kept
 *  (deduplication is a separate, explicit binning step).
 *
 *  Throws SchemaError for a missing column or empty body and ParseError
 *  (with the 1-based data row number) for an unparseable cell.
 */
ScenarioSet load_csv(std::istream& source, const std::vector<std::string>& columns);

/** Merge scenarios that fall into the same multi-dimensional bin.
 *
 *  Bin assignment per dimension is floor((v - origin) / width); the merged
 *  scenario value is the bin center and counts accumulate, so the total N is
 *  preserved. Output order is first occurrence.
 */
ScenarioSet bin_scenarios(const ScenarioSet& set, const BinningSpec& spec);

/// Draw n indices i.i.d. with replacement according to dist.p(), advancing
/// rng. Identical seeds produce identical sequences on every platform.
std::vector<std::size_t> sample_batch(const EmpiricalDistribution& dist, std::size_t n,
                                      Rng& rng);

/** Likelihood threshold gamma* for the Burg-entropy ambiguity set:
 *
 *      gamma* = sum_i N_i log(N_i / N) - 1/2 chi2_{n~-1, 1-alpha},
 *
 *  where n~ is the support size. Requires n~ >= 2 and alpha in (0, 1].
 */
double likelihood_gamma_star(const ScenarioSet& set, double alpha);

/// Convert a likelihood threshold to the equivalent Burg-divergence radius
/// rho = (sum_i N_i log(N_i / N) - gamma) / N >= 0.
double gamma_to_rho(const ScenarioSet& set, double gamma);

} // namespace drokit
