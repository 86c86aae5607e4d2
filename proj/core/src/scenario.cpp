#include "drokit/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <utility>

#include "drokit/errors.hpp"
#include "drokit/special_functions.hpp"
#include "drokit/summation.hpp"

namespace drokit {

namespace {

void check_finite(const std::vector<double>& values) {
    for (double v : values) {
        if (!std::isfinite(v)) throw ContractError("scenario values must be finite");
    }
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& cell, std::size_t row, const std::string& column) {
    const std::string t = trim(cell);
    double value = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || t.empty() || !std::isfinite(value)) {
        throw ParseError("CSV parse error at data row " + std::to_string(row) +
                         ", column '" + column + "': cannot parse '" + t + "' as a real");
    }
    return value;
}

} // namespace

ScenarioSet ScenarioSet::from_rows(std::vector<std::vector<double>> rows) {
    std::vector<long> counts(rows.size(), 1);
    return from_support(std::move(rows), std::move(counts));
}

ScenarioSet ScenarioSet::from_support(std::vector<std::vector<double>> support,
                                      std::vector<long> counts) {
    if (support.empty()) throw ContractError("ScenarioSet: support must be nonempty");
    if (support.size() != counts.size()) {
        throw ContractError("ScenarioSet: counts length must equal support size");
    }
    ScenarioSet set;
    set.dimension_ = support.front().size();
    set.scenarios_.reserve(support.size());
    long total = 0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (support[i].size() != set.dimension_) {
            throw ContractError("ScenarioSet: inconsistent scenario dimension");
        }
        check_finite(support[i]);
        if (counts[i] < 1) throw ContractError("ScenarioSet: counts must be >= 1");
        set.scenarios_.push_back(Scenario{std::move(support[i]), i});
        total += counts[i];
    }
    set.counts_ = std::move(counts);
    set.total_ = total;
    return set;
}

EmpiricalDistribution::EmpiricalDistribution(std::shared_ptr<const ScenarioSet> set)
    : set_(std::move(set)) {
    if (!set_) throw ContractError("EmpiricalDistribution: null scenario set");
    p_.reserve(set_->size());
    const double total = static_cast<double>(set_->total());
    for (std::size_t i = 0; i < set_->size(); ++i) {
        p_.push_back(static_cast<double>(set_->count(i)) / total);
    }
}

EmpiricalDistribution::EmpiricalDistribution(std::shared_ptr<const ScenarioSet> set,
                                             std::vector<double> p)
    : set_(std::move(set)), p_(std::move(p)) {
    if (!set_) throw ContractError("EmpiricalDistribution: null scenario set");
    if (p_.size() != set_->size()) {
        throw ContractError("EmpiricalDistribution: probability vector length mismatch");
    }
    CompensatedSum sum;
    for (double w : p_) {
        if (!(w >= 0.0)) throw ContractError("EmpiricalDistribution: p_i must be >= 0");
        sum.add(w);
    }
    if (std::abs(sum.value() - 1.0) > 1e-12) {
        throw ContractError("EmpiricalDistribution: probabilities must sum to 1");
    }
}

ScenarioSet load_csv(std::istream& source, const std::vector<std::string>& columns) {
    if (columns.empty()) throw ParameterError("load_csv: no columns requested");

    std::string header_line;
    if (!std::getline(source, header_line)) throw SchemaError("load_csv: empty input");
    const std::vector<std::string> header = split_fields(header_line);

    std::vector<std::size_t> picks;
    picks.reserve(columns.size());
    for (const std::string& name : columns) {
        auto it = std::find_if(header.begin(), header.end(),
                               [&](const std::string& h) { return trim(h) == name; });
        if (it == header.end()) {
            throw SchemaError("load_csv: missing column '" + name + "'");
        }
        picks.push_back(static_cast<std::size_t>(it - header.begin()));
    }

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t data_row = 0;
    while (std::getline(source, line)) {
        if (trim(line).empty()) continue;
        ++data_row;
        const std::vector<std::string> fields = split_fields(line);
        std::vector<double> values;
        values.reserve(picks.size());
        for (std::size_t c = 0; c < picks.size(); ++c) {
            if (picks[c] >= fields.size()) {
                throw ParseError("CSV parse error at data row " + std::to_string(data_row) +
                                 ": row has too few fields for column '" + columns[c] + "'");
            }
            values.push_back(parse_real(fields[picks[c]], data_row, columns[c]));
        }
        rows.push_back(std::move(values));
    }
    if (rows.empty()) throw SchemaError("load_csv: no data rows");
    return ScenarioSet::from_rows(std::move(rows));
}

ScenarioSet bin_scenarios(const ScenarioSet& set, const BinningSpec& spec) {
    const std::size_t dim = set.dimension();
    if (spec.widths.size() != dim) {
        throw ParameterError("bin_scenarios: widths length must equal scenario dimension");
    }
    for (double w : spec.widths) {
        if (!(w > 0.0)) throw ParameterError("bin_scenarios: bin widths must be positive");
    }
    std::vector<double> origins = spec.origins;
    if (origins.empty()) origins.assign(dim, 0.0);
    if (origins.size() != dim) {
        throw ParameterError("bin_scenarios: origins length must equal scenario dimension");
    }

    std::map<std::vector<std::int64_t>, std::size_t> slot_of_key;
    std::vector<std::vector<double>> centers;
    std::vector<long> counts;
    for (std::size_t i = 0; i < set.size(); ++i) {
        std::vector<std::int64_t> key(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            key[d] = static_cast<std::int64_t>(
                std::floor((set.scenario(i).values[d] - origins[d]) / spec.widths[d]));
        }
        auto [it, inserted] = slot_of_key.try_emplace(key, centers.size());
        if (inserted) {
            std::vector<double> center(dim);
            for (std::size_t d = 0; d < dim; ++d) {
                center[d] = origins[d] + (static_cast<double>(key[d]) + 0.5) * spec.widths[d];
            }
            centers.push_back(std::move(center));
            counts.push_back(set.count(i));
        } else {
            counts[it->second] += set.count(i);
        }
    }
    return ScenarioSet::from_support(std::move(centers), std::move(counts));
}

std::vector<std::size_t> sample_batch(const EmpiricalDistribution& dist, std::size_t n,
                                      Rng& rng) {
    if (n == 0) throw ParameterError("sample_batch: batch size must be >= 1");

    // Inverse-CDF sampling against a compensated cumulative table; the final
    // entry is forced to 1 so every u in [0,1) lands on a valid index.
    std::vector<double> cum(dist.size());
    CompensatedSum acc;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        acc.add(dist.p()[i]);
        cum[i] = acc.value();
    }
    cum.back() = 1.0;

    std::vector<std::size_t> indices(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = uniform_unit(rng);
        const auto it = std::upper_bound(cum.begin(), cum.end(), u);
        indices[k] = static_cast<std::size_t>(it - cum.begin());
        if (indices[k] >= dist.size()) indices[k] = dist.size() - 1;
    }
    return indices;
}

namespace {

double log_likelihood_at_empirical(const ScenarioSet& set) {
    const double total = static_cast<double>(set.total());
    CompensatedSum acc;
    for (std::size_t i = 0; i < set.size(); ++i) {
        const double ni = static_cast<double>(set.count(i));
        acc.add(ni * std::log(ni / total));
    }
    return acc.value();
}

} // namespace

double likelihood_gamma_star(const ScenarioSet& set, double alpha) {
    if (set.size() < 2) {
        throw SchemaError("likelihood_gamma_star: support size must be >= 2");
    }
    if (!(alpha > 0.0) || alpha > 1.0) {
        throw ParameterError("likelihood_gamma_star: alpha must lie in (0, 1]");
    }
    const int dof = static_cast<int>(set.size()) - 1;
    const double quantile = chi_square_quantile(dof, 1.0 - alpha);
    return log_likelihood_at_empirical(set) - 0.5 * quantile;
}

double gamma_to_rho(const ScenarioSet& set, double gamma) {
    const double max_ll = log_likelihood_at_empirical(set);
    const double rho = (max_ll - gamma) / static_cast<double>(set.total());
    if (rho < -1e-12) {
        throw ParameterError("gamma_to_rho: gamma exceeds the maximum-likelihood value");
    }
    return rho < 0.0 ? 0.0 : rho;
}

} // namespace drokit
