#include "drokit/problems.hpp"

#include <cmath>
#include <utility>

#include "drokit/errors.hpp"
#include "drokit/summation.hpp"

namespace drokit {

namespace {

double softplus(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

class ToyBeyerProblem : public StochasticProblem {
public:
    std::string name() const override { return "toy_beyer"; }
    std::size_t dimension() const override { return 1; }

    double loss(std::span<const double> x, const Scenario& xi) const override {
        const double v = xi.values[0];
        return v - (v - 1.0) * x[0] * x[0];
    }

    std::vector<double> loss_gradient(std::span<const double> x,
                                      const Scenario& xi) const override {
        return {2.0 * (1.0 - xi.values[0]) * x[0]};
    }

    std::optional<Box> feasible_box() const override { return Box{{0.0}, {1.0}}; }
    std::vector<double> default_start() const override { return {0.5}; }

    std::shared_ptr<const ScenarioSet> default_scenarios() const override {
        static const auto set = std::make_shared<const ScenarioSet>(ScenarioSet::from_rows(
            {{-0.8}, {-0.4}, {0.0}, {0.4}, {0.8}}));
        return set;
    }

    Scenario default_nominal() const override { return Scenario{{0.0}, 0}; }
};

class ConstrainedQuadraticProblem : public StochasticProblem {
public:
    ConstrainedQuadraticProblem(std::vector<double> center, std::vector<double> a, double b,
                                double sigma)
        : center_(std::move(center)), a_(std::move(a)), b_(b), sigma_(sigma) {
        if (center_.empty() || a_.size() != center_.size()) {
            throw ParameterError("constrained_quadratic: center and a must share a dimension");
        }
    }

    std::string name() const override { return "constrained_quadratic"; }
    std::size_t dimension() const override { return center_.size(); }

    double loss(std::span<const double> x, const Scenario& xi) const override {
        CompensatedSum acc;
        for (std::size_t i = 0; i < center_.size(); ++i) {
            const double d = x[i] - center_[i] - sigma_ * xi.values[i];
            acc.add(d * d);
        }
        return acc.value();
    }

    std::vector<double> loss_gradient(std::span<const double> x,
                                      const Scenario& xi) const override {
        std::vector<double> g(center_.size());
        for (std::size_t i = 0; i < center_.size(); ++i) {
            g[i] = 2.0 * (x[i] - center_[i] - sigma_ * xi.values[i]);
        }
        return g;
    }

    std::size_t constraint_count() const override { return 1; }

    double constraint(std::size_t i, std::span<const double> x) const override {
        if (i != 0) throw ContractError("constrained_quadratic: constraint index out of range");
        return compensated_dot(a_, x) - b_;
    }

    std::vector<double> constraint_gradient(std::size_t i,
                                            std::span<const double>) const override {
        if (i != 0) throw ContractError("constrained_quadratic: constraint index out of range");
        return a_;
    }

    std::vector<double> default_start() const override {
        return std::vector<double>(center_.size(), 0.0);
    }

    std::shared_ptr<const ScenarioSet> default_scenarios() const override {
        if (!scenarios_) {
            // Zero-mean perturbation directions; for d = 2 the eight compass
            // directions, otherwise +-e_i.
            std::vector<std::vector<double>> rows;
            const std::size_t d = center_.size();
            if (d == 2) {
                const double s = 1.0 / std::sqrt(2.0);
                rows = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {s, s}, {s, -s}, {-s, s}, {-s, -s}};
            } else {
                for (std::size_t i = 0; i < d; ++i) {
                    std::vector<double> plus(d, 0.0), minus(d, 0.0);
                    plus[i] = 1.0;
                    minus[i] = -1.0;
                    rows.push_back(plus);
                    rows.push_back(minus);
                }
            }
            scenarios_ = std::make_shared<const ScenarioSet>(ScenarioSet::from_rows(rows));
        }
        return scenarios_;
    }

    Scenario default_nominal() const override {
        return Scenario{std::vector<double>(center_.size(), 0.0), 0};
    }

private:
    std::vector<double> center_;
    std::vector<double> a_;
    double b_;
    double sigma_;
    mutable std::shared_ptr<const ScenarioSet> scenarios_;
};

// Surrogate constants. The drag-rise threshold moves by kThresholdGain per
// unit of mean design displacement; the bowl makes that displacement cost
// kBowl per squared coordinate. Chosen so the deterministic, empirical-mean
// and worst-case optima are separated by several ramp widths.
constexpr double kBaseDrag = 0.011;
constexpr double kBowl = 0.5;
constexpr double kRampHeight = 3.0;
constexpr double kRampWidth = 0.003;
constexpr double kThresholdGain = 0.12;
constexpr double kThresholdBase = 0.715;
constexpr double kRefCoord = 0.1;
constexpr double kNominalMach = 0.729;
// Observed flight data centers slightly above the nominal design condition,
// so the single-point design is structurally off the empirical optimum.
constexpr double kDataMach = 0.733;

class AirfoilSurrogateProblem : public StochasticProblem {
public:
    explicit AirfoilSurrogateProblem(std::size_t dimension) : dim_(dimension) {
        if (dim_ < 1) throw ParameterError("airfoil_surrogate: dimension must be >= 1");
    }

    std::string name() const override { return "airfoil_surrogate"; }
    std::size_t dimension() const override { return dim_; }

    double loss(std::span<const double> x, const Scenario& xi) const override {
        const double mach = xi.values[0];
        CompensatedSum bowl;
        for (std::size_t i = 0; i < dim_; ++i) {
            const double d = x[i] - kRefCoord;
            bowl.add(d * d);
        }
        const double z = (mach - threshold(x)) / kRampWidth;
        return kBaseDrag + kBowl * bowl.value() + kRampHeight * kRampWidth * softplus(z);
    }

    std::vector<double> loss_gradient(std::span<const double> x,
                                      const Scenario& xi) const override {
        const double mach = xi.values[0];
        const double z = (mach - threshold(x)) / kRampWidth;
        const double ramp_pull = kRampHeight * sigmoid(z) * kThresholdGain /
                                 static_cast<double>(dim_);
        std::vector<double> g(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            g[i] = 2.0 * kBowl * (x[i] - kRefCoord) - ramp_pull;
        }
        return g;
    }

    std::size_t constraint_count() const override { return 2; }

    // g0: pitching-moment style linear limit; g1: thickness style concave
    // limit t(x) = t0 - ||x||^2 >= tmin, i.e. ||x||^2 <= 1.
    double constraint(std::size_t i, std::span<const double> x) const override {
        if (i == 0) {
            double v = x[0];
            if (dim_ > 1) v += 0.5 * x[1];
            return v - 0.8;
        }
        if (i == 1) {
            CompensatedSum acc;
            for (double c : x) acc.add(c * c);
            return acc.value() - 1.0;
        }
        throw ContractError("airfoil_surrogate: constraint index out of range");
    }

    std::vector<double> constraint_gradient(std::size_t i,
                                            std::span<const double> x) const override {
        if (i == 0) {
            std::vector<double> g(dim_, 0.0);
            g[0] = 1.0;
            if (dim_ > 1) g[1] = 0.5;
            return g;
        }
        if (i == 1) {
            std::vector<double> g(dim_);
            for (std::size_t j = 0; j < dim_; ++j) g[j] = 2.0 * x[j];
            return g;
        }
        throw ContractError("airfoil_surrogate: constraint index out of range");
    }

    std::vector<double> default_start() const override {
        return std::vector<double>(dim_, kRefCoord);
    }

    std::shared_ptr<const ScenarioSet> default_scenarios() const override {
        if (!scenarios_) {
            // Binomial weights stand in for normal Mach samples around the
            // observed cruise point.
            std::vector<std::vector<double>> support;
            std::vector<long> counts;
            long binom = 1;
            for (int j = 0; j <= 8; ++j) {
                support.push_back({kDataMach + 0.005 * (j - 4)});
                counts.push_back(binom);
                binom = binom * (8 - j) / (j + 1);
            }
            scenarios_ = std::make_shared<const ScenarioSet>(
                ScenarioSet::from_support(std::move(support), std::move(counts)));
        }
        return scenarios_;
    }

    Scenario default_nominal() const override { return Scenario{{kNominalMach}, 0}; }

private:
    double threshold(std::span<const double> x) const {
        CompensatedSum acc;
        for (double c : x) acc.add(c);
        return kThresholdBase + kThresholdGain * acc.value() / static_cast<double>(dim_);
    }

    std::size_t dim_;
    mutable std::shared_ptr<const ScenarioSet> scenarios_;
};

class CorruptedGradientFixture : public ToyBeyerProblem {
public:
    std::string name() const override { return "corrupted_gradient_fixture"; }

    std::vector<double> loss_gradient(std::span<const double> x,
                                      const Scenario& xi) const override {
        auto g = ToyBeyerProblem::loss_gradient(x, xi);
        for (double& v : g) v *= 1.5;
        return g;
    }
};

} // namespace

std::shared_ptr<const StochasticProblem> toy_beyer() {
    return std::make_shared<const ToyBeyerProblem>();
}

std::shared_ptr<const StochasticProblem> constrained_quadratic(std::vector<double> center,
                                                               std::vector<double> a, double b,
                                                               double noise_scale) {
    return std::make_shared<const ConstrainedQuadraticProblem>(std::move(center), std::move(a),
                                                               b, noise_scale);
}

std::shared_ptr<const StochasticProblem> constrained_quadratic(double noise_scale) {
    return constrained_quadratic({1.0, 1.0}, {1.0, 0.0}, 0.5, noise_scale);
}

std::shared_ptr<const StochasticProblem> airfoil_surrogate(std::size_t dimension) {
    return std::make_shared<const AirfoilSurrogateProblem>(dimension);
}

std::shared_ptr<const StochasticProblem> corrupted_gradient_fixture() {
    return std::make_shared<const CorruptedGradientFixture>();
}

} // namespace drokit
