#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "drokit/errors.hpp"
#include "drokit/objectives.hpp"
#include "drokit/problems.hpp"

using namespace drokit;

namespace {

// Per-scenario loss equal to the scenario value itself; the design is inert.
// Lets estimator tests pin exact loss vectors like [1, 2, 3].
class TableProblem : public StochasticProblem {
public:
    std::string name() const override { return "table"; }
    std::size_t dimension() const override { return 1; }
    double loss(std::span<const double>, const Scenario& xi) const override {
        return xi.values[0];
    }
    std::vector<double> loss_gradient(std::span<const double>, const Scenario&) const override {
        return {0.0};
    }
    std::vector<double> default_start() const override { return {0.0}; }
    std::shared_ptr<const ScenarioSet> default_scenarios() const override {
        return std::make_shared<const ScenarioSet>(
            ScenarioSet::from_rows({{1.0}, {2.0}, {3.0}}));
    }
};

EmpiricalDistribution toy_distribution() {
    return EmpiricalDistribution(toy_beyer()->default_scenarios());
}

double toy_loss(double x, double xi) { return xi - (xi - 1.0) * x * x; }

} // namespace

TEST_CASE("multipoint equals the weighted sum of condition losses") {
    const auto problem = toy_beyer();
    const std::vector<Scenario> points{{{-0.8}, 0}, {{0.8}, 1}};
    const std::vector<double> x{0.5};

    const double both = multipoint(std::vector<double>{0.5, 0.5}, points, *problem, x);
    CHECK(both == doctest::Approx(0.25).epsilon(1e-14)); // 0.5*(-0.35) + 0.5*0.85

    const double single =
        multipoint(std::vector<double>{1.0}, {points[1]}, *problem, x);
    CHECK(single == doctest::Approx(toy_loss(0.5, 0.8)).epsilon(1e-14));

    CHECK_THROWS_AS(multipoint(std::vector<double>{1.0}, points, *problem, x), ContractError);
    CHECK_THROWS_AS(multipoint(std::vector<double>{-0.1, 1.1}, points, *problem, x),
                    ContractError);
}

TEST_CASE("multipoint with uniform weights equals the empirical mean") {
    const auto problem = toy_beyer();
    const EmpiricalDistribution dist = toy_distribution();
    std::vector<Scenario> points;
    for (std::size_t i = 0; i < dist.size(); ++i) points.push_back(dist.set().scenario(i));
    const std::vector<double> weights(points.size(), 1.0 / points.size());
    const std::vector<double> x{0.73};
    CHECK(multipoint(weights, points, *problem, x) ==
          doctest::Approx(empirical_mean(*problem, x, dist).value).epsilon(1e-14));
}

TEST_CASE("empirical mean on the toy problem is x^2 with gradient 2x") {
    const auto problem = toy_beyer();
    const EmpiricalDistribution dist = toy_distribution();
    const std::vector<double> x{0.5};
    const ObjectiveReport report = empirical_mean(*problem, x, dist);
    CHECK(report.value == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(report.gradient[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(report.variance == doctest::Approx(0.32 * 0.5625).epsilon(1e-12));
    CHECK_FALSE(report.worst_case_q.has_value());
}

TEST_CASE("a point mass reduces the empirical mean to the deterministic loss") {
    const auto problem = toy_beyer();
    const EmpiricalDistribution dist(problem->default_scenarios(),
                                     {0.0, 0.0, 0.0, 0.0, 1.0});
    const std::vector<double> x{0.3};
    CHECK(empirical_mean(*problem, x, dist).value ==
          doctest::Approx(toy_loss(0.3, 0.8)).epsilon(1e-14));
}

TEST_CASE("mean_variance examples") {
    const TableProblem table;
    const EmpiricalDistribution dist(table.default_scenarios());
    const std::vector<double> x{0.0};

    CHECK(mean_variance(table, x, dist, 0.0).value ==
          doctest::Approx(empirical_mean(table, x, dist).value).epsilon(1e-15));
    CHECK(mean_variance(table, x, dist, 1.0).value ==
          doctest::Approx(2.0 + 2.0 / 3.0).epsilon(1e-13));

    const auto toy = toy_beyer();
    const EmpiricalDistribution toy_dist = toy_distribution();
    const ObjectiveReport report = mean_variance(*toy, {{0.5}}, toy_dist, 1.0);
    CHECK(report.value == doctest::Approx(0.43).epsilon(1e-12)); // x^2 + 0.32 (1 - x^2)^2
}

TEST_CASE("mean_variance gradient matches finite differences") {
    const auto toy = toy_beyer();
    const EmpiricalDistribution dist = toy_distribution();
    const double mu = 2.5;
    for (double x : {0.2, 0.5, 0.8}) {
        const double h = 1e-6;
        const double up = mean_variance(*toy, {{x + h}}, dist, mu).value;
        const double down = mean_variance(*toy, {{x - h}}, dist, mu).value;
        const double fd = (up - down) / (2.0 * h);
        const double analytic = mean_variance(*toy, {{x}}, dist, mu).gradient[0];
        CHECK(analytic == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("robust_objective dispatches the deterministic mode") {
    const auto toy = toy_beyer();
    const EmpiricalDistribution dist = toy_distribution();
    for (double xi : {-0.8, 0.0, 0.4}) {
        const ObjectiveReport report = robust_objective(
            *toy, {{1.0}}, dist, RobustnessSpec::deterministic(Scenario{{xi}, 0}));
        CHECK(report.value == doctest::Approx(1.0).epsilon(1e-15)); // l(1, xi) = 1
    }
}

TEST_CASE("robust_objective DRO value matches the inner solver example") {
    const TableProblem table;
    const EmpiricalDistribution dist(table.default_scenarios());
    const ObjectiveReport report =
        robust_objective(table, {{0.0}}, dist,
                         RobustnessSpec::dro_penalized(DivergenceKind::Chi2, 10.0));
    CHECK(report.value == doctest::Approx(2.0333333333).epsilon(1e-10));
    REQUIRE(report.worst_case_q.has_value());
    CHECK((*report.worst_case_q)[0] == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(report.clamped.size() == 3);
}

TEST_CASE("MV stationary point of the toy problem sits at the analytic location") {
    // d/dx [x^2 + 0.32 mu (1 - x^2)^2] = 0 at x = sqrt(1 - 1/(0.64 mu)).
    const auto toy = toy_beyer();
    const EmpiricalDistribution dist = toy_distribution();
    const double mu = 3.125;
    const double x_star = std::sqrt(1.0 - 1.0 / (0.64 * mu));
    CHECK(x_star == doctest::Approx(0.7071068).epsilon(1e-6));
    CHECK(mean_variance(*toy, {{x_star}}, dist, mu).gradient[0] ==
          doctest::Approx(0.0).epsilon(1e-12));

    // grid + golden polish of the MV value lands on the same point
    double best_x = 0.0;
    double best_v = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 1000; ++i) {
        const double x = i / 1000.0;
        const double v = mean_variance(*toy, {{x}}, dist, mu).value;
        if (v < best_v) {
            best_v = v;
            best_x = x;
        }
    }
    double a = std::max(0.0, best_x - 1e-3);
    double b = std::min(1.0, best_x + 1e-3);
    for (int it = 0; it < 100; ++it) {
        const double m1 = a + (b - a) / 3.0;
        const double m2 = b - (b - a) / 3.0;
        if (mean_variance(*toy, {{m1}}, dist, mu).value <
            mean_variance(*toy, {{m2}}, dist, mu).value) {
            b = m2;
        } else {
            a = m1;
        }
    }
    CHECK(0.5 * (a + b) == doctest::Approx(x_star).epsilon(1e-6));
}

TEST_CASE("ordering: empirical mean <= penalized DRO <= max scenario loss") {
    const auto toy = toy_beyer();
    const EmpiricalDistribution dist = toy_distribution();
    for (double x : {0.1, 0.45, 0.9}) {
        const ObjectiveReport mean_report = empirical_mean(*toy, {{x}}, dist);
        const ObjectiveReport dro_report = robust_objective(
            *toy, {{x}}, dist, RobustnessSpec::dro_penalized(DivergenceKind::Chi2, 0.3));
        double worst = mean_report.per_scenario_losses[0];
        for (double f : mean_report.per_scenario_losses) worst = std::max(worst, f);
        CHECK(mean_report.value <= dro_report.value + 1e-12);
        CHECK(dro_report.value <= worst + 1e-12);
    }
}

TEST_CASE("constrained DRO value is nondecreasing in rho on the toy problem") {
    const auto toy = toy_beyer();
    const EmpiricalDistribution dist = toy_distribution();
    double prev = -1e300;
    for (double rho : {0.0, 0.05, 0.2, 0.8}) {
        const double value =
            robust_objective(*toy, {{0.4}}, dist,
                             RobustnessSpec::dro_constrained(DivergenceKind::Chi2, rho))
                .value;
        CHECK(value >= prev - 1e-12);
        prev = value;
    }
}

TEST_CASE("MV equals penalized chi-square DRO with mu = 1/(2 delta) in the valid regime") {
    const auto toy = toy_beyer();
    const EmpiricalDistribution dist = toy_distribution();
    for (double delta : {5.0, 50.0, 500.0}) {
        for (double x : {0.2, 0.6, 0.95}) {
            const ObjectiveReport dro = robust_objective(
                *toy, {{x}}, dist, RobustnessSpec::dro_penalized(DivergenceKind::Chi2, delta));
            const ObjectiveReport mv = mean_variance(*toy, {{x}}, dist, 1.0 / (2.0 * delta));
            CHECK(std::abs(dro.value - mv.value) <= 1e-9);
        }
    }
}

TEST_CASE("toy DRO grid argmin sits at zero for every robustness level") {
    const auto toy = toy_beyer();
    const EmpiricalDistribution dist = toy_distribution();
    for (double delta : {0.1, 1.0}) {
        double best_x = -1.0;
        double best_v = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 200; ++i) { // coarse slice; the fine scan runs in acceptance
            const double x = i / 200.0;
            const double v = robust_objective(
                                 *toy, {{x}}, dist,
                                 RobustnessSpec::dro_penalized(DivergenceKind::Chi2, delta))
                                 .value;
            if (v < best_v) {
                best_v = v;
                best_x = x;
            }
        }
        CHECK(best_x == doctest::Approx(0.0));
    }
}

TEST_CASE("finite_difference_check accepts the built-ins and catches corruption") {
    CHECK(finite_difference_check(*toy_beyer(), {{0.5}}, 1e-6) <= 1e-8);
    const auto quad = constrained_quadratic(0.1);
    CHECK(finite_difference_check(*quad, quad->default_start(), 1e-6) <= 1e-9);
    const auto airfoil = airfoil_surrogate(3);
    CHECK(finite_difference_check(*airfoil, airfoil->default_start(), 1e-6) <= 1e-5);

    const auto corrupted = corrupted_gradient_fixture();
    CHECK(finite_difference_check(*corrupted, {{0.5}}, 1e-6) >= 0.1);
}

TEST_CASE("finite_difference_check enforces the box margin") {
    CHECK_THROWS_AS(finite_difference_check(*toy_beyer(), {{0.9999999}}, 1e-6),
                    ParameterError);
}

TEST_CASE("batch estimators use plug-in uniform weights with multiplicity") {
    const TableProblem table;
    const std::vector<Scenario> batch{{{1.0}, 0}, {{1.0}, 0}, {{3.0}, 2}};
    const ObjectiveReport report =
        robust_objective(table, {{0.0}}, batch, RobustnessSpec::empirical_mean());
    CHECK(report.value == doctest::Approx((1.0 + 1.0 + 3.0) / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(robust_objective(table, {{0.0}}, std::vector<Scenario>{},
                                     RobustnessSpec::empirical_mean()),
                    ContractError);
}

TEST_CASE("constrained_quadratic geometry") {
    const auto quad = constrained_quadratic(0.0);
    CHECK(quad->constraint_count() == 1);
    // analytic projection of the center onto the halfspace
    const std::vector<double> solution{0.5, 1.0};
    CHECK(quad->constraint(0, solution) == doctest::Approx(0.0).epsilon(1e-15));
    const Scenario zero{{0.0, 0.0}, 0};
    CHECK(quad->loss(solution, zero) == doctest::Approx(0.25).epsilon(1e-15));
    // sigma = 0 collapses every scenario to the same quadratic
    const auto set = quad->default_scenarios();
    for (std::size_t i = 0; i < set->size(); ++i) {
        CHECK(quad->loss(solution, set->scenario(i)) ==
              doctest::Approx(0.25).epsilon(1e-15));
    }
}

TEST_CASE("airfoil surrogate reference design is strictly feasible") {
    const auto airfoil = airfoil_surrogate(3);
    const std::vector<double> x_ref = airfoil->default_start();
    for (std::size_t i = 0; i < airfoil->constraint_count(); ++i) {
        CHECK(airfoil->constraint(i, x_ref) < 0.0);
    }
    CHECK(airfoil->default_nominal().values[0] == doctest::Approx(0.729));
    CHECK(airfoil->default_scenarios()->total() == 256);
}

TEST_CASE("airfoil surrogate loss rises with Mach beyond the threshold") {
    const auto airfoil = airfoil_surrogate(3);
    const std::vector<double> x = airfoil->default_start();
    const double low = airfoil->loss(x, Scenario{{0.70}, 0});
    const double nominal = airfoil->loss(x, Scenario{{0.729}, 0});
    const double high = airfoil->loss(x, Scenario{{0.78}, 0});
    CHECK(low < nominal);
    CHECK(nominal < high);
    CHECK(high - low > 0.05); // the drag rise dominates the bowl at the tail
}
