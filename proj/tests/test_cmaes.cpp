#include <doctest.h>

#include <cmath>

#include "adiqoc/cmaes.hpp"

using namespace adiqoc;

namespace {

SearchSpace box(int dim, double lo, double hi, double mean) {
    SearchSpace space;
    space.dim = dim;
    space.lower = RealVector::Constant(dim, lo);
    space.upper = RealVector::Constant(dim, hi);
    space.initialMean = RealVector::Constant(dim, mean);
    return space;
}

double sphere(const RealVector& x) { return x.squaredNorm(); }

double rosenbrock(const RealVector& x) {
    double acc = 0.0;
    for (int i = 0; i + 1 < x.size(); ++i)
        acc += 100.0 * std::pow(x(i + 1) - x(i) * x(i), 2) + std::pow(1.0 - x(i), 2);
    return acc;
}

} // namespace

TEST_CASE("sphere function converges well below 1e-9") {
    const OptimizationRun run =
        cmaes_minimize(std::function<double(const RealVector&)>(sphere), box(5, -5, 5, 1.0), 300,
                       {}, 17);
    CHECK(run.bestCost < 1e-9);
}

TEST_CASE("rosenbrock reaches the analytic minimum") {
    const OptimizationRun run = cmaes_minimize(std::function<double(const RealVector&)>(rosenbrock),
                                               box(4, -5, 5, 0.0), 2000, {}, 3);
    CHECK(run.bestCost < 1e-6);
    for (int i = 0; i < 4; ++i) CHECK(run.bestParams(i) == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("constant objective returns the constant and exhausts the budget") {
    const OptimizationRun run = cmaes_minimize(
        std::function<double(const RealVector&)>([](const RealVector&) { return 4.25; }),
        box(3, -1, 1, 0.0), 25, {}, 5);
    CHECK(run.bestCost == 4.25);
    CHECK(static_cast<int>(run.history.size()) == 25);
}

TEST_CASE("fixed seed gives bitwise-identical runs, and threads do not matter") {
    const auto objective = std::function<double(const RealVector&)>(rosenbrock);
    CmaesOptions one;
    one.threads = 1;
    CmaesOptions four;
    four.threads = 4;

    const OptimizationRun a = cmaes_minimize(objective, box(4, -3, 3, 0.0), 60, one, 11);
    const OptimizationRun b = cmaes_minimize(objective, box(4, -3, 3, 0.0), 60, one, 11);
    const OptimizationRun c = cmaes_minimize(objective, box(4, -3, 3, 0.0), 60, four, 11);

    CHECK(a.bestCost == b.bestCost);
    CHECK(a.bestParams == b.bestParams);
    CHECK(a.bestCost == c.bestCost);
    CHECK(a.bestParams == c.bestParams);
    REQUIRE(a.history.size() == c.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) {
        CHECK(a.history[i].meanCost == c.history[i].meanCost);
        CHECK(a.history[i].bestCost == c.history[i].bestCost);
    }

    const OptimizationRun d = cmaes_minimize(objective, box(4, -3, 3, 0.0), 60, one, 12);
    CHECK(d.bestCost != a.bestCost);
}

TEST_CASE("best cost is monotone nonincreasing over the history") {
    const OptimizationRun run = cmaes_minimize(
        std::function<double(const RealVector&)>(rosenbrock), box(6, -4, 4, 2.0), 150, {}, 23);
    for (std::size_t i = 1; i < run.history.size(); ++i)
        CHECK(run.history[i].bestCost <= run.history[i - 1].bestCost);
}

TEST_CASE("solutions respect box bounds even when the optimum lies outside") {
    // minimum of the shifted sphere sits at (3,...,3), outside [-1, 1]
    const auto shifted = std::function<double(const RealVector&)>(
        [](const RealVector& x) { return (x.array() - 3.0).matrix().squaredNorm(); });
    const OptimizationRun run = cmaes_minimize(shifted, box(3, -1, 1, 0.0), 150, {}, 8);
    for (int i = 0; i < 3; ++i) {
        CHECK(run.bestParams(i) <= 1.0);
        CHECK(run.bestParams(i) >= -1.0);
        CHECK(run.bestParams(i) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("non-finite objective values are absorbed and flagged") {
    const auto patchy = std::function<double(const RealVector&)>([](const RealVector& x) {
        if (x(0) < -0.5) return std::numeric_limits<double>::quiet_NaN();
        return x.squaredNorm();
    });
    const OptimizationRun run = cmaes_minimize(patchy, box(2, -2, 2, -1.0), 200, {}, 99);
    CHECK(run.nonFiniteSamples > 0);
    CHECK(std::isfinite(run.bestCost));
    CHECK(run.bestCost < 1e-6);
}

TEST_CASE("search space validation") {
    SearchSpace bad = box(2, 1.0, -1.0, 0.0);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    SearchSpace outside = box(2, -1.0, 1.0, 2.0);
    CHECK_THROWS_AS(outside.validate(), std::invalid_argument);

    const auto objective = std::function<double(const RealVector&)>(sphere);
    CHECK_THROWS_AS(cmaes_minimize(objective, box(2, -1, 1, 0.0), 0, {}, 1),
                    std::invalid_argument);
}
