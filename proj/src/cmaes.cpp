#include "adiqoc/cmaes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "adiqoc/parallel.hpp"
#include "adiqoc/rng.hpp"

namespace adiqoc {

void SearchSpace::validate() const {
    if (dim < 1) throw std::invalid_argument("SearchSpace: dim must be positive");
    if (lower.size() != dim || upper.size() != dim || initialMean.size() != dim)
        throw std::invalid_argument("SearchSpace: vector sizes must equal dim");
    for (int i = 0; i < dim; ++i) {
        if (!(lower(i) < upper(i)))
            throw std::invalid_argument("SearchSpace: lower must be < upper componentwise");
        if (initialMean(i) < lower(i) || initialMean(i) > upper(i))
            throw std::invalid_argument("SearchSpace: initialMean outside bounds");
    }
    if (!(initialSigma > 0.0)) throw std::invalid_argument("SearchSpace: initialSigma must be > 0");
}

namespace {

struct Strategy {
    // canonical hyperparameters, Hansen's defaults as functions of dim
    int n, lambda, mu;
    RealVector weights;
    double mueff, cc, cs, c1, cmu, damps, chiN;

    Strategy(int dim, int populationSize) : n(dim) {
        lambda = populationSize > 0 ? populationSize
                                    : 4 + static_cast<int>(std::floor(3.0 * std::log(n)));
        lambda = std::max(lambda, 4);
        mu = lambda / 2;
        weights = RealVector(mu);
        for (int i = 0; i < mu; ++i)
            weights(i) = std::log((lambda + 1.0) / 2.0) - std::log(i + 1.0);
        weights /= weights.sum();
        mueff = 1.0 / weights.squaredNorm();
        cc = (4.0 + mueff / n) / (n + 4.0 + 2.0 * mueff / n);
        cs = (mueff + 2.0) / (n + mueff + 5.0);
        c1 = 2.0 / ((n + 1.3) * (n + 1.3) + mueff);
        cmu = std::min(1.0 - c1,
                       2.0 * (mueff - 2.0 + 1.0 / mueff) / ((n + 2.0) * (n + 2.0) + mueff));
        damps = 1.0 + 2.0 * std::max(0.0, std::sqrt((mueff - 1.0) / (n + 1.0)) - 1.0) + cs;
        chiN = std::sqrt(static_cast<double>(n)) *
               (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));
    }
};

} // namespace

OptimizationRun cmaes_minimize(const Objective& objective, const SearchSpace& space, int budget,
                               const CmaesOptions& options, std::uint64_t seed) {
    space.validate();
    if (budget < 1) throw std::invalid_argument("cmaes_minimize: budget must be >= 1");

    const int n = space.dim;
    const Strategy st(n, options.populationSize);
    const RealVector range = space.upper - space.lower;

    // Work in box-normalized coordinates: x_phys = lower + u * range, u in [0,1].
    auto toPhysical = [&](const RealVector& u) -> RealVector {
        return space.lower.array() + u.array() * range.array();
    };
    auto clampUnit = [](RealVector u) {
        for (int i = 0; i < u.size(); ++i) u(i) = std::clamp(u(i), 0.0, 1.0);
        return u;
    };

    RealVector mean = (space.initialMean - space.lower).array() / range.array();
    double sigma = space.initialSigma;
    RealMatrix cov = RealMatrix::Identity(n, n);
    RealMatrix eigB = RealMatrix::Identity(n, n);
    RealVector eigD = RealVector::Ones(n);
    RealVector ps = RealVector::Zero(n);
    RealVector pc = RealVector::Zero(n);

    OptimizationRun run;
    run.budget = budget;
    run.seed = seed;
    run.bestCost = std::numeric_limits<double>::infinity();

    // Evaluate the initial mean so the reference point participates as a
    // candidate and bestCost starts from it.
    {
        const ObjectiveValue v0 = objective(toPhysical(clampUnit(mean)));
        ++run.evaluations;
        if (std::isfinite(v0.cost)) {
            run.bestCost = v0.cost;
            run.bestValue = v0;
            run.bestParams = toPhysical(clampUnit(mean));
        } else {
            ++run.nonFiniteSamples;
        }
    }

    std::vector<RealVector> ys(st.lambda), us(st.lambda);
    std::vector<ObjectiveValue> values(st.lambda);
    std::vector<double> penalized(st.lambda);

    for (int gen = 0; gen < budget; ++gen) {
        const KeyedRng rng(seed, static_cast<std::uint64_t>(gen) + 1);

        for (int i = 0; i < st.lambda; ++i) {
            RealVector z(n);
            for (int j = 0; j < n; ++j)
                z(j) = rng.gaussian(static_cast<std::uint64_t>(i) * n + j);
            ys[i] = eigB * (eigD.asDiagonal() * z);
            us[i] = mean + sigma * ys[i];
        }

        parallel_for(st.lambda, options.threads, [&](int i) {
            const RealVector feasible = clampUnit(us[i]);
            const double dist2 = (us[i] - feasible).squaredNorm();
            values[i] = objective(toPhysical(feasible));
            penalized[i] = values[i].cost + options.boundaryPenaltyWeight * dist2;
        });

        // Non-finite samples take the worst finite cost in the population.
        double worstFinite = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < st.lambda; ++i)
            if (std::isfinite(penalized[i])) worstFinite = std::max(worstFinite, penalized[i]);
        if (!std::isfinite(worstFinite)) worstFinite = 1e300;
        for (int i = 0; i < st.lambda; ++i)
            if (!std::isfinite(penalized[i])) {
                penalized[i] = worstFinite;
                ++run.nonFiniteSamples;
            }
        run.evaluations += st.lambda;

        std::vector<int> order(st.lambda);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return penalized[a] < penalized[b]; });

        // Best-so-far tracks the raw cost of the evaluated (feasible) point,
        // so bestCost always equals objective(bestParams).
        for (int i = 0; i < st.lambda; ++i)
            if (std::isfinite(values[i].cost) && values[i].cost < run.bestCost) {
                run.bestCost = values[i].cost;
                run.bestValue = values[i];
                run.bestParams = toPhysical(clampUnit(us[i]));
            }

        const RealVector oldMean = mean;
        RealVector yw = RealVector::Zero(n);
        for (int i = 0; i < st.mu; ++i) yw += st.weights(i) * ys[order[i]];
        mean = oldMean + sigma * yw;

        // cumulative step-size adaptation
        RealVector invSqrtCy = eigB * (eigD.cwiseInverse().asDiagonal() * (eigB.transpose() * yw));
        ps = (1.0 - st.cs) * ps + std::sqrt(st.cs * (2.0 - st.cs) * st.mueff) * invSqrtCy;
        const double psNorm = ps.norm();
        const double expectedDecay =
            std::sqrt(1.0 - std::pow(1.0 - st.cs, 2.0 * (gen + 1)));
        const bool hsig = psNorm / expectedDecay / st.chiN < 1.4 + 2.0 / (n + 1.0);

        pc = (1.0 - st.cc) * pc +
             (hsig ? std::sqrt(st.cc * (2.0 - st.cc) * st.mueff) : 0.0) * yw;

        RealMatrix rankMu = RealMatrix::Zero(n, n);
        for (int i = 0; i < st.mu; ++i)
            rankMu += st.weights(i) * (ys[order[i]] * ys[order[i]].transpose());
        const double hsigCorr = (1.0 - (hsig ? 1.0 : 0.0)) * st.cc * (2.0 - st.cc);
        cov = (1.0 - st.c1 - st.cmu) * cov + st.c1 * (pc * pc.transpose() + hsigCorr * cov) +
              st.cmu * rankMu;

        sigma *= std::exp((st.cs / st.damps) * (psNorm / st.chiN - 1.0));

        Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (cov + cov.transpose()));
        eigB = es.eigenvectors();
        eigD = es.eigenvalues().cwiseMax(1e-20).cwiseSqrt();

        IterationRecord rec;
        rec.iteration = gen;
        double meanCost = 0.0;
        for (int i = 0; i < st.lambda; ++i) meanCost += penalized[i];
        rec.meanCost = meanCost / st.lambda;
        rec.bestCost = run.bestCost;
        rec.fidelityTerm = run.bestValue.fidelityTerm;
        rec.powerPenalty = run.bestValue.powerPenalty;
        run.history.push_back(rec);
    }
    return run;
}

OptimizationRun cmaes_minimize(const std::function<double(const RealVector&)>& objective,
                               const SearchSpace& space, int budget, const CmaesOptions& options,
                               std::uint64_t seed) {
    return cmaes_minimize(
        [&objective](const RealVector& x) {
            ObjectiveValue v;
            v.cost = objective(x);
            v.fidelityTerm = v.cost;
            return v;
        },
        space, budget, options, seed);
}

} // namespace adiqoc
