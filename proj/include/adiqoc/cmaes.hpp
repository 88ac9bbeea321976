#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "adiqoc/types.hpp"

namespace adiqoc {

struct SearchSpace {
    int dim = 0;
    RealVector lower;
    RealVector upper;
    RealVector initialMean;
    double initialSigma = 0.3; // fraction of the box width

    void validate() const;
};

// Objective evaluations report the scalar cost plus the fidelity / power
// split used for convergence logging; plain objectives can leave the split
// at (cost, 0).
struct ObjectiveValue {
    double cost = 0.0;
    double fidelityTerm = 0.0;
    double powerPenalty = 0.0;
};

using Objective = std::function<ObjectiveValue(const RealVector&)>;

struct IterationRecord {
    int iteration = 0;
    double meanCost = 0.0;      // population mean of this generation
    double bestCost = 0.0;      // best-so-far
    double fidelityTerm = 0.0;  // component of the best-so-far sample
    double powerPenalty = 0.0;  // component of the best-so-far sample
};

struct OptimizationRun {
    RealVector bestParams;
    double bestCost = 0.0;
    ObjectiveValue bestValue;
    std::vector<IterationRecord> history;
    int budget = 0;
    std::uint64_t seed = 0;
    long evaluations = 0;
    int nonFiniteSamples = 0;
};

struct CmaesOptions {
    int populationSize = 0; // 0 = 4 + floor(3 ln dim)
    int threads = 1;
    double boundaryPenaltyWeight = 1.0;
};

/// Covariance matrix adaptation evolution strategy with rank-1 and rank-mu
/// covariance updates, cumulative step-size adaptation, and box constraints
/// handled by projection plus a quadratic distance penalty. Sampling is
/// keyed by (seed, generation, sample), so runs are bit-reproducible and
/// independent of evaluation order.
OptimizationRun cmaes_minimize(const Objective& objective, const SearchSpace& space, int budget,
                               const CmaesOptions& options, std::uint64_t seed);

/// Convenience wrapper for plain scalar objectives.
OptimizationRun cmaes_minimize(const std::function<double(const RealVector&)>& objective,
                               const SearchSpace& space, int budget, const CmaesOptions& options,
                               std::uint64_t seed);

} // namespace adiqoc
