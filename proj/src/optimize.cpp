#include "adiqoc/optimize.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace adiqoc {

int parameter_count(const PulseBasisConfig& config) {
    const int perControl = config.basis == BasisKind::Gaussian ? 3 * config.order : config.order;
    return perControl * static_cast<int>(config.controls.size());
}

ControlSet apply_parameters(const ControlSet& base, const PulseBasisConfig& config,
                            const RealVector& params) {
    if (params.size() != parameter_count(config))
        throw std::invalid_argument("apply_parameters: parameter count mismatch");
    ControlSet out = base;
    int at = 0;
    for (const auto& label : config.controls) {
        ControlPulse& pulse = out.byLabel(label);
        pulse.basis = config.basis;
        if (config.basis == BasisKind::Gaussian) {
            pulse.gaussians.resize(config.order);
            for (int m = 0; m < config.order; ++m) {
                pulse.gaussians[m].weight = params(at++);
                pulse.gaussians[m].center = params(at++);
                pulse.gaussians[m].width = params(at++);
            }
        } else {
            pulse.weights.assign(params.data() + at, params.data() + at + config.order);
            at += config.order;
        }
    }
    return out;
}

SearchSpace make_search_space(const ControlSet& base, const PulseBasisConfig& config) {
    const int n = parameter_count(config);
    SearchSpace space;
    space.dim = n;
    space.lower = RealVector(n);
    space.upper = RealVector(n);
    space.initialMean = RealVector(n);
    int at = 0;
    for (const auto& label : config.controls) {
        const ControlPulse& pulse = base.byLabel(label);
        const double t0 = pulse.domainStart();
        const double tf = pulse.domainEnd();
        const double span = tf - t0;
        if (config.basis == BasisKind::Gaussian) {
            for (int m = 0; m < config.order; ++m) {
                space.lower(at) = -config.weightBound;
                space.upper(at) = config.weightBound;
                space.initialMean(at) = 0.0;
                ++at;
                space.lower(at) = t0;
                space.upper(at) = tf;
                // spread the centers across the window
                space.initialMean(at) = t0 + (m + 0.5) * span / config.order;
                ++at;
                space.lower(at) = config.widthMinFraction * span;
                space.upper(at) = config.widthMaxFraction * span;
                space.initialMean(at) =
                    std::min(std::max(span / 10.0, space.lower(at)), space.upper(at));
                ++at;
            }
        } else {
            for (int m = 0; m < config.order; ++m) {
                space.lower(at) = -config.weightBound;
                space.upper(at) = config.weightBound;
                space.initialMean(at) = 0.0;
                ++at;
            }
        }
    }
    return space;
}

PulseOptimizationResult optimize_pulse(const ControlProblem& problem, const ControlSet& base,
                                       const PulseBasisConfig& config, const CostSpec& costSpec,
                                       int budget, std::uint64_t seed,
                                       const CmaesOptions& options) {
    costSpec.validate();
    PulseOptimizationResult result;

    if (parameter_count(config) == 0) {
        // nothing to optimize; report the reference cost
        const CostBreakdown breakdown = composite_cost(problem, base, costSpec);
        result.controls = base;
        result.run.bestCost = breakdown.total;
        result.run.bestValue = {breakdown.total, breakdown.fidelityTerm, breakdown.power};
        result.run.budget = budget;
        result.run.seed = seed;
        result.run.evaluations = 1;
        return result;
    }

    const SearchSpace space = make_search_space(base, config);
    const Objective objective = [&](const RealVector& params) {
        ObjectiveValue value;
        try {
            const ControlSet controls = apply_parameters(base, config, params);
            const CostBreakdown breakdown = composite_cost(problem, controls, costSpec);
            value.cost = breakdown.total;
            value.fidelityTerm = breakdown.fidelityTerm;
            value.powerPenalty = breakdown.power;
        } catch (const std::exception&) {
            // propagation failure: penalized as non-finite, flagged by CMA-ES
            value.cost = std::numeric_limits<double>::quiet_NaN();
        }
        return value;
    };

    result.run = cmaes_minimize(objective, space, budget, options, seed);
    result.controls = apply_parameters(base, config, result.run.bestParams);
    return result;
}

std::string history_csv(const OptimizationRun& run) {
    std::string out = "iteration,meanCost,bestCost,fidelityTerm,areaPenalty\n";
    char line[160];
    for (const auto& rec : run.history) {
        std::snprintf(line, sizeof(line), "%d,%.12g,%.12g,%.12g,%.12g\n", rec.iteration,
                      rec.meanCost, rec.bestCost, rec.fidelityTerm, rec.powerPenalty);
        out += line;
    }
    return out;
}

} // namespace adiqoc
