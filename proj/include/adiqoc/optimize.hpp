#pragma once

#include <string>
#include <vector>

#include "adiqoc/cmaes.hpp"
#include "adiqoc/cost.hpp"
#include "adiqoc/pulse.hpp"

namespace adiqoc {

// Which controls get basis corrections and how the coefficients are boxed.
// Sine / Chebyshev bases contribute `order` weights per control; the
// Gaussian basis contributes 3 * order parameters (weight, center, width).
struct PulseBasisConfig {
    std::vector<std::string> controls;
    BasisKind basis = BasisKind::Sine;
    int order = 6;
    double weightBound = 1.0;
    double widthMinFraction = 0.01; // sigma_m lower bound as fraction of span
    double widthMaxFraction = 1.0;
};

struct PulseOptimizationResult {
    ControlSet controls;
    OptimizationRun run;
};

int parameter_count(const PulseBasisConfig& config);

/// Expands a parameter vector into a corrected copy of the base controls.
ControlSet apply_parameters(const ControlSet& base, const PulseBasisConfig& config,
                            const RealVector& params);

SearchSpace make_search_space(const ControlSet& base, const PulseBasisConfig& config);

/// CMA-ES over the basis coefficients against the composite cost. The
/// uncorrected base controls are evaluated as the first candidate, so the
/// result is never worse than the reference in the optimized cost.
PulseOptimizationResult optimize_pulse(const ControlProblem& problem, const ControlSet& base,
                                       const PulseBasisConfig& config, const CostSpec& costSpec,
                                       int budget, std::uint64_t seed,
                                       const CmaesOptions& options = {});

/// Convergence history as CSV (iteration, meanCost, bestCost, fidelityTerm, areaPenalty).
std::string history_csv(const OptimizationRun& run);

} // namespace adiqoc
