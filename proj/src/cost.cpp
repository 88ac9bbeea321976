#include "adiqoc/cost.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace adiqoc {

void CostSpec::validate() const {
    if (!useTerminal && !useAdiabatic && !useEnsemble)
        throw std::invalid_argument("CostSpec: at least one fidelity term must be active");
    double sum = 0.0;
    if (useTerminal) {
        if (terminalWeight < 0.0) throw std::invalid_argument("CostSpec: negative weight");
        sum += terminalWeight;
    }
    if (useAdiabatic) {
        if (adiabaticWeight < 0.0) throw std::invalid_argument("CostSpec: negative weight");
        sum += adiabaticWeight;
    }
    if (useEnsemble) {
        if (ensembleWeight < 0.0) throw std::invalid_argument("CostSpec: negative weight");
        if (ensemble.members.empty())
            throw std::invalid_argument("CostSpec: ensemble term without members");
        for (const auto& m : ensemble.members)
            if (!(m.weight > 0.0)) throw std::invalid_argument("CostSpec: member weight <= 0");
        sum += ensembleWeight;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("CostSpec: active fidelity weights must sum to 1");
    if (eta < 0.0) throw std::invalid_argument("CostSpec: eta must be >= 0");
    if (c0 < 0.0) throw std::invalid_argument("CostSpec: c0 must be >= 0");
}

ControlSet ControlProblem::perturbControls(const ControlSet& controls,
                                           const PerturbationAlpha& alpha) const {
    ControlSet out = controls;
    for (std::size_t i = 0; i < out.pulses.size(); ++i) {
        const bool isDetuning = out.labels[i] == "Delta";
        if (isDetuning) {
            // shift realized as a constant offset folded into the reference
            ControlPulse& p = out.pulses[i];
            if (alpha.detuningShift != 0.0) {
                // represent Delta(t) + shift by sampling; keeps pulse algebra simple
                const TimeGrid& g = grid();
                std::vector<double> vals(g.nSteps + 1);
                for (int k = 0; k <= g.nSteps; ++k)
                    vals[k] = evaluate(p, g.node(k)) + alpha.detuningShift;
                ControlPulse shifted;
                shifted.basis = BasisKind::Sine;
                shifted.reference = ReferencePulse::sampled(std::move(vals), g.t0, g.tf);
                out.pulses[i] = shifted;
            }
        } else {
            ControlPulse& p = out.pulses[i];
            p.reference.amplitude *= alpha.amplitudeScale;
            for (auto& gt : p.gaussians) gt.weight *= alpha.amplitudeScale;
            for (auto& w : p.weights) w *= alpha.amplitudeScale;
        }
    }
    return out;
}

Trajectory ControlProblem::propagatePerturbed(const ControlSet& controls,
                                              const PerturbationAlpha& alpha) const {
    return propagate(perturbControls(controls, alpha));
}

QuantumState ControlProblem::targetPerturbed(const ControlSet& controls,
                                             const PerturbationAlpha& alpha) const {
    return target(perturbControls(controls, alpha));
}

double terminal_infidelity(const Trajectory& traj, const QuantumState& target) {
    if (traj.states.empty()) throw std::invalid_argument("terminal_infidelity: empty trajectory");
    return 1.0 - fidelity_amplitude(target, traj.final_state());
}

double adiabatic_infidelity(const Trajectory& traj, const Trajectory& referenceTraj) {
    const TimeGrid& a = traj.grid;
    const TimeGrid& b = referenceTraj.grid;
    if (a.nSteps != b.nSteps || std::abs(a.t0 - b.t0) > 1e-12 || std::abs(a.tf - b.tf) > 1e-12)
        throw std::invalid_argument("adiabatic_infidelity: grid mismatch");
    if (traj.states.size() != referenceTraj.states.size())
        throw std::invalid_argument("adiabatic_infidelity: state count mismatch");

    const int n = a.nSteps;
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double err = 1.0 - fidelity_amplitude(referenceTraj.states[k], traj.states[k]);
        acc += (k == 0 || k == n) ? 0.5 * err : err;
    }
    return acc * a.dt() / a.duration();
}

double ensemble_infidelity(const ControlProblem& problem, const ControlSet& controls,
                           const EnsembleSpec& spec) {
    if (spec.members.empty()) throw std::invalid_argument("ensemble_infidelity: empty ensemble");
    // Weights enter as (1/M) sum u_i C_i with the u_i normalized to mean 1,
    // so identical members give the single-member value for any weights.
    double acc = 0.0;
    double weightSum = 0.0;
    for (std::size_t i = 0; i < spec.members.size(); ++i) {
        const auto& alpha = spec.members[i];
        if (!(alpha.weight > 0.0))
            throw std::invalid_argument("ensemble_infidelity: member weight must be positive");
        Trajectory traj;
        try {
            traj = problem.propagatePerturbed(controls, alpha);
        } catch (const std::exception& e) {
            throw std::runtime_error("ensemble_infidelity: member " + std::to_string(i) +
                                     " failed: " + e.what());
        }
        acc += alpha.weight * terminal_infidelity(traj, problem.targetPerturbed(controls, alpha));
        weightSum += alpha.weight;
    }
    return acc / weightSum;
}

double power_penalty(const ControlSet& controls, const TimeGrid& grid, double c0,
                     PowerMode mode) {
    if (c0 < 0.0) throw std::invalid_argument("power_penalty: c0 must be >= 0");
    const double excess = power_integral(controls, grid) - c0;
    if (mode == PowerMode::AbsoluteValue) return std::abs(excess);
    return std::max(excess, 0.0);
}

CostBreakdown composite_cost(const ControlProblem& problem, const ControlSet& controls,
                             const CostSpec& spec) {
    spec.validate();
    CostBreakdown out;

    Trajectory traj;
    const bool needTrajectory = spec.useTerminal || spec.useAdiabatic;
    if (needTrajectory) traj = problem.propagate(controls);

    if (spec.useTerminal) {
        out.terminal = terminal_infidelity(traj, problem.target(controls));
        out.fidelityTerm += spec.terminalWeight * out.terminal;
    }
    if (spec.useAdiabatic) {
        out.adiabatic = adiabatic_infidelity(traj, problem.referenceTrajectory(controls));
        out.fidelityTerm += spec.adiabaticWeight * out.adiabatic;
    }
    if (spec.useEnsemble) {
        out.ensemble = ensemble_infidelity(problem, controls, spec.ensemble);
        out.fidelityTerm += spec.ensembleWeight * out.ensemble;
    }
    out.power = power_penalty(controls, problem.grid(), spec.c0, spec.powerMode);
    out.total = out.fidelityTerm + spec.eta * out.power;
    return out;
}

} // namespace adiqoc
