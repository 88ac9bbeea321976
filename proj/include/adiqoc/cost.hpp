#pragma once

#include <memory>
#include <vector>

#include "adiqoc/core.hpp"
#include "adiqoc/dynamics.hpp"
#include "adiqoc/pulse.hpp"

namespace adiqoc {

enum class PowerMode { OneSided, AbsoluteValue };

// One ensemble member: the controls are perturbed by scaling amplitude
// controls and shifting detuning controls before propagation.
struct PerturbationAlpha {
    double amplitudeScale = 1.0;
    double detuningShift = 0.0;
    double weight = 1.0; // u_i
};

struct EnsembleSpec {
    std::vector<PerturbationAlpha> members;
    int size() const { return static_cast<int>(members.size()); }
};

struct CostSpec {
    bool useTerminal = true;
    double terminalWeight = 1.0;
    bool useAdiabatic = false;
    double adiabaticWeight = 0.0;
    bool useEnsemble = false;
    double ensembleWeight = 0.0;
    EnsembleSpec ensemble;
    double eta = 0.0;
    double c0 = 0.0;
    PowerMode powerMode = PowerMode::OneSided;

    void validate() const;
};

struct CostBreakdown {
    double terminal = 0.0;
    double adiabatic = 0.0;
    double ensemble = 0.0;
    double power = 0.0;
    double total = 0.0;
    double fidelityTerm = 0.0; // weighted sum of active fidelity components
};

// Binds a physical model to the cost functional: how controls propagate,
// what the adiabatic reference is, and what the target state is.
class ControlProblem {
public:
    virtual ~ControlProblem() = default;
    virtual const TimeGrid& grid() const = 0;
    virtual Trajectory propagate(const ControlSet& controls) const = 0;
    virtual Trajectory referenceTrajectory(const ControlSet& controls) const = 0;
    virtual QuantumState target(const ControlSet& controls) const = 0;

    virtual ControlSet perturbControls(const ControlSet& controls,
                                       const PerturbationAlpha& alpha) const;
    virtual Trajectory propagatePerturbed(const ControlSet& controls,
                                          const PerturbationAlpha& alpha) const;
    virtual QuantumState targetPerturbed(const ControlSet& controls,
                                         const PerturbationAlpha& alpha) const;
};

/// 1 - F(target, final state).
double terminal_infidelity(const Trajectory& traj, const QuantumState& target);

/// Time-averaged diabatic error: (1/tf) integral of 1 - F(ref(t), state(t)),
/// trapezoid rule on the shared node grid.
double adiabatic_infidelity(const Trajectory& traj, const Trajectory& referenceTraj);

/// Weighted mean of member terminal infidelities under perturbed controls.
double ensemble_infidelity(const ControlProblem& problem, const ControlSet& controls,
                           const EnsembleSpec& spec);

/// OneSided: max(P - c0, 0); AbsoluteValue: |P - c0| with P the power integral.
double power_penalty(const ControlSet& controls, const TimeGrid& grid, double c0,
                     PowerMode mode);

CostBreakdown composite_cost(const ControlProblem& problem, const ControlSet& controls,
                             const CostSpec& spec);

} // namespace adiqoc
