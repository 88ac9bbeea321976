#pragma once

#include "adiqoc/cost.hpp"
#include "adiqoc/models/mis.hpp"
#include "adiqoc/models/rap.hpp"
#include "adiqoc/models/stirap.hpp"

namespace adiqoc {

// Closed two-level transfer |0> -> |1>; the adiabatic reference is the
// instantaneous ground state of the chirped Hamiltonian.
class RapProblem : public ControlProblem {
public:
    RapProblem(double tf, TimeGrid grid) : tf_(tf), grid_(grid) {}

    const TimeGrid& grid() const override { return grid_; }
    Trajectory propagate(const ControlSet& controls) const override;
    Trajectory referenceTrajectory(const ControlSet& controls) const override;
    QuantumState target(const ControlSet&) const override { return rap_target_state(); }

    // Hamiltonian-level perturbation: Omega -> eps * Omega, Delta -> Delta + shift.
    Trajectory propagatePerturbed(const ControlSet& controls,
                                  const PerturbationAlpha& alpha) const override;
    QuantumState targetPerturbed(const ControlSet&, const PerturbationAlpha&) const override {
        return rap_target_state();
    }

private:
    double tf_;
    TimeGrid grid_;
};

// Open five-level (plus vacuum) waveguide transfer |a> -> |b>, compared
// against the quasi-dark state along the way.
class StirapProblem : public ControlProblem {
public:
    StirapProblem(StirapSpec specTemplate, TimeGrid grid)
        : spec_(std::move(specTemplate)), grid_(grid) {}

    const TimeGrid& grid() const override { return grid_; }
    Trajectory propagate(const ControlSet& controls) const override;
    Trajectory referenceTrajectory(const ControlSet& controls) const override;
    QuantumState target(const ControlSet&) const override;

    StirapSpec withControls(const ControlSet& controls) const;

private:
    StirapSpec spec_;
    TimeGrid grid_;
};

// Closed annealing toward the alternating-MIS superposition in the fully
// symmetric sector of an even ring.
class MisSectorProblem : public ControlProblem {
public:
    MisSectorProblem(RingSector sector, TimeGrid grid)
        : sector_(std::move(sector)), grid_(grid) {}

    const TimeGrid& grid() const override { return grid_; }
    Trajectory propagate(const ControlSet& controls) const override;
    Trajectory referenceTrajectory(const ControlSet& controls) const override;
    QuantumState target(const ControlSet&) const override { return sector_target_state(sector_); }

    const RingSector& sector() const { return sector_; }

private:
    RingSector sector_;
    TimeGrid grid_;
};

} // namespace adiqoc
