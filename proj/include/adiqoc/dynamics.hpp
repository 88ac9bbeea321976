#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "adiqoc/core.hpp"
#include "adiqoc/time_grid.hpp"

namespace adiqoc {

// Time-dependent open-system model. Jump operators carry their rates,
// L_k = sqrt(gamma_k) * op, and match the Hamiltonian dimension.
struct LindbladModel {
    std::function<Operator(double)> hamiltonianAt;
    std::vector<Operator> jumps;
    int dim = 0;

    void validate() const;
};

struct Trajectory {
    TimeGrid grid;
    std::vector<QuantumState> states; // one per node, nSteps + 1 entries
    std::map<std::string, std::vector<double>> observables;
    bool degeneracyFlagged = false;
    std::vector<int> degenerateNodes;

    const QuantumState& initial() const { return states.front(); }
    const QuantumState& final_state() const { return states.back(); }
};

/// exp(-i H dt) for Hermitian H via eigendecomposition (closed form for
/// dim <= 2). Unitary to machine precision.
Matrix hermitian_step_unitary(const Operator& h, double dt);

/// Piecewise-constant closed-system propagation with midpoint sampling.
Trajectory propagate_closed(const LindbladModel& model, const QuantumState& psi0,
                            const TimeGrid& grid);

/// Same map as propagate_closed, computing each exp(-i H dt) psi by Taylor
/// summation of the exponential action (machine-precision equivalent);
/// preferred when the dimension makes per-step eigendecompositions costly.
Trajectory propagate_closed_action(const LindbladModel& model, const QuantumState& psi0,
                                   const TimeGrid& grid);

/// Dense-superoperator Lindblad propagation; guarded to dim <= 64.
Trajectory propagate_lindblad(const LindbladModel& model, const QuantumState& rho0,
                              const TimeGrid& grid);

/// Monte Carlo jump unraveling averaged over nTraj realizations. Random
/// streams are keyed by (seed, trajectory, step), so the result is
/// bit-reproducible for a fixed seed regardless of thread count.
Trajectory propagate_trajectories(const LindbladModel& model, const QuantumState& psi0,
                                  const TimeGrid& grid, int nTraj, std::uint64_t seed,
                                  int threads = 1);

/// Instantaneous ground state of H(t) at every node, sign-aligned along the
/// sweep. Near-degenerate ground levels are flagged, not fatal.
Trajectory instantaneous_ground_trajectory(const LindbladModel& model, const TimeGrid& grid);

} // namespace adiqoc
