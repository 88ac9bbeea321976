#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "adiqoc/core.hpp"
#include "adiqoc/dynamics.hpp"
#include "adiqoc/pulse.hpp"

namespace adiqoc {

// Rydberg annealer for maximum-independent-set search. Qubit encoding:
// bit 0 = ground |g>, bit 1 = Rydberg |r>; sigma_z is +1 on |g>, so
// H = sum_i [Omega sx_i - Delta sz_i] + V_r sum_(i,j) n_i n_j favors
// |g...g> while Delta > 0 and blockade-consistent excitations once the
// sweep turns negative.
struct Graph {
    int nodes = 0;
    std::vector<std::pair<int, int>> edges;

    static Graph ring(int n);
    bool isRing() const;
    void validate() const;
};

struct MisSpec {
    Graph graph;
    double vR = 0.0;         // Rydberg interaction, angular frequency units
    ControlSet controls;     // labels {"Omega", "Delta"}
    bool useBlockadeSubspace = true;
};

struct BlockadeSubspace {
    int nodes = 0;
    std::vector<std::uint32_t> basisStates; // independent-set bitmasks, ascending
    int dim = 0;
};

/// All independent-set bitmasks of the graph, ascending.
BlockadeSubspace build_blockade_subspace(const Graph& graph);

/// Full 2^N Hamiltonian with finite V_r (basis index = bitmask).
Operator mis_hamiltonian_full(const MisSpec& spec, double t);

/// Hamiltonian projected onto the blockade subspace (infinite-V_r limit;
/// the interaction term vanishes identically there).
Operator mis_hamiltonian_projected(const MisSpec& spec, const BlockadeSubspace& subspace,
                                   double t);

/// Projector rows: subspace.dim x 2^N selection matrix P with P H P^dag the
/// projected Hamiltonian.
Matrix blockade_projector(const BlockadeSubspace& subspace);

/// The two alternating ring configurations (even rings only).
std::pair<std::uint32_t, std::uint32_t> ring_alternating_masks(int nodes);

/// Equal superposition of the two alternating MIS configurations, expressed
/// in blockade-subspace coordinates.
QuantumState mis_solution_state(const MisSpec& spec, const BlockadeSubspace& subspace);

/// Same target in the full 2^N basis.
QuantumState mis_solution_state_full(const MisSpec& spec);

/// Brute-force independence number (oracle-grade, O(2^N)).
int independence_number(const Graph& graph);

LindbladModel mis_subspace_model(const MisSpec& spec, const BlockadeSubspace& subspace);
LindbladModel mis_full_model(const MisSpec& spec);

// Fully symmetric (trivial dihedral representation) sector of the blockade
// subspace of an even ring. Global pulses keep symmetric states inside this
// sector, which cuts the optimization dimension by ~2N while remaining exact.
struct RingSector {
    int nodes = 0;
    std::vector<std::uint32_t> orbitRep; // lexicographically minimal member
    std::vector<int> orbitSize;
    int dim = 0;
    Matrix xSym;          // projected sum of sigma_x in orbit coordinates
    RealVector zDiag;     // sum of sigma_z eigenvalues (N - 2 popcount)
    int initialIndex = 0; // orbit of the all-ground mask
    int targetIndex = 0;  // orbit of the alternating masks

    /// Isometry from sector coordinates to blockade-subspace coordinates.
    Matrix embedding(const BlockadeSubspace& subspace) const;
};

RingSector build_ring_sector(int nodes);
LindbladModel mis_sector_model(const RingSector& sector, const ControlSet& controls);
QuantumState sector_initial_state(const RingSector& sector);
QuantumState sector_target_state(const RingSector& sector);

} // namespace adiqoc
