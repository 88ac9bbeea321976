#pragma once

#include <limits>
#include <vector>

#include "adiqoc/core.hpp"
#include "adiqoc/dynamics.hpp"
#include "adiqoc/pulse.hpp"

namespace adiqoc {

// Two qubits exchanging a single excitation through a multimode waveguide.
// Internal units: angular frequencies in units of the coupling magnitude g,
// time in 1/g. Basis ordering of the single-excitation subspace:
//   0: |1_a 0_b 0_c>   1: |0_a 1_b 0_c>   2..: photon modes n = -ns..+ns ascending.
// Open-system models append one absorbing vacuum level after the photon modes.
struct StirapDecay {
    double t1 = std::numeric_limits<double>::infinity();   // qubit relaxation lifetime (1/g units)
    double tphi = std::numeric_limits<double>::infinity(); // qubit dephasing lifetime (1/g units)
    double qc = std::numeric_limits<double>::infinity();   // photon quality factor
    double omegaC = 0.0;                                   // photon angular frequency (g units)
};

struct StirapSpec {
    int nSidebands = 1;
    double fsr = 5.0;                // Delta_c, in g units
    double couplingMagnitude = 1.0;  // g, the frequency unit
    ControlSet controls;             // labels {"g_ac", "g_bc"}
    StirapDecay decay;
};

// Conversion from laboratory values; g sets the frequency unit.
struct StirapPhysical {
    double gRadPerSec = 2.0 * kPi * 10e6;
    double t1Sec = std::numeric_limits<double>::infinity();
    double tphiSec = std::numeric_limits<double>::infinity();
    double qc = std::numeric_limits<double>::infinity();
    double omegaCRadPerSec = 2.0 * kPi * 5e9;
};
StirapDecay to_internal_decay(const StirapPhysical& phys);

int stirap_levels(const StirapSpec& spec); // 2 + (2 nSidebands + 1)

/// Single-excitation Hamiltonian (levels x levels, no vacuum row).
Operator stirap_hamiltonian_at(const StirapSpec& spec, double t);

/// SATD pulse pair from a theta ramp with theta(0) = 0, theta(tf) = pi/2;
/// derivatives by finite differences on the grid nodes. Returned controls
/// are sampled references labelled {"g_ac", "g_bc"}.
ControlSet satd_controls(const StirapSpec& spec, const TimeGrid& grid,
                         const ControlPulse& thetaRef);

/// Quasi-dark state of the five-plus level model (requires nSidebands >= 1):
/// cos(theta)|a> - sin(theta)|b> + (sin(2 theta) g / Delta_c)(|c_-1> + |c_+1>),
/// normalized. theta and g are read off the controls at time t.
QuantumState quasi_dark_state(const StirapSpec& spec, double t);

/// Jump operators embedded in the (levels + 1)-dimensional basis with the
/// absorbing vacuum appended; empty when all lifetimes are infinite.
std::vector<Operator> stirap_jumps(const StirapSpec& spec);

/// Lindblad model on levels + 1 dimensions (vacuum appended).
LindbladModel stirap_open_model(const StirapSpec& spec);
/// Closed model on the bare levels (no vacuum).
LindbladModel stirap_closed_model(const StirapSpec& spec);

/// |1_a 0_b 0_c> and |0_a 1_b 0_c> in the given dimension (levels or levels+1).
QuantumState stirap_initial_state(int dim);
QuantumState stirap_target_state(int dim);

/// Embeds a levels-dimensional pure state into dim >= levels (vacuum padding).
QuantumState embed_state(const QuantumState& state, int dim);

} // namespace adiqoc
