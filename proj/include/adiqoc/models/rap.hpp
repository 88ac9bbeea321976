#pragma once

#include "adiqoc/core.hpp"
#include "adiqoc/dynamics.hpp"
#include "adiqoc/pulse.hpp"

namespace adiqoc {

// Two-level chirped-drive model, H = eps * Omega(t) sx + (Delta(t) + dopp) sz.
// The detuning sweeps negative to positive, so the instantaneous ground state
// moves from |0> to |1>.
struct RapPerturbation {
    double epsilon = 1.0;   // Rabi amplitude scale
    double deltaDopp = 0.0; // detuning offset, angular frequency
};

struct RapSpec {
    double tf = 1.0;
    ControlSet controls; // labels {"Omega", "Delta"}
    RapPerturbation perturbation;
};

Operator rap_hamiltonian_at(const RapSpec& spec, double t);
LindbladModel rap_model(const RapSpec& spec);

QuantumState rap_initial_state(); // |0>
QuantumState rap_target_state();  // |1>

} // namespace adiqoc
