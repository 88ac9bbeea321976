#include "adiqoc/models/stirap.hpp"

#include <cmath>
#include <stdexcept>

namespace adiqoc {

StirapDecay to_internal_decay(const StirapPhysical& phys) {
    StirapDecay decay;
    decay.t1 = phys.t1Sec * phys.gRadPerSec;
    decay.tphi = phys.tphiSec * phys.gRadPerSec;
    decay.qc = phys.qc;
    decay.omegaC = phys.omegaCRadPerSec / phys.gRadPerSec;
    return decay;
}

int stirap_levels(const StirapSpec& spec) {
    if (spec.nSidebands < 0) throw std::invalid_argument("StirapSpec: nSidebands must be >= 0");
    return 2 + (2 * spec.nSidebands + 1);
}

Operator stirap_hamiltonian_at(const StirapSpec& spec, double t) {
    if (!(spec.fsr > 0.0)) throw std::invalid_argument("StirapSpec: fsr must be positive");
    const int levels = stirap_levels(spec);
    const double gac = evaluate(spec.controls.byLabel("g_ac"), t);
    const double gbc = evaluate(spec.controls.byLabel("g_bc"), t);

    Operator h = Operator::Zero(levels, levels);
    for (int n = -spec.nSidebands; n <= spec.nSidebands; ++n) {
        const int idx = 2 + (n + spec.nSidebands);
        h(idx, idx) = n * spec.fsr;
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        h(0, idx) = sign * gac;
        h(idx, 0) = sign * gac;
        h(1, idx) = sign * gbc;
        h(idx, 1) = sign * gbc;
    }
    return h;
}

ControlSet satd_controls(const StirapSpec& spec, const TimeGrid& grid,
                         const ControlPulse& thetaRef) {
    const int n = grid.nSteps;
    const double dt = grid.dt();
    std::vector<double> theta(n + 1);
    for (int k = 0; k <= n; ++k) theta[k] = evaluate(thetaRef, grid.node(k));
    if (std::abs(theta[0]) > 1e-6 || std::abs(theta[n] - 0.5 * kPi) > 1e-6)
        throw std::invalid_argument("satd_controls: theta must ramp from 0 to pi/2");

    const double g = spec.couplingMagnitude;
    std::vector<double> gac(n + 1), gbc(n + 1);
    for (int k = 0; k <= n; ++k) {
        double d1, d2;
        if (k == 0) {
            d1 = (-3.0 * theta[0] + 4.0 * theta[1] - theta[2]) / (2.0 * dt);
            d2 = (2.0 * theta[0] - 5.0 * theta[1] + 4.0 * theta[2] - theta[3]) / (dt * dt);
        } else if (k == n) {
            d1 = (3.0 * theta[n] - 4.0 * theta[n - 1] + theta[n - 2]) / (2.0 * dt);
            d2 = (2.0 * theta[n] - 5.0 * theta[n - 1] + 4.0 * theta[n - 2] - theta[n - 3]) /
                 (dt * dt);
        } else {
            d1 = (theta[k + 1] - theta[k - 1]) / (2.0 * dt);
            d2 = (theta[k + 1] - 2.0 * theta[k] + theta[k - 1]) / (dt * dt);
        }
        const double corr = d2 / (g * g + d1 * d1);
        gac[k] = g * (std::sin(theta[k]) + std::cos(theta[k]) * corr);
        gbc[k] = g * (std::cos(theta[k]) - std::sin(theta[k]) * corr);
    }

    ControlPulse pac;
    pac.basis = BasisKind::Chebyshev;
    pac.reference = ReferencePulse::sampled(std::move(gac), grid.t0, grid.tf);
    ControlPulse pbc;
    pbc.basis = BasisKind::Chebyshev;
    pbc.reference = ReferencePulse::sampled(std::move(gbc), grid.t0, grid.tf);

    ControlSet set;
    set.pulses = {pac, pbc};
    set.labels = {"g_ac", "g_bc"};
    return set;
}

QuantumState quasi_dark_state(const StirapSpec& spec, double t) {
    if (spec.nSidebands < 1)
        throw std::invalid_argument("quasi_dark_state: requires nSidebands >= 1");
    if (spec.fsr == 0.0) throw std::invalid_argument("quasi_dark_state: fsr must be nonzero");
    const int levels = stirap_levels(spec);
    const double gac = evaluate(spec.controls.byLabel("g_ac"), t);
    const double gbc = evaluate(spec.controls.byLabel("g_bc"), t);
    const double theta = std::atan2(gac, gbc);
    const double g = std::sqrt(gac * gac + gbc * gbc);
    const double photon = std::sin(2.0 * theta) * g / spec.fsr;

    Vector psi = Vector::Zero(levels);
    psi(0) = std::cos(theta);
    psi(1) = -std::sin(theta);
    const int idxMinus = 2 + (-1 + spec.nSidebands);
    const int idxPlus = 2 + (1 + spec.nSidebands);
    psi(idxMinus) += photon;
    psi(idxPlus) += photon;
    psi /= psi.norm();
    return QuantumState::pure(psi);
}

std::vector<Operator> stirap_jumps(const StirapSpec& spec) {
    const int levels = stirap_levels(spec);
    const int dim = levels + 1; // appended vacuum
    const int vac = levels;
    std::vector<Operator> jumps;

    const auto finite = [](double x) { return std::isfinite(x) && x > 0.0; };

    if (finite(spec.decay.t1)) {
        const double amp = std::sqrt(1.0 / spec.decay.t1);
        for (int q = 0; q < 2; ++q) {
            Operator lower = Operator::Zero(dim, dim);
            lower(vac, q) = amp;
            jumps.push_back(lower);
        }
    }
    if (finite(spec.decay.tphi)) {
        const double amp = std::sqrt(1.0 / (2.0 * spec.decay.tphi));
        for (int q = 0; q < 2; ++q) {
            // sigma_z of qubit q embedded in the single-excitation basis:
            // -1 on the level where that qubit is excited, +1 elsewhere.
            Operator dephase = amp * Operator::Identity(dim, dim);
            dephase(q, q) = -amp;
            jumps.push_back(dephase);
        }
    }
    if (finite(spec.decay.qc) && spec.decay.omegaC > 0.0) {
        const double amp = std::sqrt(spec.decay.omegaC / spec.decay.qc);
        for (int n = -spec.nSidebands; n <= spec.nSidebands; ++n) {
            Operator loss = Operator::Zero(dim, dim);
            loss(vac, 2 + (n + spec.nSidebands)) = amp;
            jumps.push_back(loss);
        }
    }
    return jumps;
}

LindbladModel stirap_open_model(const StirapSpec& spec) {
    const int levels = stirap_levels(spec);
    LindbladModel model;
    model.dim = levels + 1;
    model.jumps = stirap_jumps(spec);
    model.hamiltonianAt = [spec, levels](double t) {
        Operator h = Operator::Zero(levels + 1, levels + 1);
        h.topLeftCorner(levels, levels) = stirap_hamiltonian_at(spec, t);
        return h;
    };
    return model;
}

LindbladModel stirap_closed_model(const StirapSpec& spec) {
    LindbladModel model;
    model.dim = stirap_levels(spec);
    model.hamiltonianAt = [spec](double t) { return stirap_hamiltonian_at(spec, t); };
    return model;
}

QuantumState stirap_initial_state(int dim) {
    Vector psi = Vector::Zero(dim);
    psi(0) = 1.0;
    return QuantumState::pure(psi);
}

QuantumState stirap_target_state(int dim) {
    Vector psi = Vector::Zero(dim);
    psi(1) = 1.0;
    return QuantumState::pure(psi);
}

QuantumState embed_state(const QuantumState& state, int dim) {
    if (dim < state.dim()) throw std::invalid_argument("embed_state: target dim too small");
    Vector psi = Vector::Zero(dim);
    psi.head(state.dim()) = state.vector();
    return QuantumState::pure(psi);
}

} // namespace adiqoc
