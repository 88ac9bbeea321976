#pragma once

#include <cstdint>
#include <vector>

#include "adiqoc/models/rap.hpp"

namespace adiqoc {

// One digitized step: Rz(phiHalf) Rx(theta) Rz(phiHalf) with
// Rx(t) = exp(-i t sx / 2), Rz(p) = exp(-i p sz / 2). Angles are chosen so
// the step equals exp(-i H(t_k) dt) of the chirped two-level Hamiltonian
// up to O(dt^3): phiHalf = Delta(t_k) dt, theta = 2 Omega(t_k) dt.
struct GateStep {
    double phiHalf = 0.0;
    double theta = 0.0;
};

struct GateSequence {
    std::vector<GateStep> steps;
    TimeGrid grid;
};

struct ShotResult {
    int shots = 0;
    int ones = 0;
    double estimate = 0.0;
    std::uint64_t seed = 0;
};

struct RobustnessScan {
    std::vector<double> areaScales; // epsilon values, one per column
    std::vector<double> dopplers;   // detuning offsets, one per row
    RealMatrix infidelity;          // rows = doppler, cols = area scale
};

/// Symmetric second-order digitization of the chirped two-level sweep,
/// sampled at step midpoints.
GateSequence digitize(const RapSpec& spec, const TimeGrid& grid);

Matrix rz_gate(double phi);
Matrix rx_gate(double theta);

/// State after applying every step to |0>.
Vector apply_sequence(const GateSequence& seq);

/// Z-basis sampling of the digitized final state; deterministic per
/// (seed, stream) via the keyed random stream.
ShotResult run_shots(const GateSequence& seq, int shots, std::uint64_t seed,
                     std::uint64_t stream = 0);

/// Terminal infidelity over a (doppler x area-scale) grid, exact when
/// shots == 0, shot-estimated otherwise. Grid points are independent and
/// stream-keyed, so results do not depend on evaluation order.
RobustnessScan robustness_scan(const RapSpec& base, const std::vector<double>& areaScales,
                               const std::vector<double>& dopplers, const ControlSet& pulse,
                               const TimeGrid& grid, int shots, std::uint64_t seed,
                               int threads = 1, bool digitized = false);

/// CSV heatmap: header row of area scales, first column of Doppler shifts.
std::string scan_csv(const RobustnessScan& scan);

} // namespace adiqoc
