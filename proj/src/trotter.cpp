#include "adiqoc/trotter.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "adiqoc/parallel.hpp"
#include "adiqoc/rng.hpp"

namespace adiqoc {

GateSequence digitize(const RapSpec& spec, const TimeGrid& grid) {
    GateSequence seq;
    seq.grid = grid;
    seq.steps.reserve(grid.nSteps);
    const double dt = grid.dt();
    for (int k = 0; k < grid.nSteps; ++k) {
        const double t = grid.midpoint(k);
        const double omega =
            spec.perturbation.epsilon * evaluate(spec.controls.byLabel("Omega"), t);
        const double delta =
            evaluate(spec.controls.byLabel("Delta"), t) + spec.perturbation.deltaDopp;
        seq.steps.push_back({delta * dt, 2.0 * omega * dt});
    }
    return seq;
}

Matrix rz_gate(double phi) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = Complex(std::cos(phi / 2.0), -std::sin(phi / 2.0));
    m(1, 1) = Complex(std::cos(phi / 2.0), std::sin(phi / 2.0));
    return m;
}

Matrix rx_gate(double theta) {
    Matrix m(2, 2);
    const double c = std::cos(theta / 2.0);
    const Complex s = -kImag * std::sin(theta / 2.0);
    m << c, s, s, c;
    return m;
}

Vector apply_sequence(const GateSequence& seq) {
    Vector psi(2);
    psi << 1, 0;
    for (const auto& step : seq.steps) {
        // Rz Rx Rz applied right-to-left, elementwise for speed
        const auto rz = [&](Vector& v) {
            const double h = step.phiHalf / 2.0;
            v(0) *= Complex(std::cos(h), -std::sin(h));
            v(1) *= Complex(std::cos(h), std::sin(h));
        };
        rz(psi);
        const double c = std::cos(step.theta / 2.0);
        const Complex s = -kImag * std::sin(step.theta / 2.0);
        const Complex a = c * psi(0) + s * psi(1);
        const Complex b = s * psi(0) + c * psi(1);
        psi(0) = a;
        psi(1) = b;
        rz(psi);
    }
    return psi;
}

ShotResult run_shots(const GateSequence& seq, int shots, std::uint64_t seed,
                     std::uint64_t stream) {
    if (shots < 1) throw std::invalid_argument("run_shots: shots must be >= 1");
    const Vector psi = apply_sequence(seq);
    const double p1 = std::norm(psi(1));
    const KeyedRng rng(seed, stream);
    int ones = 0;
    for (int s = 0; s < shots; ++s)
        if (rng.uniform(static_cast<std::uint64_t>(s)) < p1) ++ones;
    ShotResult result;
    result.shots = shots;
    result.ones = ones;
    result.estimate = static_cast<double>(ones) / shots;
    result.seed = seed;
    return result;
}

RobustnessScan robustness_scan(const RapSpec& base, const std::vector<double>& areaScales,
                               const std::vector<double>& dopplers, const ControlSet& pulse,
                               const TimeGrid& grid, int shots, std::uint64_t seed, int threads,
                               bool digitized) {
    if (areaScales.empty() || dopplers.empty())
        throw std::invalid_argument("robustness_scan: empty grids");
    RobustnessScan scan;
    scan.areaScales = areaScales;
    scan.dopplers = dopplers;
    scan.infidelity.resize(static_cast<Eigen::Index>(dopplers.size()),
                           static_cast<Eigen::Index>(areaScales.size()));

    const int total = static_cast<int>(areaScales.size() * dopplers.size());
    parallel_for(total, threads, [&](int idx) {
        const int row = idx / static_cast<int>(areaScales.size());
        const int col = idx % static_cast<int>(areaScales.size());
        RapSpec spec = base;
        spec.controls = pulse;
        spec.perturbation = {areaScales[col], dopplers[row]};

        double fidelity;
        if (shots > 0) {
            const GateSequence seq = digitize(spec, grid);
            const ShotResult shot =
                run_shots(seq, shots, seed, static_cast<std::uint64_t>(idx) + 1);
            fidelity = std::sqrt(shot.estimate); // amplitude metric from |1> population
        } else if (digitized) {
            const GateSequence seq = digitize(spec, grid);
            fidelity = std::abs(apply_sequence(seq)(1));
        } else {
            const Trajectory traj = propagate_closed(rap_model(spec), rap_initial_state(), grid);
            fidelity = fidelity_amplitude(rap_target_state(), traj.final_state());
        }
        scan.infidelity(row, col) = 1.0 - fidelity;
    });
    return scan;
}

std::string scan_csv(const RobustnessScan& scan) {
    std::string out = "doppler\\area";
    char buf[64];
    for (const double a : scan.areaScales) {
        std::snprintf(buf, sizeof(buf), ",%.12g", a);
        out += buf;
    }
    out += "\n";
    for (Eigen::Index r = 0; r < scan.infidelity.rows(); ++r) {
        std::snprintf(buf, sizeof(buf), "%.12g", scan.dopplers[static_cast<std::size_t>(r)]);
        out += buf;
        for (Eigen::Index c = 0; c < scan.infidelity.cols(); ++c) {
            std::snprintf(buf, sizeof(buf), ",%.12g", scan.infidelity(r, c));
            out += buf;
        }
        out += "\n";
    }
    return out;
}

} // namespace adiqoc
