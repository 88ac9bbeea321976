#pragma once

#include <stdexcept>
#include <vector>

namespace adiqoc {

// Uniform time grid on [t0, tf]. Propagators sample controls at the
// midpoints of the nSteps subintervals; trajectory states live on the
// nSteps+1 node times.
struct TimeGrid {
    double t0 = 0.0;
    double tf = 1.0;
    int nSteps = 1000;

    TimeGrid() = default;
    TimeGrid(double t0_, double tf_, int nSteps_) : t0(t0_), tf(tf_), nSteps(nSteps_) {
        if (!(tf > t0)) throw std::invalid_argument("TimeGrid: tf must exceed t0");
        if (nSteps < 1) throw std::invalid_argument("TimeGrid: nSteps must be positive");
    }

    double dt() const { return (tf - t0) / nSteps; }
    double duration() const { return tf - t0; }
    double midpoint(int k) const { return t0 + (k + 0.5) * dt(); }
    double node(int k) const { return t0 + k * dt(); }

    std::vector<double> midpoints() const {
        std::vector<double> out(nSteps);
        for (int k = 0; k < nSteps; ++k) out[k] = midpoint(k);
        return out;
    }
    std::vector<double> nodes() const {
        std::vector<double> out(nSteps + 1);
        for (int k = 0; k <= nSteps; ++k) out[k] = node(k);
        return out;
    }

    bool contains(double t) const {
        const double slack = 1e-9 * duration();
        return t >= t0 - slack && t <= tf + slack;
    }
};

} // namespace adiqoc
