#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "adiqoc/time_grid.hpp"

namespace adiqoc {

enum class BasisKind { Gaussian, Sine, Chebyshev };

struct GaussianTerm {
    double weight = 0.0;
    double center = 0.0; // mu_m, time units
    double width = 1.0;  // sigma_m, time units, > 0
};

// Polynomial shapes for the rapid-adiabatic-passage reference pair, on the
// native coordinate s in [-1, 1].
double rap_omega_shape(double s); // 1 - 3 s^4 + 2 s^6
double rap_delta_shape(double s); // 0.6875 s - 0.1375 s^3

struct ReferencePulse {
    enum class Kind { Zero, Constant, SquaredSine, RapOmegaPoly, RapDeltaPoly, Sin2Ramp, TrigSmoothstep, Sampled };

    Kind kind = Kind::Zero;
    double amplitude = 0.0; // overall scale (may be negative to flip a sweep)
    double t0 = 0.0;
    double tf = 1.0;
    // Sampled references hold values on a uniform node grid and interpolate
    // linearly between them.
    std::vector<double> samples;

    double operator()(double t) const;

    static ReferencePulse zero(double t0, double tf);
    static ReferencePulse constant(double value, double t0, double tf);
    static ReferencePulse squaredSine(double amplitude, double t0, double tf);
    static ReferencePulse rapOmega(double amplitude, double t0, double tf);
    static ReferencePulse rapDelta(double amplitude, double t0, double tf);
    // monotone ramps from 0 to amplitude; Sin2Ramp = A sin^2(pi u / 2),
    // TrigSmoothstep = A (u - sin(2 pi u) / (2 pi)) with u = (t - t0)/(tf - t0)
    static ReferencePulse sin2Ramp(double amplitude, double t0, double tf);
    static ReferencePulse trigSmoothstep(double amplitude, double t0, double tf);
    static ReferencePulse sampled(std::vector<double> nodeValues, double t0, double tf);
};

// A CRAB-parameterized control: fixed reference plus a truncated-basis
// correction. Sine and Chebyshev corrections vanish at both endpoints
// (for sineOffset = 0), so optimization preserves the reference boundary
// values.
struct ControlPulse {
    BasisKind basis = BasisKind::Sine;
    ReferencePulse reference;
    std::vector<GaussianTerm> gaussians; // Gaussian basis coefficients
    std::vector<double> weights;         // Sine / Chebyshev coefficients
    double sineOffset = 0.0;             // tau_s, time units

    int order() const {
        return basis == BasisKind::Gaussian ? static_cast<int>(gaussians.size())
                                            : static_cast<int>(weights.size());
    }
    double domainStart() const { return reference.t0; }
    double domainEnd() const { return reference.tf; }
};

struct ControlSet {
    std::vector<ControlPulse> pulses;
    std::vector<std::string> labels;

    const ControlPulse& byLabel(const std::string& label) const;
    ControlPulse& byLabel(const std::string& label);
};

/// Pulse value at time t; throws if t lies outside the pulse domain.
double evaluate(const ControlPulse& pulse, double t);

/// The footnote polynomial RAP pair on [0, 2*tau] (native domain [-tau, tau]
/// mapped affinely), with Omega area-normalized to 4*pi on a 1000-step grid.
ControlSet reference_polynomial_rap(double tau);

/// Midpoint-rule integral of the pulse over the grid.
double pulse_area(const ControlPulse& pulse, const TimeGrid& grid);

/// Linearly rescales the pulse so pulse_area(result, grid) == target.
ControlPulse normalize_area(const ControlPulse& pulse, const TimeGrid& grid, double target);

/// Sum over controls of the midpoint-rule integral of v_mu^2.
double power_integral(const ControlSet& controls, const TimeGrid& grid);

nlohmann::json to_json(const ControlPulse& pulse);
nlohmann::json to_json(const ControlSet& controls);
ControlPulse pulse_from_json(const nlohmann::json& j);
ControlSet control_set_from_json(const nlohmann::json& j);

/// Two-column CSV (t, value) sampled on the grid nodes.
std::string sample_csv(const ControlPulse& pulse, const TimeGrid& grid);

} // namespace adiqoc
