#include "adiqoc/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace adiqoc {

double rap_omega_shape(double s) {
    const double s2 = s * s;
    const double s4 = s2 * s2;
    return 1.0 - 3.0 * s4 + 2.0 * s4 * s2;
}

double rap_delta_shape(double s) { return 0.6875 * s - 0.1375 * s * s * s; }

double ReferencePulse::operator()(double t) const {
    const double span = tf - t0;
    switch (kind) {
        case Kind::Zero:
            return 0.0;
        case Kind::Constant:
            return amplitude;
        case Kind::SquaredSine: {
            const double x = std::sin(3.14159265358979323846 * (t - t0) / span);
            return amplitude * x * x;
        }
        case Kind::RapOmegaPoly:
            return amplitude * rap_omega_shape(2.0 * (t - t0) / span - 1.0);
        case Kind::RapDeltaPoly:
            return amplitude * rap_delta_shape(2.0 * (t - t0) / span - 1.0);
        case Kind::Sin2Ramp: {
            const double x = std::sin(0.5 * 3.14159265358979323846 * (t - t0) / span);
            return amplitude * x * x;
        }
        case Kind::TrigSmoothstep: {
            const double u = (t - t0) / span;
            return amplitude * (u - std::sin(2.0 * 3.14159265358979323846 * u) /
                                        (2.0 * 3.14159265358979323846));
        }
        case Kind::Sampled: {
            if (samples.size() < 2) return samples.empty() ? 0.0 : amplitude * samples[0];
            const double x = std::clamp((t - t0) / span, 0.0, 1.0) * (samples.size() - 1);
            const int i = std::min(static_cast<int>(x), static_cast<int>(samples.size()) - 2);
            const double frac = x - i;
            return amplitude * ((1.0 - frac) * samples[i] + frac * samples[i + 1]);
        }
    }
    return 0.0;
}

ReferencePulse ReferencePulse::zero(double t0, double tf) {
    return ReferencePulse{Kind::Zero, 0.0, t0, tf, {}};
}
ReferencePulse ReferencePulse::constant(double value, double t0, double tf) {
    return ReferencePulse{Kind::Constant, value, t0, tf, {}};
}
ReferencePulse ReferencePulse::squaredSine(double amplitude, double t0, double tf) {
    return ReferencePulse{Kind::SquaredSine, amplitude, t0, tf, {}};
}
ReferencePulse ReferencePulse::rapOmega(double amplitude, double t0, double tf) {
    return ReferencePulse{Kind::RapOmegaPoly, amplitude, t0, tf, {}};
}
ReferencePulse ReferencePulse::rapDelta(double amplitude, double t0, double tf) {
    return ReferencePulse{Kind::RapDeltaPoly, amplitude, t0, tf, {}};
}
ReferencePulse ReferencePulse::sin2Ramp(double amplitude, double t0, double tf) {
    return ReferencePulse{Kind::Sin2Ramp, amplitude, t0, tf, {}};
}
ReferencePulse ReferencePulse::trigSmoothstep(double amplitude, double t0, double tf) {
    return ReferencePulse{Kind::TrigSmoothstep, amplitude, t0, tf, {}};
}
ReferencePulse ReferencePulse::sampled(std::vector<double> nodeValues, double t0, double tf) {
    return ReferencePulse{Kind::Sampled, 1.0, t0, tf, std::move(nodeValues)};
}

const ControlPulse& ControlSet::byLabel(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return pulses[i];
    throw std::invalid_argument("ControlSet: unknown label " + label);
}

ControlPulse& ControlSet::byLabel(const std::string& label) {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return pulses[i];
    throw std::invalid_argument("ControlSet: unknown label " + label);
}

namespace {
constexpr double kLocalPi = 3.14159265358979323846;

double chebyshev_sum(const std::vector<double>& w, double z) {
    // T_0, T_1, ... via the standard recurrence
    double tPrev = 1.0, tCur = z, acc = 0.0;
    for (std::size_t m = 0; m < w.size(); ++m) {
        const double tm = (m == 0) ? 1.0 : (m == 1 ? z : 2.0 * z * tCur - tPrev);
        if (m >= 2) {
            tPrev = tCur;
            tCur = tm;
        }
        acc += w[m] * tm;
    }
    return acc;
}
} // namespace

double evaluate(const ControlPulse& pulse, double t) {
    const double t0 = pulse.domainStart();
    const double tf = pulse.domainEnd();
    const double span = tf - t0;
    if (t < t0 - 1e-9 * span || t > tf + 1e-9 * span)
        throw std::invalid_argument("evaluate: time outside pulse domain");

    double value = pulse.reference(t);
    switch (pulse.basis) {
        case BasisKind::Gaussian:
            for (const auto& g : pulse.gaussians) {
                if (!(g.width > 0.0)) throw std::invalid_argument("evaluate: Gaussian width <= 0");
                const double u = (t - g.center) / g.width;
                value += g.weight * std::exp(-u * u);
            }
            break;
        case BasisKind::Sine: {
            const double u = (t - t0 + pulse.sineOffset) / span;
            for (std::size_t m = 0; m < pulse.weights.size(); ++m)
                value += pulse.weights[m] * std::sin((m + 1) * kLocalPi * u);
            break;
        }
        case BasisKind::Chebyshev: {
            const double x = (t - t0) / span;
            const double env = std::sin(kLocalPi * x);
            const double z = 2.0 * x - 1.0;
            value += env * env * chebyshev_sum(pulse.weights, z);
            break;
        }
    }
    return value;
}

double pulse_area(const ControlPulse& pulse, const TimeGrid& grid) {
    double acc = 0.0;
    for (int k = 0; k < grid.nSteps; ++k) acc += evaluate(pulse, grid.midpoint(k));
    return acc * grid.dt();
}

ControlPulse normalize_area(const ControlPulse& pulse, const TimeGrid& grid, double target) {
    const double area = pulse_area(pulse, grid);
    const double floor = 1e-12 * std::abs(target) + 1e-300;
    if (std::abs(area) < floor)
        throw std::invalid_argument("normalize_area: pulse area is zero");
    const double scale = target / area;
    ControlPulse out = pulse;
    out.reference.amplitude *= scale;
    for (auto& g : out.gaussians) g.weight *= scale;
    for (auto& w : out.weights) w *= scale;
    return out;
}

double power_integral(const ControlSet& controls, const TimeGrid& grid) {
    double acc = 0.0;
    for (const auto& pulse : controls.pulses)
        for (int k = 0; k < grid.nSteps; ++k) {
            const double v = evaluate(pulse, grid.midpoint(k));
            acc += v * v;
        }
    return acc * grid.dt();
}

ControlSet reference_polynomial_rap(double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("reference_polynomial_rap: tau must be positive");
    const double tf = 2.0 * tau;
    const TimeGrid grid(0.0, tf, 1000);

    ControlPulse omega;
    omega.basis = BasisKind::Sine;
    omega.reference = ReferencePulse::rapOmega(1.0, 0.0, tf);
    omega = normalize_area(omega, grid, 4.0 * kLocalPi);

    ControlPulse delta;
    delta.basis = BasisKind::Sine;
    delta.reference = ReferencePulse::rapDelta(1.0, 0.0, tf);

    ControlSet set;
    set.pulses = {omega, delta};
    set.labels = {"Omega", "Delta"};
    return set;
}

namespace {

std::string basis_name(BasisKind b) {
    switch (b) {
        case BasisKind::Gaussian: return "gaussian";
        case BasisKind::Sine: return "sine";
        case BasisKind::Chebyshev: return "chebyshev";
    }
    return "sine";
}

BasisKind basis_from_name(const std::string& s) {
    if (s == "gaussian") return BasisKind::Gaussian;
    if (s == "sine") return BasisKind::Sine;
    if (s == "chebyshev") return BasisKind::Chebyshev;
    throw std::invalid_argument("unknown basis name: " + s);
}

std::string reference_name(ReferencePulse::Kind k) {
    switch (k) {
        case ReferencePulse::Kind::Zero: return "zero";
        case ReferencePulse::Kind::Constant: return "constant";
        case ReferencePulse::Kind::SquaredSine: return "squared-sine";
        case ReferencePulse::Kind::RapOmegaPoly: return "rap-omega-poly";
        case ReferencePulse::Kind::RapDeltaPoly: return "rap-delta-poly";
        case ReferencePulse::Kind::Sin2Ramp: return "sin2-ramp";
        case ReferencePulse::Kind::TrigSmoothstep: return "trig-smoothstep";
        case ReferencePulse::Kind::Sampled: return "sampled";
    }
    return "zero";
}

ReferencePulse::Kind reference_from_name(const std::string& s) {
    if (s == "zero") return ReferencePulse::Kind::Zero;
    if (s == "constant") return ReferencePulse::Kind::Constant;
    if (s == "squared-sine") return ReferencePulse::Kind::SquaredSine;
    if (s == "rap-omega-poly") return ReferencePulse::Kind::RapOmegaPoly;
    if (s == "rap-delta-poly") return ReferencePulse::Kind::RapDeltaPoly;
    if (s == "sin2-ramp") return ReferencePulse::Kind::Sin2Ramp;
    if (s == "trig-smoothstep") return ReferencePulse::Kind::TrigSmoothstep;
    if (s == "sampled") return ReferencePulse::Kind::Sampled;
    throw std::invalid_argument("unknown reference name: " + s);
}

} // namespace

nlohmann::json to_json(const ControlPulse& pulse) {
    nlohmann::json j;
    j["basis"] = basis_name(pulse.basis);
    j["reference"] = {{"name", reference_name(pulse.reference.kind)},
                      {"amplitude", pulse.reference.amplitude},
                      {"t0", pulse.reference.t0},
                      {"tf", pulse.reference.tf}};
    if (pulse.reference.kind == ReferencePulse::Kind::Sampled)
        j["reference"]["samples"] = pulse.reference.samples;
    if (pulse.basis == BasisKind::Gaussian) {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& g : pulse.gaussians)
            terms.push_back({{"weight", g.weight}, {"center", g.center}, {"width", g.width}});
        j["coefficients"] = terms;
    } else {
        j["coefficients"] = pulse.weights;
        j["sineOffset"] = pulse.sineOffset;
    }
    return j;
}

nlohmann::json to_json(const ControlSet& controls) {
    nlohmann::json j;
    j["labels"] = controls.labels;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& pulse : controls.pulses) arr.push_back(to_json(pulse));
    j["pulses"] = arr;
    return j;
}

ControlPulse pulse_from_json(const nlohmann::json& j) {
    ControlPulse pulse;
    pulse.basis = basis_from_name(j.at("basis").get<std::string>());
    const auto& r = j.at("reference");
    pulse.reference.kind = reference_from_name(r.at("name").get<std::string>());
    pulse.reference.amplitude = r.at("amplitude").get<double>();
    pulse.reference.t0 = r.at("t0").get<double>();
    pulse.reference.tf = r.at("tf").get<double>();
    if (pulse.reference.kind == ReferencePulse::Kind::Sampled)
        pulse.reference.samples = r.at("samples").get<std::vector<double>>();
    if (pulse.basis == BasisKind::Gaussian) {
        for (const auto& term : j.at("coefficients"))
            pulse.gaussians.push_back({term.at("weight").get<double>(),
                                       term.at("center").get<double>(),
                                       term.at("width").get<double>()});
    } else {
        pulse.weights = j.at("coefficients").get<std::vector<double>>();
        pulse.sineOffset = j.value("sineOffset", 0.0);
    }
    return pulse;
}

ControlSet control_set_from_json(const nlohmann::json& j) {
    ControlSet set;
    set.labels = j.at("labels").get<std::vector<std::string>>();
    for (const auto& pj : j.at("pulses")) set.pulses.push_back(pulse_from_json(pj));
    if (set.labels.size() != set.pulses.size())
        throw std::invalid_argument("control_set_from_json: label/pulse count mismatch");
    return set;
}

std::string sample_csv(const ControlPulse& pulse, const TimeGrid& grid) {
    std::string out = "t,value\n";
    char line[96];
    for (int k = 0; k <= grid.nSteps; ++k) {
        std::snprintf(line, sizeof(line), "%.12g,%.12g\n", grid.node(k),
                      evaluate(pulse, grid.node(k)));
        out += line;
    }
    return out;
}

} // namespace adiqoc
