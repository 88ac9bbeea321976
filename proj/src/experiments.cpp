#include "adiqoc/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "adiqoc/csv.hpp"
#include "adiqoc/optimize.hpp"
#include "adiqoc/parallel.hpp"
#include "adiqoc/problems.hpp"
#include "adiqoc/rng.hpp"

namespace adiqoc {

namespace {

using nlohmann::json;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return KeyedRng::mix(KeyedRng::mix(seed ^ 0x5bf03635ff570eabULL) ^ tag);
}

int resolve_threads(const json& config) {
    const int t = config.value("threads", 0);
    return t > 0 ? t : default_threads();
}

PowerMode resolve_power_mode(const json& config) {
    const std::string mode = config.value("powerMode", "one-sided");
    if (mode == "one-sided") return PowerMode::OneSided;
    if (mode == "absolute") return PowerMode::AbsoluteValue;
    throw std::invalid_argument("unknown powerMode: " + mode);
}

class StopWatch {
public:
    StopWatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

std::string csv_row(const std::vector<double>& vals) {
    std::string row;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) row += ',';
        row += format_double(vals[i]);
    }
    row += '\n';
    return row;
}

double max_abs_on_grid(const ControlPulse& pulse, const TimeGrid& grid) {
    double peak = 0.0;
    for (int k = 0; k <= grid.nSteps; ++k)
        peak = std::max(peak, std::abs(evaluate(pulse, grid.node(k))));
    return peak;
}

// Counts system propagations for the benchmark comparison.
class CountingProblem : public ControlProblem {
public:
    explicit CountingProblem(const ControlProblem& inner) : inner_(inner) {}

    const TimeGrid& grid() const override { return inner_.grid(); }
    Trajectory propagate(const ControlSet& c) const override {
        ++propagations_;
        return inner_.propagate(c);
    }
    Trajectory referenceTrajectory(const ControlSet& c) const override {
        return inner_.referenceTrajectory(c);
    }
    QuantumState target(const ControlSet& c) const override { return inner_.target(c); }
    ControlSet perturbControls(const ControlSet& c, const PerturbationAlpha& a) const override {
        return inner_.perturbControls(c, a);
    }
    Trajectory propagatePerturbed(const ControlSet& c, const PerturbationAlpha& a) const override {
        ++propagations_;
        return inner_.propagatePerturbed(c, a);
    }
    QuantumState targetPerturbed(const ControlSet& c, const PerturbationAlpha& a) const override {
        return inner_.targetPerturbed(c, a);
    }

    long propagations() const { return propagations_.load(); }

private:
    const ControlProblem& inner_;
    mutable std::atomic<long> propagations_{0};
};

} // namespace

void ResultBundle::write(const std::string& outDir) const {
    const std::filesystem::path dir(outDir);
    std::filesystem::create_directories(dir);
    for (const auto& [name, contents] : artifacts) write_text_file(dir / name, contents);

    json manifest;
    manifest["experiment"] = experiment;
    manifest["config"] = config;
    manifest["summary"] = summary;
    manifest["wallTimesSec"] = wallTimesSec;
    json names = json::array();
    for (const auto& [name, contents] : artifacts) names.push_back(name);
    manifest["artifacts"] = names;
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

json merge_config(json base, const json& overrides) {
    if (!overrides.is_object()) return overrides;
    if (!base.is_object()) base = json::object();
    for (const auto& [key, value] : overrides.items()) {
        if (value.is_object() && base.contains(key))
            base[key] = merge_config(base[key], value);
        else
            base[key] = value;
    }
    return base;
}

std::vector<std::string> experiment_names() {
    return {"rap-optimize",      "rap-scan", "rap-trotter-scan", "stirap-lifetimes",
            "stirap-amplitude",  "mis-rings", "bench-adiabatic-vs-ensemble"};
}

json default_config(const std::string& experiment) {
    json c;
    c["seed"] = 1;
    c["threads"] = 0; // 0 = hardware concurrency
    c["out"] = "results/" + experiment;

    if (experiment == "rap-optimize" || experiment == "rap-scan" ||
        experiment == "rap-trotter-scan" || experiment == "bench-adiabatic-vs-ensemble") {
        c["tf"] = 24.0;
        c["nSteps"] = 1000;
    }
    if (experiment == "rap-optimize" || experiment == "bench-adiabatic-vs-ensemble") {
        c["basisOrder"] = 6;
        c["weightBoundFraction"] = 0.5;
        c["eta"] = 1.0;
        c["powerMode"] = "one-sided";
        c["budget"] = 2000;
        c["populationSize"] = 0;
    }
    if (experiment == "rap-scan" || experiment == "rap-trotter-scan" ||
        experiment == "bench-adiabatic-vs-ensemble") {
        c["epsMin"] = 0.5;
        c["epsMax"] = 1.5;
        c["epsCount"] = 25;
        c["doppFraction"] = 0.2; // of the reference peak Rabi frequency
        c["doppCount"] = 25;
    }
    if (experiment == "rap-scan") c["pulses"] = json::array();
    if (experiment == "rap-trotter-scan") {
        c["pulses"] = json::array();
        c["shots"] = 1024;
        c["gateSteps"] = 1000;
    }
    if (experiment == "stirap-lifetimes" || experiment == "stirap-amplitude") {
        c["nSidebands"] = 1;
        c["fsrOverG"] = 5.0;
        c["gOverTwoPiMHz"] = 10.0;
        c["omegaCOverTwoPiGHz"] = 5.0;
        c["tfG"] = 20.0;
        c["nSteps"] = 600;
        c["thetaRamp"] = "sin2";
        c["basisOrder"] = 8;
        c["weightBoundFraction"] = 0.5;
        c["eta"] = 1.0;
        c["budget"] = 300;
        c["populationSize"] = 0;
    }
    if (experiment == "stirap-lifetimes") {
        c["anchorT1Us"] = 50.0;
        c["qualityFactors"] = {1e5, 1e6};
        c["lifetimeMinUs"] = 10.0;
        c["lifetimeMaxUs"] = 1000.0;
        c["lifetimeCount"] = 9;
    }
    if (experiment == "stirap-amplitude") {
        c["anchorT1Us"] = 100.0;
        c["anchorTphiUs"] = 100.0;
        c["qualityFactor"] = 1e5;
        c["epsMin"] = 0.5;
        c["epsMax"] = 1.5;
        c["epsCount"] = 21;
    }
    if (experiment == "mis-rings") {
        c["rings"] = {2, 4, 6, 8, 10, 12, 14};
        c["tf"] = 32.0;
        c["nSteps"] = 400;
        c["deltaScale"] = 1.0; // cubic sweep amplitude, 0.55 * deltaScale at the ends
        c["gaussians"] = 7;
        c["weightBoundFraction"] = 1.0;
        c["eta"] = 1.0;
        c["powerMode"] = "absolute";
        c["budget"] = 2000;
        c["populationSize"] = 0;
    }
    if (experiment == "bench-adiabatic-vs-ensemble") {
        c["ensembleEpsMin"] = 0.9;
        c["ensembleEpsMax"] = 1.1;
        c["ensembleDoppFraction"] = 0.1;
        c["ensembleGridSide"] = 5;
    }
    return c;
}

RapStudySetup make_rap_setup(const json& config) {
    RapStudySetup setup;
    setup.tf = config.at("tf").get<double>();
    setup.grid = TimeGrid(0.0, setup.tf, config.at("nSteps").get<int>());
    setup.reference = reference_polynomial_rap(setup.tf / 2.0);
    setup.c0 = power_integral(setup.reference, setup.grid);
    setup.peakOmega = max_abs_on_grid(setup.reference.byLabel("Omega"), setup.grid);
    return setup;
}

namespace {

struct RapFamily {
    std::string name;
    ControlSet controls;
};

// Per-family propagation exports for the transfer study.
void export_rap_curves(ResultBundle& bundle, const RapStudySetup& setup,
                       const std::vector<RapFamily>& families) {
    const TimeGrid& grid = setup.grid;
    std::vector<Trajectory> trajs, grounds;
    for (const auto& fam : families) {
        RapSpec spec{setup.tf, fam.controls, {}};
        trajs.push_back(propagate_closed(rap_model(spec), rap_initial_state(), grid));
        grounds.push_back(instantaneous_ground_trajectory(rap_model(spec), grid));
    }

    std::string pulses = "t";
    std::string pops = "t";
    std::string bloch = "t";
    std::string groundFid = "t";
    for (const auto& fam : families) {
        pulses += ",Omega_" + fam.name + ",Delta_" + fam.name;
        pops += ",p1_" + fam.name;
        bloch += ",x_" + fam.name + ",y_" + fam.name + ",z_" + fam.name;
        groundFid += ",fid_" + fam.name;
    }
    pulses += '\n';
    pops += '\n';
    bloch += '\n';
    groundFid += '\n';

    for (int k = 0; k <= grid.nSteps; ++k) {
        const double t = grid.node(k);
        std::vector<double> prow{t}, rrow{t}, brow{t}, grow{t};
        for (std::size_t f = 0; f < families.size(); ++f) {
            prow.push_back(evaluate(families[f].controls.byLabel("Omega"), t));
            prow.push_back(evaluate(families[f].controls.byLabel("Delta"), t));
            const Vector& psi = trajs[f].states[k].vector();
            rrow.push_back(std::norm(psi(1)));
            const Complex coh = std::conj(psi(0)) * psi(1);
            brow.push_back(2.0 * coh.real());
            brow.push_back(2.0 * coh.imag());
            brow.push_back(std::norm(psi(0)) - std::norm(psi(1)));
            grow.push_back(fidelity_amplitude(grounds[f].states[k], trajs[f].states[k]));
        }
        pulses += csv_row(prow);
        pops += csv_row(rrow);
        bloch += csv_row(brow);
        groundFid += csv_row(grow);
    }
    bundle.artifacts["pulses.csv"] = pulses;
    bundle.artifacts["populations.csv"] = pops;
    bundle.artifacts["bloch.csv"] = bloch;
    bundle.artifacts["ground_fidelity.csv"] = groundFid;

    for (std::size_t f = 0; f < families.size(); ++f) {
        json summary;
        summary["terminalInfidelity"] =
            terminal_infidelity(trajs[f], rap_target_state());
        summary["adiabaticInfidelity"] = adiabatic_infidelity(trajs[f], grounds[f]);
        summary["pulseArea"] =
            pulse_area(families[f].controls.byLabel("Omega"), grid);
        bundle.summary["families"][families[f].name] = summary;
        bundle.artifacts["pulse_" + families[f].name + ".json"] =
            to_json(families[f].controls).dump(2) + "\n";
    }
}

} // namespace

ResultBundle run_rap_study(const json& config) {
    ResultBundle bundle;
    bundle.experiment = "rap-optimize";
    bundle.config = config;

    const RapStudySetup setup = make_rap_setup(config);
    const std::uint64_t seed = config.at("seed").get<std::uint64_t>();
    const int budget = config.at("budget").get<int>();

    RapProblem problem(setup.tf, setup.grid);
    PulseBasisConfig basis;
    basis.controls = {"Omega", "Delta"};
    basis.basis = BasisKind::Sine;
    basis.order = config.at("basisOrder").get<int>();
    basis.weightBound = config.at("weightBoundFraction").get<double>() * setup.peakOmega;

    CmaesOptions opts;
    opts.threads = resolve_threads(config);
    opts.populationSize = config.at("populationSize").get<int>();

    CostSpec traditional;
    traditional.useTerminal = true;
    traditional.terminalWeight = 1.0;
    traditional.eta = config.at("eta").get<double>();
    traditional.c0 = setup.c0;
    traditional.powerMode = resolve_power_mode(config);

    CostSpec adiabatic = traditional;
    adiabatic.terminalWeight = 0.5;
    adiabatic.useAdiabatic = true;
    adiabatic.adiabaticWeight = 0.5;

    StopWatch wTrad;
    const PulseOptimizationResult trad = optimize_pulse(
        problem, setup.reference, basis, traditional, budget, derive_seed(seed, 1), opts);
    bundle.wallTimesSec["optimizeTraditional"] = wTrad.seconds();

    StopWatch wAdia;
    const PulseOptimizationResult adia = optimize_pulse(
        problem, setup.reference, basis, adiabatic, budget, derive_seed(seed, 2), opts);
    bundle.wallTimesSec["optimizeAdiabatic"] = wAdia.seconds();

    bundle.artifacts["convergence_traditional.csv"] = history_csv(trad.run);
    bundle.artifacts["convergence_adiabatic.csv"] = history_csv(adia.run);

    export_rap_curves(bundle, setup,
                      {{"reference", setup.reference},
                       {"traditional", trad.controls},
                       {"adiabatic", adia.controls}});

    bundle.summary["c0"] = setup.c0;
    bundle.summary["peakOmega"] = setup.peakOmega;
    bundle.summary["bestCostTraditional"] = trad.run.bestCost;
    bundle.summary["bestCostAdiabatic"] = adia.run.bestCost;
    bundle.summary["evaluationsTraditional"] = trad.run.evaluations;
    bundle.summary["evaluationsAdiabatic"] = adia.run.evaluations;
    return bundle;
}

PlateauWidths plateau_widths(const RobustnessScan& scan, double threshold) {
    // nominal cell: eps closest to 1, doppler closest to 0
    int col0 = 0, row0 = 0;
    for (std::size_t i = 0; i < scan.areaScales.size(); ++i)
        if (std::abs(scan.areaScales[i] - 1.0) <
            std::abs(scan.areaScales[col0] - 1.0))
            col0 = static_cast<int>(i);
    for (std::size_t i = 0; i < scan.dopplers.size(); ++i)
        if (std::abs(scan.dopplers[i]) < std::abs(scan.dopplers[row0])) row0 = static_cast<int>(i);

    PlateauWidths widths;
    if (scan.infidelity(row0, col0) >= threshold) return widths;

    int lo = col0, hi = col0;
    while (lo > 0 && scan.infidelity(row0, lo - 1) < threshold) --lo;
    while (hi + 1 < scan.infidelity.cols() && scan.infidelity(row0, hi + 1) < threshold) ++hi;
    widths.epsCells = hi - lo + 1;

    lo = row0;
    hi = row0;
    while (lo > 0 && scan.infidelity(lo - 1, col0) < threshold) --lo;
    while (hi + 1 < scan.infidelity.rows() && scan.infidelity(hi + 1, col0) < threshold) ++hi;
    widths.doppCells = hi - lo + 1;
    return widths;
}

namespace {

ResultBundle run_rap_scan_impl(const json& config, bool digitizedShots) {
    ResultBundle bundle;
    bundle.experiment = digitizedShots ? "rap-trotter-scan" : "rap-scan";
    bundle.config = config;

    const RapStudySetup setup = make_rap_setup(config);
    const std::uint64_t seed = config.at("seed").get<std::uint64_t>();
    const int threads = resolve_threads(config);

    const auto eps = linspace(config.at("epsMin").get<double>(),
                              config.at("epsMax").get<double>(), config.at("epsCount").get<int>());
    const double doppMax = config.at("doppFraction").get<double>() * setup.peakOmega;
    const auto dopp = linspace(-doppMax, doppMax, config.at("doppCount").get<int>());

    std::vector<std::pair<std::string, ControlSet>> pulses;
    if (config.contains("pulses") && !config.at("pulses").empty()) {
        for (const auto& entry : config.at("pulses")) {
            const std::string name = entry.at("name").get<std::string>();
            const std::string file = entry.at("file").get<std::string>();
            pulses.push_back({name, control_set_from_json(json::parse(read_text_file(file)))});
        }
    } else {
        pulses.push_back({"reference", setup.reference});
    }

    const RapSpec base{setup.tf, setup.reference, {}};
    const int shots = digitizedShots ? config.at("shots").get<int>() : 0;
    const TimeGrid gateGrid = digitizedShots
                                  ? TimeGrid(0.0, setup.tf, config.at("gateSteps").get<int>())
                                  : setup.grid;

    for (std::size_t p = 0; p < pulses.size(); ++p) {
        StopWatch watch;
        const RobustnessScan scan =
            robustness_scan(base, eps, dopp, pulses[p].second, gateGrid, shots,
                            derive_seed(seed, 100 + p), threads);
        bundle.wallTimesSec["scan_" + pulses[p].first] = watch.seconds();
        bundle.artifacts["scan_" + pulses[p].first + ".csv"] = scan_csv(scan);

        const PlateauWidths w3 = plateau_widths(scan, 1e-3);
        const PlateauWidths w2 = plateau_widths(scan, 1e-2);
        json s;
        s["nominalInfidelity"] = scan.infidelity(static_cast<Eigen::Index>(dopp.size() / 2),
                                                 static_cast<Eigen::Index>(eps.size() / 2));
        s["plateau1e3"] = {{"epsCells", w3.epsCells}, {"doppCells", w3.doppCells}};
        s["plateau1e2"] = {{"epsCells", w2.epsCells}, {"doppCells", w2.doppCells}};
        bundle.summary["scans"][pulses[p].first] = s;
    }
    return bundle;
}

} // namespace

ResultBundle run_rap_scan(const json& config) { return run_rap_scan_impl(config, false); }
ResultBundle run_rap_trotter_scan(const json& config) { return run_rap_scan_impl(config, true); }

StirapSetup make_stirap_setup(const json& config) {
    StirapSetup setup;
    setup.spec.nSidebands = config.at("nSidebands").get<int>();
    setup.spec.fsr = config.at("fsrOverG").get<double>();
    setup.spec.couplingMagnitude = 1.0;
    setup.grid = TimeGrid(0.0, config.at("tfG").get<double>(), config.at("nSteps").get<int>());

    ControlPulse theta;
    theta.basis = BasisKind::Chebyshev;
    const std::string ramp = config.at("thetaRamp").get<std::string>();
    if (ramp == "sin2")
        theta.reference = ReferencePulse::sin2Ramp(0.5 * kPi, setup.grid.t0, setup.grid.tf);
    else if (ramp == "smoothstep")
        theta.reference = ReferencePulse::trigSmoothstep(0.5 * kPi, setup.grid.t0, setup.grid.tf);
    else
        throw std::invalid_argument("unknown thetaRamp: " + ramp);

    setup.satd = satd_controls(setup.spec, setup.grid, theta);
    setup.c0 = power_integral(setup.satd, setup.grid);
    return setup;
}

namespace {

StirapPhysical stirap_physical(const json& config) {
    StirapPhysical phys;
    phys.gRadPerSec = 2.0 * kPi * config.at("gOverTwoPiMHz").get<double>() * 1e6;
    phys.omegaCRadPerSec = 2.0 * kPi * config.at("omegaCOverTwoPiGHz").get<double>() * 1e9;
    return phys;
}

StirapDecay decay_from_us(const StirapPhysical& phys, double t1Us, double tphiUs, double qc) {
    StirapPhysical p = phys;
    p.t1Sec = t1Us * 1e-6;
    p.tphiSec = tphiUs * 1e-6;
    p.qc = qc;
    return to_internal_decay(p);
}

double stirap_terminal_infidelity(const StirapSpec& spec, const ControlSet& controls,
                                  const TimeGrid& grid) {
    StirapSpec run = spec;
    run.controls = controls;
    const LindbladModel model = stirap_open_model(run);
    const Trajectory traj = propagate_lindblad(model, stirap_initial_state(model.dim), grid);
    return terminal_infidelity(traj, stirap_target_state(model.dim));
}

} // namespace

ResultBundle run_stirap_lifetimes(const json& config) {
    ResultBundle bundle;
    bundle.experiment = "stirap-lifetimes";
    bundle.config = config;

    StirapSetup setup = make_stirap_setup(config);
    const StirapPhysical phys = stirap_physical(config);
    const std::uint64_t seed = config.at("seed").get<std::uint64_t>();
    const double inf = std::numeric_limits<double>::infinity();

    const auto lifetimes = logspace(config.at("lifetimeMinUs").get<double>(),
                                    config.at("lifetimeMaxUs").get<double>(),
                                    config.at("lifetimeCount").get<int>());
    const std::vector<double> qs = config.at("qualityFactors").get<std::vector<double>>();
    const double anchorUs = config.at("anchorT1Us").get<double>();

    CmaesOptions opts;
    opts.threads = resolve_threads(config);
    opts.populationSize = config.at("populationSize").get<int>();

    PulseBasisConfig basis;
    basis.controls = {"g_ac", "g_bc"};
    basis.basis = BasisKind::Chebyshev;
    basis.order = config.at("basisOrder").get<int>();
    basis.weightBound = config.at("weightBoundFraction").get<double>();

    CostSpec cost;
    cost.useTerminal = true;
    cost.terminalWeight = 0.5;
    cost.useAdiabatic = true;
    cost.adiabaticWeight = 0.5;
    cost.eta = config.at("eta").get<double>();
    cost.c0 = setup.c0;

    const int budget = config.at("budget").get<int>();

    const std::vector<std::string> sweeps = {"T1", "Tphi"};
    for (const std::string& sweep : sweeps) {
        std::string table = "lifetime_us";
        for (const double q : qs) {
            char col[96];
            std::snprintf(col, sizeof(col), ",satd_Q%.0e,adiabatic_Q%.0e", q, q);
            table += col;
        }
        table += '\n';

        std::vector<std::vector<double>> columns;
        int tag = sweep == "T1" ? 10 : 20;
        for (const double q : qs) {
            StirapSpec anchor = setup.spec;
            anchor.decay = sweep == "T1" ? decay_from_us(phys, anchorUs, inf, q)
                                         : decay_from_us(phys, inf, anchorUs, q);
            StirapProblem problem(anchor, setup.grid);

            StopWatch watch;
            const PulseOptimizationResult opt = optimize_pulse(
                problem, setup.satd, basis, cost, budget, derive_seed(seed, tag), opts);
            char key[64];
            std::snprintf(key, sizeof(key), "optimize_%s_Q%.0e", sweep.c_str(), q);
            bundle.wallTimesSec[key] = watch.seconds();
            char convName[64];
            std::snprintf(convName, sizeof(convName), "convergence_%s_Q%.0e.csv", sweep.c_str(),
                          q);
            bundle.artifacts[convName] = history_csv(opt.run);
            char pulseName[64];
            std::snprintf(pulseName, sizeof(pulseName), "pulse_%s_Q%.0e.json", sweep.c_str(), q);
            bundle.artifacts[pulseName] = to_json(opt.controls).dump(2) + "\n";

            std::vector<double> satdCol, adiaCol;
            for (const double lifeUs : lifetimes) {
                StirapSpec probe = setup.spec;
                probe.decay = sweep == "T1" ? decay_from_us(phys, lifeUs, inf, q)
                                            : decay_from_us(phys, inf, lifeUs, q);
                satdCol.push_back(stirap_terminal_infidelity(probe, setup.satd, setup.grid));
                adiaCol.push_back(stirap_terminal_infidelity(probe, opt.controls, setup.grid));
            }
            columns.push_back(satdCol);
            columns.push_back(adiaCol);
            ++tag;
        }

        for (std::size_t i = 0; i < lifetimes.size(); ++i) {
            std::vector<double> row{lifetimes[i]};
            for (const auto& col : columns) row.push_back(col[i]);
            table += csv_row(row);
        }
        bundle.artifacts[sweep == "T1" ? "stirap_t1.csv" : "stirap_tphi.csv"] = table;
    }
    bundle.summary["c0"] = setup.c0;
    return bundle;
}

ResultBundle run_stirap_amplitude(const json& config) {
    ResultBundle bundle;
    bundle.experiment = "stirap-amplitude";
    bundle.config = config;

    StirapSetup setup = make_stirap_setup(config);
    const StirapPhysical phys = stirap_physical(config);
    const std::uint64_t seed = config.at("seed").get<std::uint64_t>();

    StirapSpec anchor = setup.spec;
    anchor.decay = decay_from_us(phys, config.at("anchorT1Us").get<double>(),
                                 config.at("anchorTphiUs").get<double>(),
                                 config.at("qualityFactor").get<double>());
    StirapProblem problem(anchor, setup.grid);

    CmaesOptions opts;
    opts.threads = resolve_threads(config);
    opts.populationSize = config.at("populationSize").get<int>();

    PulseBasisConfig basis;
    basis.controls = {"g_ac", "g_bc"};
    basis.basis = BasisKind::Chebyshev;
    basis.order = config.at("basisOrder").get<int>();
    basis.weightBound = config.at("weightBoundFraction").get<double>();

    CostSpec adiabaticCost;
    adiabaticCost.useTerminal = true;
    adiabaticCost.terminalWeight = 0.5;
    adiabaticCost.useAdiabatic = true;
    adiabaticCost.adiabaticWeight = 0.5;
    adiabaticCost.eta = config.at("eta").get<double>();
    adiabaticCost.c0 = setup.c0;

    CostSpec traditionalCost;
    traditionalCost.useTerminal = true;
    traditionalCost.terminalWeight = 1.0;
    traditionalCost.eta = adiabaticCost.eta;
    traditionalCost.c0 = setup.c0;

    const int budget = config.at("budget").get<int>();

    StopWatch wAdia;
    const PulseOptimizationResult adia = optimize_pulse(problem, setup.satd, basis, adiabaticCost,
                                                        budget, derive_seed(seed, 31), opts);
    bundle.wallTimesSec["optimizeAdiabatic"] = wAdia.seconds();
    StopWatch wTrad;
    const PulseOptimizationResult trad = optimize_pulse(problem, setup.satd, basis,
                                                        traditionalCost, budget,
                                                        derive_seed(seed, 32), opts);
    bundle.wallTimesSec["optimizeTraditional"] = wTrad.seconds();

    bundle.artifacts["convergence_adiabatic.csv"] = history_csv(adia.run);
    bundle.artifacts["convergence_traditional.csv"] = history_csv(trad.run);
    bundle.artifacts["pulse_adiabatic.json"] = to_json(adia.controls).dump(2) + "\n";
    bundle.artifacts["pulse_traditional.json"] = to_json(trad.controls).dump(2) + "\n";
    bundle.artifacts["pulse_satd.json"] = to_json(setup.satd).dump(2) + "\n";

    const auto eps = linspace(config.at("epsMin").get<double>(),
                              config.at("epsMax").get<double>(), config.at("epsCount").get<int>());

    std::string table = "eps,satd,adiabatic,traditional\n";
    for (const double e : eps) {
        PerturbationAlpha alpha;
        alpha.amplitudeScale = e;
        std::vector<double> row{e};
        const std::vector<const ControlSet*> methodControls = {&setup.satd, &adia.controls,
                                                               &trad.controls};
        for (const ControlSet* controls : methodControls) {
            const ControlSet scaled = problem.perturbControls(*controls, alpha);
            row.push_back(stirap_terminal_infidelity(anchor, scaled, setup.grid));
        }
        table += csv_row(row);
    }
    bundle.artifacts["stirap_amplitude.csv"] = table;
    bundle.summary["c0"] = setup.c0;
    return bundle;
}

ResultBundle run_mis_rings(const json& config) {
    ResultBundle bundle;
    bundle.experiment = "mis-rings";
    bundle.config = config;

    const std::uint64_t seed = config.at("seed").get<std::uint64_t>();
    const double tf = config.at("tf").get<double>();
    const TimeGrid grid(0.0, tf, config.at("nSteps").get<int>());
    const double deltaScale = config.at("deltaScale").get<double>();
    const int budget = config.at("budget").get<int>();
    const double fourPi = 4.0 * kPi;

    CmaesOptions opts;
    opts.threads = resolve_threads(config);
    opts.populationSize = config.at("populationSize").get<int>();

    // Delta sweeps positive to negative: annealing counterpart of the chirp.
    ControlPulse delta;
    delta.basis = BasisKind::Sine;
    delta.reference = ReferencePulse::rapDelta(-deltaScale, 0.0, tf);

    ControlPulse sinePulse;
    sinePulse.basis = BasisKind::Gaussian;
    sinePulse.reference = ReferencePulse::squaredSine(2.0 * fourPi / tf, 0.0, tf);

    ControlPulse constPulse;
    constPulse.basis = BasisKind::Gaussian;
    constPulse.reference = ReferencePulse::constant(fourPi / tf, 0.0, tf);

    ControlSet sineSet{{sinePulse, delta}, {"Omega", "Delta"}};
    ControlSet constSet{{constPulse, delta}, {"Omega", "Delta"}};
    const double c0 = power_integral(sineSet, grid);

    PulseBasisConfig basis;
    basis.controls = {"Omega"};
    basis.basis = BasisKind::Gaussian;
    basis.order = config.at("gaussians").get<int>();
    basis.weightBound =
        config.at("weightBoundFraction").get<double>() * sinePulse.reference.amplitude;

    CostSpec cost;
    cost.useTerminal = false;
    cost.useAdiabatic = true;
    cost.adiabaticWeight = 1.0;
    cost.eta = config.at("eta").get<double>();
    cost.c0 = c0;
    cost.powerMode = resolve_power_mode(config);

    std::string table = "N,sectorDim,constant,squaredSine,optimized\n";
    for (const int n : config.at("rings").get<std::vector<int>>()) {
        const RingSector sector = build_ring_sector(n);
        MisSectorProblem problem(sector, grid);

        StopWatch watch;
        const PulseOptimizationResult opt = optimize_pulse(problem, sineSet, basis, cost, budget,
                                                           derive_seed(seed, 40 + n), opts);
        bundle.wallTimesSec["optimize_N" + std::to_string(n)] = watch.seconds();
        bundle.artifacts["convergence_N" + std::to_string(n) + ".csv"] = history_csv(opt.run);

        // Equal-area comparison: every pulse enters the final run at area 4 pi.
        auto fidelityAt = [&](ControlSet controls) {
            controls.byLabel("Omega") = normalize_area(controls.byLabel("Omega"), grid, fourPi);
            const Trajectory traj = problem.propagate(controls);
            return 1.0 - terminal_infidelity(traj, problem.target(controls));
        };
        const double fidConst = fidelityAt(constSet);
        const double fidSine = fidelityAt(sineSet);
        const double fidOpt = fidelityAt(opt.controls);

        table += std::to_string(n) + "," + std::to_string(sector.dim) + "," +
                 format_double(fidConst) + "," + format_double(fidSine) + "," +
                 format_double(fidOpt) + "\n";

        ControlSet normalized = opt.controls;
        normalized.byLabel("Omega") = normalize_area(normalized.byLabel("Omega"), grid, fourPi);
        bundle.artifacts["pulse_omega_N" + std::to_string(n) + ".csv"] =
            sample_csv(normalized.byLabel("Omega"), grid);
        bundle.artifacts["pulse_N" + std::to_string(n) + ".json"] =
            to_json(normalized).dump(2) + "\n";

        json s;
        s["sectorDim"] = sector.dim;
        s["fidelityConstant"] = fidConst;
        s["fidelitySquaredSine"] = fidSine;
        s["fidelityOptimized"] = fidOpt;
        s["bestCost"] = opt.run.bestCost;
        bundle.summary["rings"][std::to_string(n)] = s;
    }
    bundle.artifacts["mis_fidelity.csv"] = table;
    bundle.summary["c0"] = c0;
    return bundle;
}

ResultBundle run_benchmark(const json& config) {
    ResultBundle bundle;
    bundle.experiment = "bench-adiabatic-vs-ensemble";
    bundle.config = config;

    const RapStudySetup setup = make_rap_setup(config);
    const std::uint64_t seed = config.at("seed").get<std::uint64_t>();
    const int budget = config.at("budget").get<int>();

    RapProblem inner(setup.tf, setup.grid);

    PulseBasisConfig basis;
    basis.controls = {"Omega", "Delta"};
    basis.basis = BasisKind::Sine;
    basis.order = config.at("basisOrder").get<int>();
    basis.weightBound = config.at("weightBoundFraction").get<double>() * setup.peakOmega;

    CmaesOptions opts;
    opts.threads = resolve_threads(config);
    opts.populationSize = config.at("populationSize").get<int>();

    CostSpec adiabaticCost;
    adiabaticCost.useTerminal = true;
    adiabaticCost.terminalWeight = 0.5;
    adiabaticCost.useAdiabatic = true;
    adiabaticCost.adiabaticWeight = 0.5;
    adiabaticCost.eta = config.at("eta").get<double>();
    adiabaticCost.c0 = setup.c0;
    adiabaticCost.powerMode = resolve_power_mode(config);

    const int side = config.at("ensembleGridSide").get<int>();
    const auto epsGrid = linspace(config.at("ensembleEpsMin").get<double>(),
                                  config.at("ensembleEpsMax").get<double>(), side);
    const double doppMax = config.at("ensembleDoppFraction").get<double>() * setup.peakOmega;
    const auto doppGrid = linspace(-doppMax, doppMax, side);

    CostSpec ensembleCost;
    ensembleCost.useTerminal = false;
    ensembleCost.useEnsemble = true;
    ensembleCost.ensembleWeight = 1.0;
    for (const double e : epsGrid)
        for (const double d : doppGrid) ensembleCost.ensemble.members.push_back({e, d, 1.0});
    ensembleCost.eta = adiabaticCost.eta;
    ensembleCost.c0 = setup.c0;
    ensembleCost.powerMode = adiabaticCost.powerMode;

    CountingProblem adiabaticProblem(inner);
    StopWatch wAdia;
    const PulseOptimizationResult adia =
        optimize_pulse(adiabaticProblem, setup.reference, basis, adiabaticCost, budget,
                       derive_seed(seed, 51), opts);
    const double tAdia = wAdia.seconds();

    CountingProblem ensembleProblem(inner);
    StopWatch wEns;
    const PulseOptimizationResult ens =
        optimize_pulse(ensembleProblem, setup.reference, basis, ensembleCost, budget,
                       derive_seed(seed, 52), opts);
    const double tEns = wEns.seconds();

    bundle.wallTimesSec["optimizeAdiabatic"] = tAdia;
    bundle.wallTimesSec["optimizeEnsemble"] = tEns;

    bundle.artifacts["convergence_adiabatic.csv"] = history_csv(adia.run);
    bundle.artifacts["convergence_ensemble.csv"] = history_csv(ens.run);
    bundle.artifacts["pulse_adiabatic.json"] = to_json(adia.controls).dump(2) + "\n";
    bundle.artifacts["pulse_ensemble.json"] = to_json(ens.controls).dump(2) + "\n";

    std::string bench = "method,propagations,evaluations,bestCost\n";
    bench += "adiabatic," + std::to_string(adiabaticProblem.propagations()) + "," +
             std::to_string(adia.run.evaluations) + "," + format_double(adia.run.bestCost) + "\n";
    bench += "ensemble," + std::to_string(ensembleProblem.propagations()) + "," +
             std::to_string(ens.run.evaluations) + "," + format_double(ens.run.bestCost) + "\n";
    bundle.artifacts["bench.csv"] = bench;

    const auto eps = linspace(config.at("epsMin").get<double>(),
                              config.at("epsMax").get<double>(), config.at("epsCount").get<int>());
    const double scanDoppMax = config.at("doppFraction").get<double>() * setup.peakOmega;
    const auto dopp = linspace(-scanDoppMax, scanDoppMax, config.at("doppCount").get<int>());
    const RapSpec base{setup.tf, setup.reference, {}};
    const int threads = resolve_threads(config);
    const RobustnessScan scanAdia = robustness_scan(base, eps, dopp, adia.controls, setup.grid, 0,
                                                    derive_seed(seed, 53), threads);
    const RobustnessScan scanEns = robustness_scan(base, eps, dopp, ens.controls, setup.grid, 0,
                                                   derive_seed(seed, 54), threads);
    bundle.artifacts["scan_adiabatic.csv"] = scan_csv(scanAdia);
    bundle.artifacts["scan_ensemble.csv"] = scan_csv(scanEns);

    const double perGenAdia =
        static_cast<double>(adiabaticProblem.propagations()) / adia.run.evaluations;
    const double perGenEns =
        static_cast<double>(ensembleProblem.propagations()) / ens.run.evaluations;

    bundle.summary["propagationsAdiabatic"] = adiabaticProblem.propagations();
    bundle.summary["propagationsEnsemble"] = ensembleProblem.propagations();
    bundle.summary["propagationRatio"] = perGenEns / perGenAdia;
    bundle.summary["speedup"] = tEns / tAdia;
    const PlateauWidths wa = plateau_widths(scanAdia, 1e-3);
    const PlateauWidths we = plateau_widths(scanEns, 1e-3);
    bundle.summary["plateauAdiabatic1e3"] = {{"epsCells", wa.epsCells},
                                             {"doppCells", wa.doppCells}};
    bundle.summary["plateauEnsemble1e3"] = {{"epsCells", we.epsCells},
                                            {"doppCells", we.doppCells}};
    return bundle;
}

ResultBundle run_experiment(const std::string& name, const json& config) {
    if (name == "rap-optimize") return run_rap_study(config);
    if (name == "rap-scan") return run_rap_scan(config);
    if (name == "rap-trotter-scan") return run_rap_trotter_scan(config);
    if (name == "stirap-lifetimes") return run_stirap_lifetimes(config);
    if (name == "stirap-amplitude") return run_stirap_amplitude(config);
    if (name == "mis-rings") return run_mis_rings(config);
    if (name == "bench-adiabatic-vs-ensemble") return run_benchmark(config);
    throw std::invalid_argument("unknown experiment: " + name);
}

} // namespace adiqoc
