#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "adiqoc/models/stirap.hpp"
#include "adiqoc/trotter.hpp"

namespace adiqoc {

// Everything an experiment produces: plot-ready CSV artifacts plus a
// manifest holding the resolved config, summary metrics, and wall times.
// CSV artifacts are byte-reproducible from (config, seed); wall times live
// only in the manifest.
struct ResultBundle {
    std::string experiment;
    nlohmann::json config;
    nlohmann::json summary;
    std::map<std::string, double> wallTimesSec;
    std::map<std::string, std::string> artifacts; // filename -> contents

    void write(const std::string& outDir) const;
};

/// Built-in defaults for each experiment; user configs are merged on top.
nlohmann::json default_config(const std::string& experiment);

/// Deep-merge overrides into base (objects merge, scalars/arrays replace).
nlohmann::json merge_config(nlohmann::json base, const nlohmann::json& overrides);

std::vector<std::string> experiment_names();

ResultBundle run_rap_study(const nlohmann::json& config);
ResultBundle run_rap_scan(const nlohmann::json& config);
ResultBundle run_rap_trotter_scan(const nlohmann::json& config);
ResultBundle run_stirap_lifetimes(const nlohmann::json& config);
ResultBundle run_stirap_amplitude(const nlohmann::json& config);
ResultBundle run_mis_rings(const nlohmann::json& config);
ResultBundle run_benchmark(const nlohmann::json& config);

/// Dispatch by experiment name.
ResultBundle run_experiment(const std::string& name, const nlohmann::json& config);

// Shared helpers used by experiments and the acceptance suite.

struct RapStudySetup {
    double tf = 0.0;
    TimeGrid grid;
    ControlSet reference;
    double c0 = 0.0;
    double peakOmega = 0.0;
};
RapStudySetup make_rap_setup(const nlohmann::json& config);

struct StirapSetup {
    StirapSpec spec; // controls empty; decay at the optimization anchor
    TimeGrid grid;
    ControlSet satd;
    double c0 = 0.0;
};
StirapSetup make_stirap_setup(const nlohmann::json& config);

/// Contiguous below-threshold run lengths through the nominal grid point
/// (eps = 1, doppler = 0), along each axis.
struct PlateauWidths {
    int epsCells = 0;
    int doppCells = 0;
};
PlateauWidths plateau_widths(const RobustnessScan& scan, double threshold);

} // namespace adiqoc
