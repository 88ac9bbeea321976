// Command-line driver: one subcommand per experiment, JSON configs with
// CLI overrides for the common knobs.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "adiqoc/csv.hpp"
#include "adiqoc/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"adiqoc: pulse optimization for adiabatic protocols"};
    app.require_subcommand(1);

    struct SubArgs {
        std::string configPath;
        std::string out;
        long long seed = -1;
        int threads = -1;
        int budget = -1;
    };

    std::map<std::string, SubArgs> args;
    for (const auto& name : adiqoc::experiment_names()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        SubArgs& a = args[name];
        sub->add_option("--config", a.configPath, "JSON config file merged over defaults");
        sub->add_option("--out", a.out, "output directory");
        sub->add_option("--seed", a.seed, "random seed");
        sub->add_option("--threads", a.threads, "worker threads (0 = hardware)");
        sub->add_option("--budget", a.budget, "optimizer generations");
    }

    CLI11_PARSE(app, argc, argv);

    const std::string name = app.get_subcommands().front()->get_name();
    const SubArgs& a = args[name];

    try {
        nlohmann::json config = adiqoc::default_config(name);
        if (!a.configPath.empty()) {
            const auto overrides = nlohmann::json::parse(adiqoc::read_text_file(a.configPath));
            config = adiqoc::merge_config(config, overrides);
        }
        if (a.seed >= 0) config["seed"] = static_cast<std::uint64_t>(a.seed);
        if (a.threads >= 0) config["threads"] = a.threads;
        if (a.budget >= 0) config["budget"] = a.budget;
        if (!a.out.empty()) config["out"] = a.out;

        const adiqoc::ResultBundle bundle = adiqoc::run_experiment(name, config);
        bundle.write(config.at("out").get<std::string>());

        std::cout << "wrote " << bundle.artifacts.size() << " artifacts to "
                  << config.at("out").get<std::string>() << "\n";
        std::cout << "summary: " << bundle.summary.dump(2) << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
