#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "shellrg/experiment.hpp"
#include "shellrg/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

std::string readFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw shellrg::ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int defaultWorkers() {
    if (const char* env = std::getenv("SHELLRG_WORKERS")) {
        try {
            return std::max(0, std::stoi(env));
        } catch (...) {
            std::cerr << "warning: ignoring malformed SHELLRG_WORKERS='" << env << "'\n";
        }
    }
    return 0; // auto
}

void applyOverrides(shellrg::ExperimentConfig& cfg, int workers, bool workersSet,
                    std::uint64_t seed, bool seedSet) {
    if (workersSet)
        cfg.workers = workers;
    else if (cfg.workers == 0)
        cfg.workers = defaultWorkers();
    if (seedSet) cfg.seed = seed;
}

int runConfigs(const std::vector<std::pair<std::string, shellrg::ExperimentConfig>>& configs,
               const std::string& outRoot, bool multi) {
    bool anyFailed = false;
    for (const auto& [name, cfg] : configs) {
        const std::string dir = multi ? outRoot + "/" + name : outRoot;
        const shellrg::ExperimentResult res = shellrg::runExperiment(cfg, dir);
        std::cout << (res.success ? "ok   " : "FAIL ") << shellrg::kindName(cfg.kind) << " -> "
                  << dir << "\n";
        if (!res.success) anyFailed = true;
    }
    return anyFailed ? kExitRuntime : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"shell-model RG laboratory"};
    app.set_version_flag("--version", shellrg::kVersion);
    app.require_subcommand(1);

    std::string configPath, outDir = "out", presetName;
    int workers = 0;
    std::uint64_t seed = 0;

    CLI::App* run = app.add_subcommand("run", "run one experiment from a JSON config");
    run->add_option("--config", configPath, "experiment config file")->required();
    CLI::Option* runOut = run->add_option("--out", outDir, "output directory");
    CLI::Option* runWorkers = run->add_option("--workers", workers, "worker thread count");
    CLI::Option* runSeed = run->add_option("--seed", seed, "RNG seed override");
    (void)runOut;

    CLI::App* preset = app.add_subcommand("preset", "run a named experiment bundle");
    preset->add_option("name", presetName, "preset name ('list' to enumerate)")->required();
    preset->add_option("--out", outDir, "output directory");
    CLI::Option* preWorkers = preset->add_option("--workers", workers, "worker thread count");
    CLI::Option* preSeed = preset->add_option("--seed", seed, "RNG seed override");

    CLI::App* validate = app.add_subcommand("validate", "parse and echo a config");
    validate->add_option("--config", configPath, "experiment config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed()) {
            shellrg::ExperimentConfig cfg = shellrg::parseConfig(readFile(configPath));
            applyOverrides(cfg, workers, runWorkers->count() > 0, seed, runSeed->count() > 0);
            return runConfigs({{"run", cfg}}, outDir, false);
        }
        if (preset->parsed()) {
            if (presetName == "list") {
                for (const std::string& n : shellrg::presetNames()) std::cout << n << "\n";
                return kExitOk;
            }
            auto configs = shellrg::presetConfigs(presetName);
            for (auto& [name, cfg] : configs)
                applyOverrides(cfg, workers, preWorkers->count() > 0, seed,
                               preSeed->count() > 0);
            return runConfigs(configs, outDir + "/" + presetName, true);
        }
        if (validate->parsed()) {
            const shellrg::ExperimentConfig cfg = shellrg::parseConfig(readFile(configPath));
            std::cout << shellrg::serializeConfig(cfg);
            return kExitOk;
        }
    } catch (const shellrg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}
