#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shellrg/rg.hpp"
#include "shellrg/solver.hpp"

namespace shellrg {

enum class ExperimentKind {
    SingleRun,
    RgConvergence,
    Eigenmode,
    RgVerify,
    ViscousBridge,
    ViscousRescaled,
    AttractorProbe,
    ChaosGrowth,
    StationaryCheck,
};

ExperimentKind kindFromName(const std::string& name);
std::string kindName(ExperimentKind k);

/// N-free regularization family; a grid instantiates it at each level.
struct RegTemplate {
    enum class Family { Canonical, Auxiliary, Viscous };
    Family family = Family::Canonical;
    int J = 1;
    double eps = 0.0;
    std::vector<double> coeffs;
    double beta = 1.0;

    /// Viscous families follow the vanishing sequence nu_N = k_N^{-4/3}.
    RegularizationSpec at(int level) const;
    std::string label() const;
};

struct GridSpec {
    RegTemplate reg;
    std::vector<int> levels;
    int shells = 0; // truncation override for auxiliary/viscous (0 = default rule)
};

struct IcSpec {
    enum class Kind { Builtin, Literal, Fill } kind = Kind::Builtin;
    BuiltinIc builtin = BuiltinIc::IC1;
    std::vector<Complex> literal;
    double fill = 0.0;

    ShellState resolve(const ModelSpec& model, int shells) const;
};

struct BcSpec {
    enum class Kind { Builtin, Const } kind = Kind::Builtin;
    std::string builtin = "zero";
    std::vector<Complex> constants;

    BoundarySpec resolve(const ModelSpec& model) const;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::SingleRun;
    std::string model = "dyadic";
    std::vector<GridSpec> grids;
    int reference = 0; // reference level (eigenmode, viscous-rescaled)
    IcSpec ic;
    BcSpec bc;
    double tStart = 0.0, tEnd = 1.0;
    std::vector<double> sampleTimes; // resolved at parse time
    std::vector<int> probeShells{1, 2, 3, 4};
    double rho = -0.5;
    SolverConfig solver;
    std::uint64_t seed = 1;
    int workers = 0;

    // kind-specific knobs
    int samples = 100;
    double coeffLo = 0.0, coeffHi = 3.0;
    double tStar = 0.5;
    double eps = 1e-9;
    std::vector<double> nuList;
    double blowupTheta = 0.5;
    int blowupShell = 0; // 0 = deepest ideal shell

    void validate() const;
};

/// Parses a JSON experiment config; defaults applied, unknown keys rejected
/// with the offending key named.
ExperimentConfig parseConfig(const std::string& text);
std::string serializeConfig(const ExperimentConfig& cfg);

struct RunRecord {
    std::string id;
    RunStatus status = RunStatus::Completed;
    double tEnd = 0.0;
    std::int64_t accepted = 0;
    std::int64_t rejected = 0;
    std::int64_t rhsEvals = 0;
    bool required = true;
};

struct ExperimentResult {
    bool success = false;
    std::string outDir;
    std::vector<RunRecord> runs;
    std::string resultsJson; // kind-specific structured record
};

/// Executes the experiment, writing config echo, manifest, trajectory CSVs
/// and analysis records into outDir. Deterministic given (config, seed).
ExperimentResult runExperiment(const ExperimentConfig& cfg, const std::string& outDir);

/// Named experiment bundles at desk scale (each entry: sub-name + config).
std::vector<std::pair<std::string, ExperimentConfig>> presetConfigs(const std::string& name);
std::vector<std::string> presetNames();

} // namespace shellrg
