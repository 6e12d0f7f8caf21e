#include "shellrg/experiment.hpp"

namespace shellrg {

namespace {

std::vector<int> range(int lo, int hi) {
    std::vector<int> v;
    for (int n = lo; n <= hi; ++n) v.push_back(n);
    return v;
}

GridSpec canonicalGrid(int J, std::vector<int> levels) {
    GridSpec g;
    g.reg.family = RegTemplate::Family::Canonical;
    g.reg.J = J;
    g.levels = std::move(levels);
    return g;
}

std::vector<double> linspace(double a, double b, int count) {
    std::vector<double> v;
    for (int i = 0; i < count; ++i) v.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
    return v;
}

SolverConfig stiff(double maxStep = 0.005) {
    SolverConfig s;
    s.method = Method::StiffAdaptive;
    s.maxStep = maxStep;
    return s;
}

/// Deviation-collapse study for the dyadic model: deviations from the
/// high-level reference, rescaled by c_J rho^N, for three cutoff widths.
ExperimentConfig fig1Config(BuiltinIc ic) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::Eigenmode;
    cfg.model = "dyadic";
    cfg.grids = {canonicalGrid(1, range(10, 20)), canonicalGrid(2, range(10, 20)),
                 canonicalGrid(3, range(10, 20))};
    cfg.reference = 50;
    cfg.ic.builtin = ic;
    cfg.bc.builtin = "dyadic-default";
    cfg.tStart = 0.0;
    cfg.tEnd = 3.0;
    cfg.sampleTimes = linspace(0.0, 3.0, 151);
    cfg.probeShells = {1, 2, 3, 4};
    cfg.solver = stiff();
    return cfg;
}

ExperimentConfig fig2Overlay() {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::SingleRun;
    cfg.model = "dyadic";
    GridSpec canonical = canonicalGrid(1, {20});
    GridSpec aux;
    aux.reg.family = RegTemplate::Family::Auxiliary;
    aux.reg.beta = 1.0;
    aux.levels = {20};
    GridSpec visc;
    visc.reg.family = RegTemplate::Family::Viscous;
    visc.levels = {20}; // nu = k_20^{-4/3} ~ 1e-8
    cfg.grids = {canonical, aux, visc};
    cfg.ic.builtin = BuiltinIc::IC2;
    cfg.bc.builtin = "dyadic-default";
    cfg.tEnd = 3.0;
    cfg.sampleTimes = linspace(0.0, 3.0, 301);
    cfg.solver = stiff();
    return cfg;
}

ExperimentConfig fig2AuxEigenmode() {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::Eigenmode;
    cfg.model = "dyadic";
    GridSpec j1 = canonicalGrid(1, range(12, 16));
    GridSpec aux;
    aux.reg.family = RegTemplate::Family::Auxiliary;
    aux.reg.beta = 1.0;
    aux.levels = range(15, 24);
    cfg.grids = {j1, aux};
    cfg.reference = 36;
    cfg.ic.builtin = BuiltinIc::IC2;
    cfg.bc.builtin = "dyadic-default";
    cfg.tEnd = 3.0;
    cfg.sampleTimes = linspace(0.5, 3.0, 101);
    cfg.solver = stiff();
    return cfg;
}

ExperimentConfig fig2Bridge() {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::ViscousBridge;
    cfg.model = "dyadic";
    GridSpec g;
    g.reg.family = RegTemplate::Family::Viscous;
    g.levels = {0};
    g.shells = 34;
    cfg.grids = {g};
    cfg.nuList = {1e-5, 1e-6, 1e-7, 1e-8};
    cfg.ic.builtin = BuiltinIc::IC2;
    cfg.bc.builtin = "dyadic-default";
    cfg.tEnd = 3.0;
    cfg.sampleTimes = linspace(0.05, 3.0, 60);
    cfg.solver = stiff();
    return cfg;
}

ExperimentConfig fig3Config(BuiltinIc ic) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::ViscousRescaled;
    cfg.model = "dyadic";
    GridSpec g;
    g.reg.family = RegTemplate::Family::Viscous;
    g.levels = range(16, 26);
    cfg.grids = {g};
    cfg.reference = 36;
    cfg.ic.builtin = ic;
    cfg.bc.builtin = "dyadic-default";
    cfg.tEnd = 3.0;
    cfg.sampleTimes = linspace(0.0, 3.0, 151);
    cfg.probeShells = {1};
    // deviations shrink like rho^N; the top levels need extra accuracy
    cfg.solver = stiff(0.0025);
    cfg.solver.rtol = 1e-12;
    cfg.solver.atol = 1e-14;
    return cfg;
}

ExperimentConfig fig4Convergence(BuiltinIc ic, double tEnd) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::RgConvergence;
    cfg.model = "gledzer";
    cfg.grids = {canonicalGrid(3, range(20, 34))};
    cfg.ic.builtin = ic;
    cfg.bc.builtin = "gledzer-default";
    cfg.tEnd = tEnd;
    cfg.sampleTimes = linspace(0.0, tEnd, 201);
    cfg.solver = stiff(0.01);
    return cfg;
}

ExperimentConfig fig5Probe(BuiltinIc ic, double tStar, std::vector<int> levels, int samples) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::AttractorProbe;
    cfg.model = "gledzer";
    cfg.grids = {canonicalGrid(3, std::move(levels))};
    cfg.ic.builtin = ic;
    cfg.bc.builtin = "gledzer-default";
    cfg.tEnd = tStar;
    cfg.sampleTimes = {tStar};
    cfg.tStar = tStar;
    cfg.samples = samples;
    cfg.coeffLo = 0.0;
    cfg.coeffHi = 3.0;
    cfg.seed = 2026;
    cfg.solver = stiff(0.01);
    return cfg;
}

ExperimentConfig fig6Chaos(BuiltinIc ic, double tStar, double eps) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::ChaosGrowth;
    cfg.model = "sabra";
    cfg.grids = {canonicalGrid(2, range(6, 13))};
    cfg.ic.builtin = ic;
    cfg.bc.builtin = "sabra-default";
    cfg.tEnd = tStar;
    cfg.sampleTimes = {tStar};
    cfg.tStar = tStar;
    cfg.eps = eps;
    cfg.solver.method = Method::ExplicitAdaptive;
    cfg.solver.rtol = 1e-12;
    cfg.solver.atol = 1e-14;
    return cfg;
}

ExperimentConfig stationaryCheck() {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::StationaryCheck;
    cfg.model = "dyadic";
    cfg.grids = {canonicalGrid(1, range(0, 10))};
    cfg.ic.kind = IcSpec::Kind::Fill;
    cfg.ic.fill = 0.5;
    cfg.bc.kind = BcSpec::Kind::Const;
    cfg.bc.constants = {Complex(1.0, 0.0)};
    cfg.tEnd = 60.0;
    cfg.sampleTimes = {60.0};
    cfg.solver = stiff(0.0);
    return cfg;
}

} // namespace

std::vector<std::string> presetNames() {
    return {"fig1-dyadic-convergence", "fig2-viscous-bridge", "fig3-viscous-rescaled",
            "fig45-gledzer-attractor", "fig6-sabra-chaos", "stationary-check"};
}

std::vector<std::pair<std::string, ExperimentConfig>> presetConfigs(const std::string& name) {
    std::vector<std::pair<std::string, ExperimentConfig>> out;
    if (name == "fig1-dyadic-convergence") {
        out.emplace_back("ic1", fig1Config(BuiltinIc::IC1));
        out.emplace_back("ic2", fig1Config(BuiltinIc::IC2));
    } else if (name == "fig2-viscous-bridge") {
        out.emplace_back("overlay", fig2Overlay());
        out.emplace_back("aux-eigenmode", fig2AuxEigenmode());
        out.emplace_back("bridge", fig2Bridge());
    } else if (name == "fig3-viscous-rescaled") {
        out.emplace_back("ic1", fig3Config(BuiltinIc::IC1));
        out.emplace_back("ic2", fig3Config(BuiltinIc::IC2));
    } else if (name == "fig45-gledzer-attractor") {
        out.emplace_back("sweep-ic2", fig4Convergence(BuiltinIc::IC2, 0.5));
        out.emplace_back("cloud-ic2", fig5Probe(BuiltinIc::IC2, 0.5, {24, 30}, 60));
        out.emplace_back("sweep-ic1", fig4Convergence(BuiltinIc::IC1, 4.2));
    } else if (name == "fig6-sabra-chaos") {
        out.emplace_back("ic2-desk", fig6Chaos(BuiltinIc::IC2, 1.0, 1e-9));
        out.emplace_back("ic1-desk", fig6Chaos(BuiltinIc::IC1, 3.0, 1e-9));
        out.emplace_back("ic2-tiny-eps", fig6Chaos(BuiltinIc::IC2, 1.0, 1e-13));
    } else if (name == "stationary-check") {
        out.emplace_back("main", stationaryCheck());
    } else {
        std::string names;
        for (const std::string& n : presetNames()) names += "\n  " + n;
        throw ConfigError("unknown preset '" + name + "'; available:" + names);
    }
    return out;
}

} // namespace shellrg
