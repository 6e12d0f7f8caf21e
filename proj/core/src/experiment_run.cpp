#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>

#include <json.hpp>

#include "shellrg/analysis.hpp"
#include "shellrg/csv.hpp"
#include "shellrg/experiment.hpp"
#include "shellrg/parallel.hpp"
#include "shellrg/version.hpp"

namespace shellrg {

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct RunContext {
    const ExperimentConfig& cfg;
    ModelSpec model;
    fs::path out;
    std::vector<RunRecord> runs;
    std::mutex mutex;
    json results;

    RunContext(const ExperimentConfig& c, const std::string& outDir)
        : cfg(c), model(modelFromName(c.model)), out(outDir) {}

    void record(const std::string& id, const Trajectory& traj, bool required = true) {
        RunRecord r;
        r.id = id;
        r.status = traj.status();
        r.tEnd = traj.tEnd();
        r.accepted = traj.stats().accepted;
        r.rejected = traj.stats().rejected;
        r.rhsEvals = traj.stats().rhsEvals;
        r.required = required;
        std::lock_guard<std::mutex> lock(mutex);
        runs.push_back(std::move(r));
    }

    void record(const std::string& id, RunStatus status, double tEnd,
                const IntegrationStats& stats, bool required) {
        RunRecord r;
        r.id = id;
        r.status = status;
        r.tEnd = tEnd;
        r.accepted = stats.accepted;
        r.rejected = stats.rejected;
        r.rhsEvals = stats.rhsEvals;
        r.required = required;
        std::lock_guard<std::mutex> lock(mutex);
        runs.push_back(std::move(r));
    }

    std::string path(const std::string& file) const { return (out / file).string(); }
};

std::string levelTag(const std::string& label, int level) {
    std::string s = label;
    for (char& c : s)
        if (c == '=') c = '-';
    return s + "_N" + std::to_string(level);
}

int shellsFor(const GridSpec& grid, int level) {
    return impliedShells(grid.reg.at(level), grid.shells);
}

Trajectory integrateGridPoint(RunContext& ctx, const GridSpec& grid, int level,
                              bool required = true) {
    const RegularizationSpec reg = grid.reg.at(level);
    const int shells = shellsFor(grid, level);
    const ShellState ic = ctx.cfg.ic.resolve(ctx.model, shells);
    const BoundarySpec bc = ctx.cfg.bc.resolve(ctx.model);
    Trajectory traj =
        integrate(ctx.model, reg, bc, ic, ctx.cfg.tStart, ctx.cfg.tEnd, ctx.cfg.solver);
    ctx.record(levelTag(grid.reg.label(), level), traj, required);
    return traj;
}

void writeDeviationCsv(const std::string& path, const std::vector<DeviationSeries>& series) {
    CsvFile csv(path, {"t", "n", "re", "im"});
    if (series.empty()) return;
    for (size_t k = 0; k < series.front().times.size(); ++k) {
        for (const auto& s : series) {
            const Complex v = s.values[k];
            csv.row({formatG17(s.times[k]), std::to_string(s.shell), formatG17(v.real()),
                     formatG17(v.imag())});
        }
    }
}

// --------------------------------------------------------------------------
// Kind handlers
// --------------------------------------------------------------------------

void runSingleRun(RunContext& ctx) {
    json out = json::array();
    for (const auto& grid : ctx.cfg.grids) {
        for (int level : grid.levels) {
            Trajectory traj = integrateGridPoint(ctx, grid, level);
            const std::string tag = levelTag(grid.reg.label(), level);
            std::vector<double> times;
            for (double t : ctx.cfg.sampleTimes)
                if (t <= traj.tEnd()) times.push_back(t);
            writeTrajectoryCsv(ctx.path("traj_" + tag + ".csv"), traj, times);
            out.push_back({{"run", tag},
                           {"status", statusName(traj.status())},
                           {"tEnd", traj.tEnd()},
                           {"energyEnd", energy(traj.finalState())}});
        }
    }
    ctx.results["runs"] = out;
}

void runRgConvergence(RunContext& ctx) {
    const GridSpec& grid = ctx.cfg.grids.front();
    struct Point {
        int level = 0;
        Complex u1, u2;
        RunStatus status = RunStatus::Completed;
        json blowup;
    };
    std::vector<Point> points(grid.levels.size());
    parallelFor(grid.levels.size(), ctx.cfg.workers, [&](size_t i) {
        const int level = grid.levels[i];
        Trajectory traj = integrateGridPoint(ctx, grid, level);
        const std::string tag = levelTag(grid.reg.label(), level);
        std::vector<double> times;
        for (double t : ctx.cfg.sampleTimes)
            if (t <= traj.tEnd()) times.push_back(t);
        writeTrajectoryCsv(ctx.path("traj_" + tag + ".csv"), traj, times);
        Point p;
        p.level = level;
        p.status = traj.status();
        if (traj.status() == RunStatus::Completed) {
            const ShellState u = traj.finalState();
            p.u1 = u.at(1);
            p.u2 = u.shells() >= 2 ? u.at(2) : Complex(0, 0);
            const int shell = ctx.cfg.blowupShell > 0 ? ctx.cfg.blowupShell : level;
            if (shell >= 1 && shell <= traj.shells()) {
                const BlowupEstimate b = detectBlowup(traj, shell, ctx.cfg.blowupTheta);
                p.blowup = {{"detected", b.detected},
                            {"tb", b.tb},
                            {"lo", b.lo},
                            {"hi", b.hi},
                            {"peakDerivTime", b.peakDerivTime}};
            }
        }
        points[i] = std::move(p);
    });

    json levelOut = json::array();
    double prevU1 = 0, prevU2 = 0;
    bool havePrev = false;
    for (const Point& p : points) {
        json e = {{"level", p.level},
                  {"status", statusName(p.status)},
                  {"u1", {p.u1.real(), p.u1.imag()}},
                  {"u2", {p.u2.real(), p.u2.imag()}}};
        if (!p.blowup.is_null()) e["blowup"] = p.blowup;
        if (havePrev) {
            e["endpointShift"] = std::hypot(p.u1.real() - prevU1, p.u2.real() - prevU2);
        }
        prevU1 = p.u1.real();
        prevU2 = p.u2.real();
        havePrev = p.status == RunStatus::Completed;
        levelOut.push_back(std::move(e));
    }
    ctx.results["levels"] = levelOut;
}

RegTemplate referenceTemplate(const ExperimentConfig& cfg) {
    for (const auto& g : cfg.grids)
        if (g.reg.family == RegTemplate::Family::Canonical) return g.reg;
    RegTemplate t;
    t.family = RegTemplate::Family::Canonical;
    t.J = 1;
    return t;
}

void runEigenmode(RunContext& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const BoundarySpec bc = cfg.bc.resolve(ctx.model);

    int maxLevel = 0;
    for (const auto& g : cfg.grids)
        for (int level : g.levels) maxLevel = std::max(maxLevel, level);

    const RegTemplate refTpl = referenceTemplate(cfg);
    const RegularizationSpec refReg = refTpl.at(cfg.reference);
    const ShellState refIc = cfg.ic.resolve(ctx.model, impliedShells(refReg, 0));
    Trajectory ref =
        limitReference(ctx.model, refReg, refIc, bc, cfg.tStart, cfg.tEnd, cfg.solver, maxLevel);
    ctx.record("reference_N" + std::to_string(cfg.reference), ref);

    struct Job {
        const GridSpec* grid;
        int level;
    };
    std::vector<Job> jobs;
    for (const auto& g : cfg.grids)
        for (int level : g.levels) jobs.push_back({&g, level});

    std::vector<std::vector<DeviationSeries>> perJob(jobs.size());
    parallelFor(jobs.size(), cfg.workers, [&](size_t i) {
        const GridSpec& grid = *jobs[i].grid;
        const int level = jobs[i].level;
        Trajectory traj = integrateGridPoint(ctx, grid, level);
        if (traj.status() != RunStatus::Completed)
            throw EvaluationError("eigenmode run " + levelTag(grid.reg.label(), level) +
                                  " aborted at t=" + std::to_string(traj.tEnd()));
        std::map<int, Trajectory> one;
        one.emplace(level, std::move(traj));
        perJob[i] =
            deviations(one, ref, cfg.probeShells, cfg.sampleTimes, grid.reg.label());
        writeDeviationCsv(ctx.path("dev_" + levelTag(grid.reg.label(), level) + ".csv"),
                          perJob[i]);
    });

    std::vector<DeviationSeries> all;
    for (auto& v : perJob)
        for (auto& s : v) all.push_back(std::move(s));

    const std::string firstLabel = cfg.grids.front().reg.label();
    std::vector<DeviationSeries> firstSeries;
    for (const auto& s : all)
        if (s.label == firstLabel) firstSeries.push_back(s);

    const double floor = 100.0 * cfg.solver.atol;
    const EigenvalueEstimate est = estimateEigenvalue(firstSeries, floor);
    const PrefactorFit fit = fitPrefactors(all, cfg.rho, firstLabel, {});

    json prefactors;
    for (const auto& [label, c] : fit.c) prefactors[label] = c;
    json ratios;
    for (const auto& [lvl, r] : est.ratioByLevel) ratios[std::to_string(lvl)] = r;
    ctx.results = {{"rho", est.rho},
                   {"dispersion", est.dispersion},
                   {"probesUsed", est.probesUsed},
                   {"probesDiscarded", est.probesDiscarded},
                   {"ratioByLevel", ratios},
                   {"prefactors", prefactors},
                   {"reference", cfg.reference},
                   {"rhoUsedForPrefactors", cfg.rho}};
}

void runRgVerify(RunContext& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const BoundarySpec bc = cfg.bc.resolve(ctx.model);
    json out = json::array();
    for (const auto& grid : cfg.grids) {
        if (grid.reg.family != RegTemplate::Family::Canonical)
            throw ConfigError("rg-verify grids must be canonical");
        for (int N : grid.levels) {
            const int J = grid.reg.J;
            const ShellState icTop = cfg.ic.resolve(ctx.model, N + 1 + J);
            const double disc =
                verifyRgRelation(ctx.model, N, J, icTop, bc, cfg.tEnd, cfg.solver,
                                 cfg.sampleTimes);
            out.push_back({{"N", N}, {"J", J}, {"discrepancy", disc}});
            RunRecord r;
            r.id = "rg-verify_N" + std::to_string(N) + "_J" + std::to_string(J);
            r.status = RunStatus::Completed;
            r.tEnd = cfg.tEnd;
            ctx.runs.push_back(r);
        }
    }
    ctx.results["cases"] = out;
}

void runViscousBridge(RunContext& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const BoundarySpec bc = cfg.bc.resolve(ctx.model);
    const int shells = cfg.grids.empty() || cfg.grids.front().shells == 0
                           ? 0
                           : cfg.grids.front().shells;
    json out = json::array();
    std::vector<BridgeSeries> series(cfg.nuList.size());
    parallelFor(cfg.nuList.size(), cfg.workers, [&](size_t i) {
        const double nu = cfg.nuList[i];
        const RegularizationSpec reg = Viscous{nu};
        const int m = impliedShells(reg, shells);
        const ShellState ic = cfg.ic.resolve(ctx.model, m);
        Trajectory traj = integrate(ctx.model, reg, bc, ic, cfg.tStart, cfg.tEnd, cfg.solver);
        ctx.record("viscous_nu" + std::to_string(i), traj);
        if (traj.status() != RunStatus::Completed)
            throw EvaluationError("viscous bridge run aborted");
        series[i] = viscousBridge(traj, nu, cfg.sampleTimes);
        CsvFile csv(ctx.path("bridge_" + std::to_string(i) + ".csv"),
                    {"t", "Nt", "beta", "found"});
        for (size_t k = 0; k < series[i].times.size(); ++k)
            csv.row({formatG17(series[i].times[k]), std::to_string(series[i].levels[k]),
                     formatG17(series[i].betas[k]), series[i].found[k] ? "1" : "0"});
    });
    // Monotonicity of N_t under decreasing viscosity, at every sample time.
    int violations = 0;
    for (size_t i = 0; i + 1 < series.size(); ++i) {
        if (!(cfg.nuList[i + 1] < cfg.nuList[i])) continue;
        for (size_t k = 0; k < cfg.sampleTimes.size(); ++k)
            if (series[i + 1].levels[k] < series[i].levels[k]) ++violations;
    }
    for (size_t i = 0; i < series.size(); ++i)
        out.push_back({{"nu", cfg.nuList[i]},
                       {"maxLevel",
                        *std::max_element(series[i].levels.begin(), series[i].levels.end())}});
    ctx.results = {{"series", out}, {"monotonicityViolations", violations}};
}

void runViscousRescaled(RunContext& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const GridSpec& grid = cfg.grids.front();
    if (grid.reg.family != RegTemplate::Family::Viscous)
        throw ConfigError("viscous-rescaled requires a viscous grid");
    const BoundarySpec bc = cfg.bc.resolve(ctx.model);
    const int shell = cfg.probeShells.front();

    int maxLevel = 0;
    for (int level : grid.levels) maxLevel = std::max(maxLevel, level);
    const RegularizationSpec refReg = Viscous{viscosityForLevel(cfg.reference)};
    const ShellState refIc = cfg.ic.resolve(ctx.model, impliedShells(refReg, 0));
    Trajectory ref =
        limitReference(ctx.model, refReg, refIc, bc, cfg.tStart, cfg.tEnd, cfg.solver, maxLevel);
    ctx.record("reference_N" + std::to_string(cfg.reference), ref);

    std::vector<RescaledSeries> series(grid.levels.size());
    parallelFor(grid.levels.size(), cfg.workers, [&](size_t i) {
        const int level = grid.levels[i];
        Trajectory traj = integrateGridPoint(ctx, grid, level);
        if (traj.status() != RunStatus::Completed)
            throw EvaluationError("viscous-rescaled run aborted");
        std::map<int, Trajectory> one;
        one.emplace(level, std::move(traj));
        series[i] = viscousRescaledDeviations(one, ref, shell, cfg.sampleTimes, cfg.rho).front();
        CsvFile csv(ctx.path("rescaled_N" + std::to_string(level) + ".csv"), {"t", "re", "im"});
        for (size_t k = 0; k < series[i].times.size(); ++k)
            csv.row({formatG17(series[i].times[k]), formatG17(series[i].values[k].real()),
                     formatG17(series[i].values[k].imag())});
    });

    json dist = json::array();
    for (size_t i = 0; i + 1 < series.size(); ++i) {
        double sup = 0.0;
        for (size_t k = 0; k < cfg.sampleTimes.size(); ++k)
            sup = std::max(sup, std::abs(series[i + 1].values[k] - series[i].values[k]));
        dist.push_back({{"fromLevel", series[i].level},
                        {"toLevel", series[i + 1].level},
                        {"supDistance", sup}});
    }
    ctx.results = {{"shell", shell}, {"consecutiveDistances", dist},
                   {"reference", cfg.reference}};
}

void runAttractorProbe(RunContext& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const GridSpec& grid = cfg.grids.front();
    const BoundarySpec bc = cfg.bc.resolve(ctx.model);
    if (cfg.ic.kind != IcSpec::Kind::Builtin)
        throw ConfigError("attractor-probe uses builtin initial conditions");
    AttractorCloud cloud =
        attractorProbe(ctx.model, grid.levels, cfg.samples, cfg.coeffLo, cfg.coeffHi, grid.reg.J,
                       bc, cfg.ic.builtin, cfg.tStar, cfg.seed, cfg.solver, cfg.workers);

    std::vector<std::string> header = {"level", "sample", "status"};
    for (int j = 0; j < grid.reg.J; ++j) header.push_back("c" + std::to_string(j + 1));
    for (const char* h : {"u1_re", "u1_im", "u2_re", "u2_im"}) header.emplace_back(h);
    CsvFile csv(ctx.path("cloud.csv"), header);
    CsvFile states(ctx.path("cloud_states.csv"), {"level", "sample", "n", "re", "im"});
    int aborted = 0;
    for (const CloudRecord& rec : cloud.records) {
        std::vector<std::string> cells = {std::to_string(rec.level), std::to_string(rec.sample),
                                          statusName(rec.status)};
        for (double c : rec.coeffs) cells.push_back(formatG17(c));
        for (double v : {rec.u1.real(), rec.u1.imag(), rec.u2.real(), rec.u2.imag()})
            cells.push_back(formatG17(v));
        csv.row(cells);
        if (rec.status != RunStatus::Completed) {
            ++aborted;
            continue;
        }
        for (size_t n = 0; n < rec.endpoint.size(); ++n)
            states.row({std::to_string(rec.level), std::to_string(rec.sample),
                        std::to_string(n + 1), formatG17(rec.endpoint[n].real()),
                        formatG17(rec.endpoint[n].imag())});
    }
    ctx.results = {{"records", cloud.records.size()},
                   {"aborted", aborted},
                   {"levels", grid.levels},
                   {"samples", cfg.samples}};
    RunRecord r;
    r.id = "attractor-probe";
    r.status = RunStatus::Completed;
    r.tEnd = cfg.tStar;
    ctx.runs.push_back(r);
}

void runChaosGrowth(RunContext& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const GridSpec& grid = cfg.grids.front();
    const BoundarySpec bc = cfg.bc.resolve(ctx.model);
    if (cfg.ic.kind != IcSpec::Kind::Builtin)
        throw ConfigError("chaos-growth uses builtin initial conditions");
    const std::vector<ChaosPoint> points =
        chaosGrowth(ctx.model, grid.reg.J, cfg.eps, grid.levels, bc, cfg.ic.builtin, cfg.tStar,
                    cfg.solver, cfg.workers);

    CsvFile csv(ctx.path("chaos.csv"),
                {"level", "separation", "toleranceLimited", "statusBase", "statusPerturbed"});
    std::vector<int> levels;
    std::vector<double> seps;
    for (const ChaosPoint& p : points) {
        csv.row({std::to_string(p.level), formatG17(p.separation), p.toleranceLimited ? "1" : "0",
                 statusName(p.statusBase), statusName(p.statusPerturbed)});
        if (p.statusBase == RunStatus::Completed && p.statusPerturbed == RunStatus::Completed &&
            !p.toleranceLimited) {
            levels.push_back(p.level);
            seps.push_back(p.separation);
        }
    }
    json fitJson;
    if (levels.size() >= 3) {
        try {
            const FitResult fit = fitDoubleExponential(levels, seps, cfg.eps);
            fitJson = {{"slope", fit.param0},
                       {"intercept", fit.param1},
                       {"r2", fit.r2},
                       {"count", fit.count},
                       {"discarded", fit.discarded}};
        } catch (const EvaluationError& e) {
            fitJson = {{"error", e.what()}};
        }
    }
    ctx.results = {{"eps", cfg.eps}, {"tStar", cfg.tStar}, {"fit", fitJson}};
    RunRecord r;
    r.id = "chaos-growth";
    r.status = RunStatus::Completed;
    r.tEnd = cfg.tStar;
    ctx.runs.push_back(r);
}

void runStationaryCheck(RunContext& ctx) {
    const ExperimentConfig& cfg = ctx.cfg;
    const BoundarySpec bc = cfg.bc.resolve(ctx.model);
    const GridSpec& grid = cfg.grids.front();
    json out = json::array();
    double worst = 0.0;
    for (int N : grid.levels) {
        const RegularizationSpec reg = CanonicalCutoff{N, 1, {}, 0.0};
        const ShellState ic = cfg.ic.resolve(ctx.model, N + 1);
        Trajectory traj = integrate(ctx.model, reg, bc, ic, cfg.tStart, cfg.tEnd, cfg.solver);
        ctx.record("stationary_N" + std::to_string(N), traj);
        if (traj.status() != RunStatus::Completed)
            throw EvaluationError("stationary-check run aborted");
        const ShellState u = traj.finalState();
        double err = 0.0;
        for (int n = 1; n <= N + 1; ++n)
            err = std::max(err, std::abs(u.at(n).real() - stationaryDyadicExact(N, n)));
        worst = std::max(worst, err);
        out.push_back({{"N", N}, {"maxAbsError", err}});
    }
    ctx.results = {{"perLevel", out}, {"maxAbsError", worst}};
}

} // namespace

ExperimentResult runExperiment(const ExperimentConfig& cfg, const std::string& outDir) {
    cfg.validate();
    const auto tic = std::chrono::steady_clock::now();

    RunContext ctx(cfg, outDir);
    fs::create_directories(ctx.out);
    {
        std::ofstream echo(ctx.path("config.json"));
        echo << serializeConfig(cfg);
    }

    bool failed = false;
    std::string failure;
    try {
        switch (cfg.kind) {
            case ExperimentKind::SingleRun: runSingleRun(ctx); break;
            case ExperimentKind::RgConvergence: runRgConvergence(ctx); break;
            case ExperimentKind::Eigenmode: runEigenmode(ctx); break;
            case ExperimentKind::RgVerify: runRgVerify(ctx); break;
            case ExperimentKind::ViscousBridge: runViscousBridge(ctx); break;
            case ExperimentKind::ViscousRescaled: runViscousRescaled(ctx); break;
            case ExperimentKind::AttractorProbe: runAttractorProbe(ctx); break;
            case ExperimentKind::ChaosGrowth: runChaosGrowth(ctx); break;
            case ExperimentKind::StationaryCheck: runStationaryCheck(ctx); break;
        }
    } catch (const ConfigError&) {
        throw; // configuration problems propagate to the caller
    } catch (const std::exception& e) {
        failed = true;
        failure = e.what();
    }

    // Required sub-runs that aborted mark the experiment as failed.
    for (const RunRecord& r : ctx.runs)
        if (r.required && r.status != RunStatus::Completed) failed = true;

    // Worker scheduling must not leak into the outputs.
    std::sort(ctx.runs.begin(), ctx.runs.end(),
              [](const RunRecord& a, const RunRecord& b) { return a.id < b.id; });

    const double wallSec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - tic).count();

    json manifest;
    manifest["version"] = kVersion;
    manifest["kind"] = kindName(cfg.kind);
    manifest["seed"] = cfg.seed;
    manifest["wallSec"] = wallSec;
    manifest["success"] = !failed;
    if (!failure.empty()) manifest["failure"] = failure;
    manifest["config"] = json::parse(serializeConfig(cfg));
    json runsJson = json::array();
    for (const RunRecord& r : ctx.runs)
        runsJson.push_back({{"id", r.id},
                            {"status", statusName(r.status)},
                            {"tEnd", r.tEnd},
                            {"accepted", r.accepted},
                            {"rejected", r.rejected},
                            {"rhsEvals", r.rhsEvals},
                            {"required", r.required}});
    manifest["runs"] = runsJson;
    manifest["results"] = ctx.results;
    {
        std::ofstream mf(ctx.path("manifest.json"));
        mf << manifest.dump(2) << "\n";
    }

    ExperimentResult result;
    result.success = !failed;
    result.outDir = outDir;
    result.runs = std::move(ctx.runs);
    result.resultsJson = ctx.results.dump(2);
    return result;
}

} // namespace shellrg
