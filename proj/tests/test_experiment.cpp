#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "shellrg/experiment.hpp"

using namespace shellrg;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path tmpDir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("shellrg_test_" + tag);
    fs::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("parse_config: minimal single-run gets defaults") {
    const ExperimentConfig cfg = parseConfig(R"({
        "kind": "single-run",
        "model": "dyadic",
        "grids": [{"reg": {"type": "canonical"}, "levels": [4]}],
        "tSpan": [0.0, 1.0]
    })");
    CHECK(cfg.solver.rtol == 1e-10);
    CHECK(cfg.solver.atol == 1e-12);
    CHECK(cfg.grids.front().reg.J == 1);
    CHECK(cfg.bc.builtin == "dyadic-default");
    CHECK(cfg.sampleTimes.size() == 201);
}

TEST_CASE("parse_config: unknown keys are rejected by name") {
    try {
        (void)parseConfig(R"({
            "kind": "single-run",
            "grids": [{"reg": {"type": "canonical"}, "levels": [4]}],
            "tSpan": [0, 1],
            "bogusKnob": 3
        })");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("bogusKnob") != std::string::npos);
    }
}

TEST_CASE("parse_config: chaos-growth without sabra is rejected") {
    CHECK_THROWS_AS((void)parseConfig(R"({
        "kind": "chaos-growth",
        "model": "dyadic",
        "grids": [{"reg": {"type": "canonical", "J": 2}, "levels": [4, 5, 6]}],
        "tSpan": [0, 1],
        "eps": 1e-9
    })"),
                    ConfigError);
}

TEST_CASE("parse_config: schema violations name the key") {
    try {
        (void)parseConfig(R"({"kind": "single-run", "grids": "nope", "tSpan": [0,1]})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("grids") != std::string::npos);
    }
}

TEST_CASE("config round-trip: parse(serialize(cfg)) == cfg") {
    for (const std::string& preset : presetNames()) {
        for (const auto& [name, cfg] : presetConfigs(preset)) {
            const std::string text = serializeConfig(cfg);
            const ExperimentConfig back = parseConfig(text);
            CHECK(serializeConfig(back) == text);
        }
    }
}

TEST_CASE("preset: fig1 expands to the three cutoff widths and both ICs") {
    const auto configs = presetConfigs("fig1-dyadic-convergence");
    REQUIRE(configs.size() == 2);
    const ExperimentConfig& cfg = configs.front().second;
    CHECK(cfg.kind == ExperimentKind::Eigenmode);
    REQUIRE(cfg.grids.size() == 3);
    CHECK(cfg.grids[0].reg.J == 1);
    CHECK(cfg.grids[1].reg.J == 2);
    CHECK(cfg.grids[2].reg.J == 3);
    CHECK(cfg.grids[0].levels.front() == 10);
    CHECK(cfg.grids[0].levels.back() == 20);
    CHECK(cfg.bc.builtin == "dyadic-default");
    CHECK_THROWS_AS((void)presetConfigs("fig9000"), ConfigError);
}

TEST_CASE("stationary-check experiment runs and reports small residuals") {
    ExperimentConfig cfg = presetConfigs("stationary-check").front().second;
    // shrink to keep the unit suite fast; the acceptance suite runs N = 0..10
    cfg.grids.front().levels = {0, 1, 2, 3};
    cfg.tEnd = 40.0;
    cfg.sampleTimes = {40.0};
    const fs::path out = tmpDir("stationary");
    const ExperimentResult res = runExperiment(cfg, out.string());
    CHECK(res.success);
    CHECK(fs::exists(out / "manifest.json"));
    CHECK(fs::exists(out / "config.json"));
    CHECK(res.resultsJson.find("maxAbsError") != std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("run_experiment: deterministic CSV output under re-runs and worker counts") {
    ExperimentConfig cfg = parseConfig(R"({
        "kind": "attractor-probe",
        "model": "gledzer",
        "grids": [{"reg": {"type": "canonical", "J": 3}, "levels": [7, 8]}],
        "tSpan": [0.0, 0.25],
        "sampleTimes": [0.25],
        "tStar": 0.25,
        "samples": 6,
        "coeffRange": [0.0, 3.0],
        "seed": 77,
        "solver": {"method": "stiff-adaptive", "rtol": 1e-8, "atol": 1e-10}
    })");

    const fs::path outA = tmpDir("probeA"), outB = tmpDir("probeB");
    cfg.workers = 1;
    REQUIRE(runExperiment(cfg, outA.string()).success);
    cfg.workers = 4;
    REQUIRE(runExperiment(cfg, outB.string()).success);
    CHECK(slurp(outA / "cloud.csv") == slurp(outB / "cloud.csv"));
    CHECK(slurp(outA / "cloud_states.csv") == slurp(outB / "cloud_states.csv"));
    // re-run in place with the same worker count: byte-identical CSVs
    const fs::path outC = tmpDir("probeC");
    REQUIRE(runExperiment(cfg, outC.string()).success);
    CHECK(slurp(outB / "cloud.csv") == slurp(outC / "cloud.csv"));
    CHECK(slurp(outB / "config.json") == slurp(outC / "config.json"));
    fs::remove_all(outA);
    fs::remove_all(outB);
    fs::remove_all(outC);
}

TEST_CASE("run_experiment: aborted grid points are isolated and flagged") {
    // A blowup guard low enough to abort every draw: the runs must be
    // recorded as aborted, excluded from the cloud, and the experiment still
    // completes (probe draws are diagnostics, not required runs).
    ExperimentConfig cfg = parseConfig(R"({
        "kind": "attractor-probe",
        "model": "gledzer",
        "grids": [{"reg": {"type": "canonical", "J": 3}, "levels": [6]}],
        "tSpan": [0.0, 0.2],
        "sampleTimes": [0.2],
        "tStar": 0.2,
        "samples": 3,
        "ic": "IC2",
        "seed": 5,
        "solver": {"method": "stiff-adaptive", "rtol": 1e-8, "atol": 1e-10,
                    "blowupGuard": 0.8}
    })");
    const fs::path out = tmpDir("probeAbort");
    const ExperimentResult res = runExperiment(cfg, out.string());
    CHECK(res.success); // probe aborts are recorded, not fatal
    const std::string cloud = slurp(out / "cloud.csv");
    CHECK(cloud.find("aborted-nonfinite") != std::string::npos);
    const std::string manifest = slurp(out / "manifest.json");
    CHECK(manifest.find("\"aborted\": 3") != std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("run_experiment: single-run trajectory CSV has the pinned layout") {
    ExperimentConfig cfg = parseConfig(R"({
        "kind": "single-run",
        "model": "dyadic",
        "grids": [{"reg": {"type": "canonical", "J": 1}, "levels": [3]}],
        "tSpan": [0.0, 0.5],
        "sampleTimes": {"from": 0.0, "to": 0.5, "count": 6},
        "ic": "IC2"
    })");
    const fs::path out = tmpDir("single");
    REQUIRE(runExperiment(cfg, out.string()).success);
    const std::string csv = slurp(out / "traj_J-1_N3.csv");
    CHECK(csv.rfind("t,n,re,im\n", 0) == 0);
    // 6 times x 4 shells + header
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 25);
    fs::remove_all(out);
}
