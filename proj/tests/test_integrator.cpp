#include <cmath>
#include <doctest.h>

#include "shellrg/initial_conditions.hpp"
#include "shellrg/trajectory.hpp"

using namespace shellrg;

namespace {

SolverConfig explicitCfg(double rtol = 1e-10, double atol = 1e-12) {
    SolverConfig cfg;
    cfg.method = Method::ExplicitAdaptive;
    cfg.rtol = rtol;
    cfg.atol = atol;
    return cfg;
}

SolverConfig stiffCfg(double rtol = 1e-10, double atol = 1e-12) {
    SolverConfig cfg;
    cfg.method = Method::StiffAdaptive;
    cfg.rtol = rtol;
    cfg.atol = atol;
    return cfg;
}

SolverConfig fixedStep(Method m, double h) {
    SolverConfig cfg;
    cfg.method = m;
    cfg.rtol = 1e6; // every step accepted; h pinned by initialStep+maxStep
    cfg.atol = 1e6;
    cfg.initialStep = h;
    cfg.maxStep = h;
    return cfg;
}

ShellState fill(int shells, double v) {
    return ShellState(ScalarKind::Real, std::vector<Complex>(static_cast<size_t>(shells),
                                                             Complex(v, 0.0)));
}

double maxAbsDiff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("zero data + zero boundary stays at the origin") {
    for (Method m : {Method::ExplicitAdaptive, Method::StiffAdaptive}) {
        SolverConfig cfg = m == Method::ExplicitAdaptive ? explicitCfg() : stiffCfg();
        cfg.method = m;
        const Trajectory traj = integrate(dyadicModel(), CanonicalCutoff{3, 1, {}, 0.0},
                                          zeroBc(1), fill(4, 0.0), 0.0, 1.0, cfg);
        CHECK(traj.status() == RunStatus::Completed);
        for (double v : traj.finalPacked()) CHECK(v == 0.0);
        const ShellState mid = traj.sample(0.37);
        for (const Complex& u : mid.values) CHECK(std::abs(u) == 0.0);
    }
}

TEST_CASE("one-shell model integrates to the tanh closed form") {
    // (N,J) = (0,1), b0 = 1: du/dt = 2 (1 - u^2), u(0) = 0.3.
    const BoundarySpec bc = constBc({Complex(1, 0)});
    auto closed = [](double t) { return std::tanh(2.0 * t + std::atanh(0.3)); };
    for (Method m : {Method::ExplicitAdaptive, Method::StiffAdaptive}) {
        SolverConfig cfg = m == Method::ExplicitAdaptive ? explicitCfg() : stiffCfg();
        const Trajectory traj = integrate(dyadicModel(), CanonicalCutoff{0, 1, {}, 0.0}, bc,
                                          fill(1, 0.3), 0.0, 2.0, cfg);
        REQUIRE(traj.status() == RunStatus::Completed);
        CHECK(std::abs(traj.finalPacked()[0] - closed(2.0)) < 1e-9);
        // monotone approach toward the stationary value 1
        double prev = 0.3;
        for (double t = 0.1; t <= 2.0; t += 0.1) {
            const double v = traj.sampleShell(t, 1).real();
            CHECK(v >= prev - 1e-12);
            CHECK(v <= 1.0 + 1e-9);
            prev = v;
        }
    }
}

TEST_CASE("fixed-step convergence order of both methods") {
    // Non-autonomous three-shell problem; reference at very tight tolerance.
    const BoundarySpec bc = dyadicDefaultBc();
    const RegularizationSpec reg = CanonicalCutoff{2, 1, {}, 0.0};
    const ShellState ic = fill(3, 0.4);
    const Trajectory ref =
        integrate(dyadicModel(), reg, bc, ic, 0.0, 1.0, explicitCfg(1e-13, 1e-15));
    REQUIRE(ref.status() == RunStatus::Completed);

    auto endpointError = [&](Method m, double h) {
        const Trajectory t = integrate(dyadicModel(), reg, bc, ic, 0.0, 1.0, fixedStep(m, h));
        REQUIRE(t.status() == RunStatus::Completed);
        return maxAbsDiff(t.finalPacked(), ref.finalPacked());
    };

    // order 5: halving h shrinks the error ~32x
    const double e1 = endpointError(Method::ExplicitAdaptive, 0.05);
    const double e2 = endpointError(Method::ExplicitAdaptive, 0.025);
    CHECK(e1 / e2 > 16.0);
    CHECK(e1 / e2 < 90.0);

    // order 4: halving h shrinks the error ~16x
    const double s1 = endpointError(Method::StiffAdaptive, 0.02);
    const double s2 = endpointError(Method::StiffAdaptive, 0.01);
    CHECK(s1 / s2 > 8.0);
    CHECK(s1 / s2 < 40.0);
}

TEST_CASE("dense output: stored times reproduce stored states exactly") {
    const Trajectory traj = integrate(dyadicModel(), CanonicalCutoff{4, 1, {}, 0.0},
                                      dyadicDefaultBc(), builtinIc(BuiltinIc::IC2, dyadicModel(), 5),
                                      0.0, 1.0, explicitCfg());
    REQUIRE(traj.status() == RunStatus::Completed);
    REQUIRE(traj.steps() >= 3);
    const std::vector<double>& grid = traj.timeGrid();
    std::vector<double> out;
    for (size_t k = 0; k < grid.size(); ++k) {
        traj.samplePacked(grid[k], out);
        for (size_t i = 0; i < out.size(); ++i) CHECK(out[i] == traj.statePacked(k)[i]);
    }
    // initial condition is reproduced exactly
    traj.samplePacked(0.0, out);
    CHECK(out[0] == builtinIc(BuiltinIc::IC2, dyadicModel(), 5).packed()[0]);
    CHECK_THROWS_AS((void)traj.sample(1.5), EvaluationError);
    CHECK_THROWS_AS((void)traj.sample(-0.2), EvaluationError);
}

TEST_CASE("dense output derivative agrees with central differences inside a step") {
    const Trajectory traj = integrate(dyadicModel(), CanonicalCutoff{4, 1, {}, 0.0},
                                      dyadicDefaultBc(), builtinIc(BuiltinIc::IC2, dyadicModel(), 5),
                                      0.0, 1.0, explicitCfg(1e-8, 1e-10));
    REQUIRE(traj.steps() >= 4);
    const std::vector<double>& grid = traj.timeGrid();
    const size_t k = traj.timeGrid().size() / 2;
    const double t = 0.5 * (grid[k] + grid[k + 1]);
    const double w = grid[k + 1] - grid[k];
    std::vector<double> dp, dm, dd;
    traj.sampleDerivativePacked(t, dd);
    auto fdError = [&](double h) {
        traj.samplePacked(t + h, dp);
        traj.samplePacked(t - h, dm);
        double err = 0.0;
        for (size_t i = 0; i < dd.size(); ++i)
            err = std::max(err, std::abs((dp[i] - dm[i]) / (2.0 * h) - dd[i]));
        return err;
    };
    const double e1 = fdError(w / 8.0);
    const double e2 = fdError(w / 16.0);
    CHECK(e2 <= 0.26 * e1 + 1e-12); // second-order shrinkage of the FD error
}

TEST_CASE("semigroup: restart-and-continue matches the one-shot run") {
    const ModelSpec m = dyadicModel();
    const RegularizationSpec reg = CanonicalCutoff{5, 1, {}, 0.0};
    const BoundarySpec bc = dyadicDefaultBc();
    const ShellState ic = builtinIc(BuiltinIc::IC2, m, 6);
    const SolverConfig cfg = explicitCfg();
    const Trajectory full = integrate(m, reg, bc, ic, 0.0, 2.0, cfg);
    REQUIRE(full.status() == RunStatus::Completed);

    for (double split : {0.31, 0.8, 1.55}) {
        const Trajectory first = integrate(m, reg, bc, ic, 0.0, split, cfg);
        REQUIRE(first.status() == RunStatus::Completed);
        const Trajectory second = integrate(m, reg, bc.timeShifted(split), first.finalState(),
                                            0.0, 2.0 - split, cfg);
        REQUIRE(second.status() == RunStatus::Completed);
        double worst = 0.0;
        const std::vector<double>& a = second.finalPacked();
        const std::vector<double>& b = full.finalPacked();
        for (size_t i = 0; i < a.size(); ++i) {
            const double sk = cfg.atol + cfg.rtol * std::max(std::abs(a[i]), std::abs(b[i]));
            worst = std::max(worst, std::abs(a[i] - b[i]) / sk);
        }
        CHECK(worst < 50.0);
    }
}

TEST_CASE("tolerance tightening changes the endpoint by less than 10x the loose tolerance") {
    const ModelSpec m = dyadicModel();
    const RegularizationSpec reg = CanonicalCutoff{10, 1, {}, 0.0};
    const BoundarySpec bc = dyadicDefaultBc();
    const ShellState ic = builtinIc(BuiltinIc::IC2, m, 11);
    const Trajectory loose = integrate(m, reg, bc, ic, 0.0, 2.0, explicitCfg(1e-8, 1e-10));
    const Trajectory tight = integrate(m, reg, bc, ic, 0.0, 2.0, explicitCfg(5e-9, 5e-11));
    REQUIRE(loose.status() == RunStatus::Completed);
    REQUIRE(tight.status() == RunStatus::Completed);
    double worst = 0.0;
    for (size_t i = 0; i < loose.finalPacked().size(); ++i) {
        const double scale = 1e-8 * std::abs(tight.finalPacked()[i]) + 1e-10;
        worst = std::max(worst,
                         std::abs(loose.finalPacked()[i] - tight.finalPacked()[i]) / scale);
    }
    CHECK(worst < 10.0);
}

TEST_CASE("stiff and explicit methods agree on a non-stiff run") {
    const ModelSpec m = dyadicModel();
    const RegularizationSpec reg = CanonicalCutoff{8, 1, {}, 0.0};
    const BoundarySpec bc = dyadicDefaultBc();
    const ShellState ic = builtinIc(BuiltinIc::IC2, m, 9);
    const Trajectory ex = integrate(m, reg, bc, ic, 0.0, 1.0, explicitCfg());
    const Trajectory st = integrate(m, reg, bc, ic, 0.0, 1.0, stiffCfg());
    REQUIRE(ex.status() == RunStatus::Completed);
    REQUIRE(st.status() == RunStatus::Completed);
    double worst = 0.0;
    for (size_t i = 0; i < ex.finalPacked().size(); ++i) {
        const double sk =
            100.0 * (1e-12 + 1e-10 * std::max(std::abs(ex.finalPacked()[i]),
                                              std::abs(st.finalPacked()[i])));
        worst = std::max(worst, std::abs(ex.finalPacked()[i] - st.finalPacked()[i]) / sk);
    }
    CHECK(worst < 1.0);
}

TEST_CASE("stiff method handles the strongly dissipative viscous run") {
    // nu = 2^{-40} with 40 shells: dissipative rates up to ~2^40 nu k_M^2.
    const ModelSpec m = dyadicModel();
    const RegularizationSpec reg = Viscous{std::exp2(-40.0)};
    const BoundarySpec bc = dyadicDefaultBc();
    const ShellState ic = builtinIc(BuiltinIc::IC2, m, 40);
    SolverConfig cfg = stiffCfg(1e-8, 1e-10);
    const Trajectory t1 = integrate(m, reg, bc, ic, 0.0, 1.0, cfg);
    const Trajectory t2 = integrate(m, reg, bc, ic, 0.0, 2.0, cfg);
    REQUIRE(t1.status() == RunStatus::Completed);
    REQUIRE(t2.status() == RunStatus::Completed);
    // steps grow at most linearly in the horizon
    CHECK(t2.stats().accepted <= 2.5 * t1.stats().accepted + 50);
}

TEST_CASE("blowup guard aborts with the last good time") {
    SolverConfig cfg = explicitCfg();
    cfg.blowupGuard = 0.5; // exceeded immediately by IC2 amplitudes
    const Trajectory traj = integrate(dyadicModel(), CanonicalCutoff{4, 1, {}, 0.0},
                                      dyadicDefaultBc(), builtinIc(BuiltinIc::IC2, dyadicModel(), 5),
                                      0.0, 1.0, cfg);
    CHECK(traj.status() == RunStatus::AbortedNonFinite);
    CHECK(traj.tEnd() < 1.0);
}

TEST_CASE("step budget aborts with status aborted-budget") {
    SolverConfig cfg = explicitCfg();
    cfg.maxSteps = 3;
    const Trajectory traj = integrate(dyadicModel(), CanonicalCutoff{6, 1, {}, 0.0},
                                      dyadicDefaultBc(), builtinIc(BuiltinIc::IC2, dyadicModel(), 7),
                                      0.0, 5.0, cfg);
    CHECK(traj.status() == RunStatus::AbortedBudget);
    CHECK(traj.tEnd() < 5.0);
}

TEST_CASE("inconsistent truncation is a contract violation") {
    CHECK_THROWS_AS((void)integrate(dyadicModel(), CanonicalCutoff{4, 1, {}, 0.0},
                                    dyadicDefaultBc(), fill(7, 0.1), 0.0, 1.0, explicitCfg()),
                    ContractViolation);
    CHECK_THROWS_AS((void)integrate(dyadicModel(), CanonicalCutoff{4, 1, {}, 0.0},
                                    dyadicDefaultBc(), fill(5, 0.1), 1.0, 1.0, explicitCfg()),
                    ContractViolation);
}

TEST_CASE("endpoint-only integration matches the dense run") {
    const ModelSpec m = dyadicModel();
    const RegularizationSpec reg = CanonicalCutoff{5, 2, {}, 0.0};
    const ShellState ic = builtinIc(BuiltinIc::IC1, m, 7);
    const SolverConfig cfg = explicitCfg();
    const Trajectory dense = integrate(m, reg, dyadicDefaultBc(), ic, 0.0, 1.2, cfg);
    const EndpointResult lean =
        integrateEndpoint(m, reg, dyadicDefaultBc(), ic, 0.0, 1.2, cfg);
    REQUIRE(lean.status == RunStatus::Completed);
    CHECK(maxAbsDiff(lean.packed, dense.finalPacked()) == 0.0);
}
