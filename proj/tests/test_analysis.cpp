#include <cmath>
#include <doctest.h>

#include "shellrg/analysis.hpp"
#include "shellrg/initial_conditions.hpp"
#include "shellrg/rhs.hpp"
#include "shellrg/rng.hpp"

using namespace shellrg;

TEST_CASE("stationary family: limit, boundary cases and cutoff") {
    CHECK(stationaryDyadicLimit(3) == doctest::Approx(0.5).epsilon(1e-15)); // 2^{-1}
    CHECK(stationaryDyadicExact(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(stationaryDyadicExact(5, 7) == 0.0); // n = N+2 is beyond the cutoff
    // large N converges to the limit state
    CHECK(stationaryDyadicExact(40, 3) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("stationary states satisfy rhs = 0 at machine precision for N = 0..12") {
    const ModelSpec m = dyadicModel();
    const BoundarySpec bc = constBc({Complex(1, 0)});
    for (int N = 0; N <= 12; ++N) {
        std::vector<Complex> u;
        for (int n = 1; n <= N + 1; ++n) u.emplace_back(stationaryDyadicExact(N, n), 0.0);
        const ShellState state(ScalarKind::Real, std::move(u));
        const std::vector<Complex> du = rhs(m, CanonicalCutoff{N, 1, {}, 0.0}, bc, 0.0, state);
        for (int n = 1; n <= N + 1; ++n) {
            // residual scaled by the stiffest rate k_n |u_n|
            const double scale = wavenumber(n) * std::abs(state.at(n)) + 1.0;
            CHECK(std::abs(du[static_cast<size_t>(n - 1)]) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("first-order expansion: remainder shrinks like rho^{2N}") {
    // u^{(N)}_n - u^inf_n - rho^N v_n = O(rho^{2N}) for fixed n.
    const int n = 2;
    auto remainder = [&](int N) {
        const double rhoN = std::pow(-0.5, N);
        return stationaryDyadicExact(N, n) - stationaryDyadicLimit(n) -
               rhoN * stationaryEigvec(N, n);
    };
    for (int N = 6; N <= 10; ++N) {
        const double r1 = std::abs(remainder(N));
        const double r2 = std::abs(remainder(N + 1));
        CHECK(r2 / r1 == doctest::Approx(0.25).epsilon(0.2)); // ratio ~ rho^2
    }
}

TEST_CASE("fit_geometric: exact alternating input") {
    std::vector<int> levels = {0, 1, 2, 3};
    std::vector<double> values = {1.0, -0.5, 0.25, -0.125};
    const FitResult fit = fitGeometric(levels, values);
    CHECK(fit.param0 == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(fit.param1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(fit.lowConfidence);
}

TEST_CASE("fit_geometric: positive-ratio input at the auxiliary decay rate") {
    // values 3 * (2^{-4/3})^N: the subleading rate of the eddy-viscosity family
    std::vector<int> levels;
    std::vector<double> values;
    const double rate = std::exp2(-4.0 / 3.0); // ~0.397
    for (int N = 2; N <= 9; ++N) {
        levels.push_back(N);
        values.push_back(3.0 * std::pow(rate, N));
    }
    const FitResult fit = fitGeometric(levels, values);
    CHECK(fit.param0 == doctest::Approx(rate).epsilon(1e-12));
    CHECK(fit.param1 == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("fit_geometric: 1% noise keeps the ratio within 2%") {
    std::vector<int> levels;
    std::vector<double> values;
    for (int N = 0; N < 12; ++N) {
        levels.push_back(N);
        const double noise = 1.0 + 0.01 * (2.0 * uniform01(rngKey(5150, static_cast<uint64_t>(N))) - 1.0);
        values.push_back(2.0 * std::pow(0.6, N) * noise);
    }
    const FitResult fit = fitGeometric(levels, values);
    CHECK(std::abs(fit.param0 - 0.6) < 0.02 * 0.6);
}

TEST_CASE("fit_geometric: sign-inconsistent input is flagged") {
    const FitResult fit = fitGeometric({0, 1, 2, 3}, {1.0, 0.5, -0.25, 0.125});
    CHECK(fit.lowConfidence);
}

TEST_CASE("fit_double_exponential: exact construction recovers the slope") {
    const double eps = 1e-9;
    std::vector<int> levels;
    std::vector<double> norms;
    for (int N = 4; N <= 12; ++N) {
        levels.push_back(N);
        norms.push_back(3.0 * eps * std::exp(std::exp(0.5 * N)));
    }
    const FitResult fit = fitDoubleExponential(levels, norms, eps);
    CHECK(fit.param0 == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("fit_double_exponential: a purely exponential input fits worse") {
    const double eps = 1e-9;
    std::vector<int> levels;
    std::vector<double> expNorms, dexpNorms;
    for (int N = 4; N <= 14; ++N) {
        levels.push_back(N);
        expNorms.push_back(1e-6 * std::exp(2.2 * N));
        dexpNorms.push_back(3.0 * eps * std::exp(std::exp(0.45 * N)));
    }
    const FitResult fe = fitDoubleExponential(levels, expNorms, eps);
    const FitResult fd = fitDoubleExponential(levels, dexpNorms, eps);
    CHECK(fd.r2 > fe.r2);     // log log of exp(aN) is concave, not linear
    CHECK(fe.r2 < 0.999);
    CHECK(fd.r2 > 0.999999);
}

TEST_CASE("fit_double_exponential: discards values at or below 3 eps") {
    const double eps = 1e-9;
    std::vector<int> levels = {1, 2, 3, 4, 5, 6};
    std::vector<double> norms = {1e-10, 2e-9, 1e-7, 1e-5, 1e-3, 1e-1};
    const FitResult fit = fitDoubleExponential(levels, norms, eps);
    CHECK(fit.discarded == 2);
    CHECK(fit.count == 4);
    CHECK_THROWS_AS((void)fitDoubleExponential({1, 2, 3}, {1e-12, 1e-12, 1e-12}, eps),
                    EvaluationError);
}

TEST_CASE("detect_blowup: decaying dissipative run reports no blowup") {
    // Zero boundary: amplitudes only decay, the profile sits at its maximum
    // from the start, and no onset exists.
    const ModelSpec m = dyadicModel();
    SolverConfig cfg;
    const Trajectory traj = integrate(m, Viscous{1e-2}, zeroBc(1),
                                      builtinIc(BuiltinIc::IC2, m, 8), 0.0, 2.0, cfg);
    REQUIRE(traj.status() == RunStatus::Completed);
    const BlowupEstimate est = detectBlowup(traj, 8, 0.5, 1e-2);
    CHECK_FALSE(est.detected);
}

TEST_CASE("detect_blowup: quiescent shell with no activity is undetected") {
    const ModelSpec m = dyadicModel();
    SolverConfig cfg;
    // IC1 has essentially zero deep-shell amplitudes; a short horizon ends
    // before the cascade arrives.
    const Trajectory traj = integrate(m, CanonicalCutoff{10, 1, {}, 0.0}, dyadicDefaultBc(),
                                      builtinIc(BuiltinIc::IC1, m, 11), 0.0, 0.2, cfg);
    REQUIRE(traj.status() == RunStatus::Completed);
    const BlowupEstimate est = detectBlowup(traj, 10, 0.5, 1e-3);
    CHECK_FALSE(est.detected);
}

TEST_CASE("detect_blowup is stable under horizon extension for a sharp onset") {
    const ModelSpec m = dyadicModel();
    SolverConfig cfg;
    cfg.method = Method::StiffAdaptive;
    cfg.rtol = 1e-9;
    cfg.atol = 1e-11;
    cfg.maxStep = 0.005;
    const BoundarySpec bc = dyadicDefaultBc();
    const ShellState ic = builtinIc(BuiltinIc::IC1, m, 19);
    const Trajectory shortRun = integrate(m, CanonicalCutoff{18, 1, {}, 0.0}, bc, ic, 0.0, 0.9,
                                          cfg);
    const Trajectory longRun = integrate(m, CanonicalCutoff{18, 1, {}, 0.0}, bc, ic, 0.0, 1.3,
                                         cfg);
    REQUIRE(shortRun.status() == RunStatus::Completed);
    REQUIRE(longRun.status() == RunStatus::Completed);
    const BlowupEstimate a = detectBlowup(shortRun, 18, 0.5, 1e-3);
    const BlowupEstimate b = detectBlowup(longRun, 18, 0.5, 1e-3);
    REQUIRE(a.detected);
    REQUIRE(b.detected);
    // the crossing sits on a near-vertical front: extending the horizon moves
    // the estimate by no more than the scan bracket
    CHECK(std::abs(a.tb - b.tb) <= 2e-3);
}
