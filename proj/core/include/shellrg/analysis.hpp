#pragma once

#include <vector>

#include "shellrg/trajectory.hpp"

namespace shellrg {

// ---------------------------------------------------------------------------
// Exact stationary family of the dyadic (N,1) model with b_0 = 1
// ---------------------------------------------------------------------------

/// Stationary state of the dyadic cutoff model (J = 1, b_0 = 1):
///   u_n = 2^{ -n/3 - (1/9) rho^N ((-2)^n - 1) },  1 <= n <= N+1, rho = -1/2,
/// and zero beyond the cutoff.
double stationaryDyadicExact(int N, int n);

/// Limit state u_n = 2^{-n/3} (N -> infinity).
double stationaryDyadicLimit(int n);

/// First-order coefficient of the expansion u^{(N)} = u^inf + rho^N v:
///   v_n = -(1/9) ((-2)^n - 1) 2^{-n/3} ln 2 for n <= N+1, zero beyond.
double stationaryEigvec(int N, int n);

// ---------------------------------------------------------------------------
// Blowup-time detection
// ---------------------------------------------------------------------------

struct BlowupEstimate {
    bool detected = false;
    double tb = 0.0;            // refined threshold crossing
    double lo = 0.0, hi = 0.0;  // bracketing interval from the scan grid
    double peakDerivTime = 0.0; // argmax of d|u_shell|/dt, cross-check
    int shell = 0;
    double threshold = 0.0;
};

/// Detects the blowup time as the first time |u_shell| crosses theta times
/// its maximum over the trajectory horizon; shell should be the deepest ideal
/// shell (n = N for the cutoff family). Scans on a dt grid, then bisects the
/// dense output. Two guards qualify the crossing as a genuine onset: the peak
/// must register against the shell-1 amplitude (quiescent shells report
/// nothing), and the pre-crossing history must sit well below the threshold
/// (a decaying run is at its maximum from the start and reports nothing).
BlowupEstimate detectBlowup(const Trajectory& traj, int shell, double theta = 0.5,
                            double scanDt = 1e-3);

// ---------------------------------------------------------------------------
// Fits
// ---------------------------------------------------------------------------

struct FitResult {
    double param0 = 0.0; // ratio (geometric) or slope (double exponential)
    double param1 = 0.0; // prefactor resp. intercept
    double residualNorm = 0.0;
    double r2 = 0.0;
    int count = 0;
    bool lowConfidence = false; // sign-inconsistent geometric input
    int discarded = 0;          // double-exponential: norms below 3 eps
};

/// Least squares of log|value| against the level for |ratio| and prefactor;
/// the sign of the ratio comes from consecutive products. Exact geometric
/// input reproduces ratio/prefactor to machine precision with R^2 = 1.
FitResult fitGeometric(const std::vector<int>& levels, const std::vector<double>& values);

/// Linear regression of log log(norm / (3 eps)) against the level. Norms not
/// exceeding 3 eps are discarded (reported in `discarded`); fewer than three
/// usable points is an error.
FitResult fitDoubleExponential(const std::vector<int>& levels, const std::vector<double>& norms,
                               double eps);

} // namespace shellrg
