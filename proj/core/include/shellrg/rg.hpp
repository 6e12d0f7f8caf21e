#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "shellrg/initial_conditions.hpp"
#include "shellrg/trajectory.hpp"

namespace shellrg {

// ---------------------------------------------------------------------------
// Deviations from the limiting solution and the leading-eigenmode diagnostics
// ---------------------------------------------------------------------------

/// delta u_n(t) = u_n^{(level)}(t) - u_n^{ref}(t) on a shared time grid.
struct DeviationSeries {
    std::string label; // regularization family, e.g. "J=1" or "beta=1"
    int level = 0;     // N
    int shell = 0;
    std::vector<double> times;
    std::vector<Complex> values;
};

/// Pointwise deviations of each run from the reference via dense sampling.
/// All runs must share the model (and implicitly ic/bc); mismatched couplings
/// are rejected.
std::vector<DeviationSeries> deviations(const std::map<int, Trajectory>& runsByLevel,
                                        const Trajectory& ref, const std::vector<int>& shells,
                                        const std::vector<double>& sampleTimes,
                                        const std::string& label);

struct EigenvalueEstimate {
    double rho = 0.0;        // median of per-probe ratios delta^{(N+1)}/delta^{(N)}
    double dispersion = 0.0; // median absolute deviation of the ratios
    int probesUsed = 0;
    int probesDiscarded = 0;
    std::map<int, double> ratioByLevel; // median ratio keyed by the lower level
};

/// Estimates the leading RG eigenvalue from consecutive-level deviation
/// ratios. Probes where either deviation magnitude falls below discardFloor
/// are dropped; estimation fails (throws) if nothing survives.
EigenvalueEstimate estimateEigenvalue(const std::vector<DeviationSeries>& series,
                                      double discardFloor);

struct PrefactorFit {
    std::map<std::string, double> c; // per label, c[normLabel] ~ 1 by construction
    std::string normLabel;
    /// Shared eigenfunction shape from the normalization label, per probe
    /// shell, mean of delta/rho^N over that label's levels.
    std::vector<DeviationSeries> shape; // level = -1
};

/// Scalar least-squares fit of delta^{(N,label)}/rho^N against the shared
/// shape taken from normLabel (levels restricted to fitLevels when nonempty).
PrefactorFit fitPrefactors(const std::vector<DeviationSeries>& all, double rho,
                           const std::string& normLabel, const std::vector<int>& fitLevels);

/// Reference run standing in for the limiting flow map. The reference level
/// must strictly dominate every consumer level.
Trajectory limitReference(const ModelSpec& model, const RegularizationSpec& refReg,
                          const ShellState& ic, const BoundarySpec& bc, double t0, double t1,
                          const SolverConfig& cfg, int maxConsumerLevel);

int regularizationLevel(const RegularizationSpec& reg);

// ---------------------------------------------------------------------------
// RG relation (one-level shift consistency)
// ---------------------------------------------------------------------------

/// Integrates the (N+1,J) model, rebuilds the (N,J) problem from the shifted
/// data (a~_n = lambda a_{n+1}, boundary fed by lambda u_1(t) as a tabulated
/// C^1 record), integrates it, and returns the max over shells and sample
/// times of |u_{n+1}(t) - u~_n(t)/lambda|.
double verifyRgRelation(const ModelSpec& model, int N, int J, const ShellState& icTop,
                        const BoundarySpec& bc, double T, const SolverConfig& cfg,
                        const std::vector<double>& sampleTimes);

// ---------------------------------------------------------------------------
// Viscous bridge and rescaled viscous deviations
// ---------------------------------------------------------------------------

struct BridgeSeries {
    double nu = 0.0;
    std::vector<double> times;
    std::vector<int> levels;   // N_t
    std::vector<double> betas; // beta_t = nu k_{N_t} / |u_{N_t}(t)|
    std::vector<bool> found;   // false when no shell satisfies the bound
};

/// (N_t, beta_t) for a single state: N_t = max{N : nu k_N / |u_N| <= 1},
/// skipping zero shells; found = false when the set is empty.
struct BridgePoint {
    int level = 0;
    double beta = 0.0;
    bool found = false;
};
BridgePoint bridgeAt(const ShellState& state, double nu);

BridgeSeries viscousBridge(const Trajectory& viscousTraj, double nu,
                           const std::vector<double>& sampleTimes);

/// Rescaled deviations v^{(N)}(t) = (u^{(nu_N)}(t) - ref(t)) / rho^N on one
/// shell, for the viscosity sequence nu_N = k_N^{-4/3}.
struct RescaledSeries {
    int level = 0;
    std::vector<double> times;
    std::vector<Complex> values;
};
std::vector<RescaledSeries> viscousRescaledDeviations(const std::map<int, Trajectory>& runsByLevel,
                                                      const Trajectory& ref, int shell,
                                                      const std::vector<double>& sampleTimes,
                                                      double rho);

inline double viscosityForLevel(int level) { return std::exp2(-4.0 * level / 3.0); }

// ---------------------------------------------------------------------------
// Randomized attractor probe (quasiperiodic RG attractor)
// ---------------------------------------------------------------------------

struct CloudRecord {
    int level = 0;
    int sample = 0;
    std::uint64_t key = 0;      // RNG key of this draw
    std::vector<double> coeffs; // drawn dissipative coefficients
    Complex u1{0.0, 0.0}, u2{0.0, 0.0};
    std::vector<Complex> endpoint;
    RunStatus status = RunStatus::Completed;
};

struct AttractorCloud {
    std::vector<CloudRecord> records; // aborted records kept, flagged by status
};

AttractorCloud attractorProbe(const ModelSpec& model, const std::vector<int>& levels, int samples,
                              double coeffLo, double coeffHi, int J, const BoundarySpec& bc,
                              BuiltinIc ic, double tStar, std::uint64_t seed,
                              const SolverConfig& cfg, int workers);

// ---------------------------------------------------------------------------
// Perturbation growth in the RG dynamics (chaos diagnostic)
// ---------------------------------------------------------------------------

struct ChaosPoint {
    int level = 0;
    double separation = 0.0; // || Phi^{(N,J,eps)} - Phi^{(N,J)} || at tStar
    bool toleranceLimited = false;
    RunStatus statusBase = RunStatus::Completed;
    RunStatus statusPerturbed = RunStatus::Completed;
};

std::vector<ChaosPoint> chaosGrowth(const ModelSpec& model, int J, double eps,
                                    const std::vector<int>& levels, const BoundarySpec& bc,
                                    BuiltinIc ic, double tStar, const SolverConfig& cfg,
                                    int workers);

} // namespace shellrg
