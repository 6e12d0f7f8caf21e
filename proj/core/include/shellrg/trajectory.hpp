#pragma once

#include <vector>

#include "shellrg/boundary.hpp"
#include "shellrg/model.hpp"
#include "shellrg/regularization.hpp"
#include "shellrg/rhs.hpp"
#include "shellrg/solver.hpp"

namespace shellrg {

/// Dense-output solution of one regularized IBVP: accepted step times,
/// endpoint states, and per-step interpolation coefficients. The interpolant
///   P(th) = s0 + th*( (s1-s0) + (1-th)*( c3 + th*( c4 + (1-th)*c5 ) ) )
/// reproduces the stored endpoint states and is C^1 inside every step
/// (the explicit method is C^1 globally). Immutable after integration.
class Trajectory {
public:
    Trajectory(ModelSpec model, RegularizationSpec reg, BoundarySpec bc, SolverConfig cfg,
               int shells, double t0, std::vector<double> initialPacked);

    const ModelSpec& model() const { return model_; }
    const RegularizationSpec& reg() const { return reg_; }
    const BoundarySpec& bc() const { return bc_; }
    const SolverConfig& solverConfig() const { return cfg_; }
    ScalarKind kind() const { return model_.kind(); }
    int shells() const { return shells_; }

    RunStatus status() const { return status_; }
    const IntegrationStats& stats() const { return stats_; }

    double t0() const { return times_.front(); }
    /// Final (last good) time reached by the integration.
    double tEnd() const { return times_.back(); }
    std::int64_t steps() const { return static_cast<std::int64_t>(times_.size()) - 1; }

    const std::vector<double>& timeGrid() const { return times_; }
    const std::vector<double>& statePacked(size_t k) const { return states_[k]; }
    const std::vector<double>& finalPacked() const { return states_.back(); }
    ShellState finalState() const { return ShellState::unpacked(kind(), states_.back()); }

    void samplePacked(double t, std::vector<double>& out) const;
    void sampleDerivativePacked(double t, std::vector<double>& out) const;
    ShellState sample(double t) const;
    std::vector<Complex> sampleDerivative(double t) const;
    Complex sampleShell(double t, int n) const;
    Complex sampleShellDerivative(double t, int n) const;

    /// Used by the integrator while building the trajectory.
    void appendStep(double t1, std::vector<double> state, std::vector<double> c3,
                    std::vector<double> c4, std::vector<double> c5);
    void finish(RunStatus status, IntegrationStats stats);

private:
    ModelSpec model_;
    RegularizationSpec reg_;
    BoundarySpec bc_;
    SolverConfig cfg_;
    int shells_ = 0;
    RunStatus status_ = RunStatus::Completed;
    IntegrationStats stats_;

    std::vector<double> times_;               // K+1 accepted times
    std::vector<std::vector<double>> states_; // K+1 packed states
    struct Seg {
        std::vector<double> c3, c4, c5; // c5 empty for the stiff interpolant
    };
    std::vector<Seg> segs_;

    size_t segmentIndex(double t) const;
};

/// Integrates the regularized IBVP over [t0, t1], producing a dense-output
/// trajectory. On blowup-guard violation or a non-finite state the trajectory
/// ends at the last good time with status AbortedNonFinite; an exhausted step
/// budget yields AbortedBudget.
Trajectory integrate(const ModelSpec& model, const RegularizationSpec& reg,
                     const BoundarySpec& bc, const ShellState& ic, double t0, double t1,
                     const SolverConfig& cfg);

/// Lean endpoint-only integration for large sweeps that never sample the
/// interior (attractor probes, perturbation-growth pairs).
struct EndpointResult {
    RunStatus status = RunStatus::Completed;
    double t = 0.0;
    std::vector<double> packed;
    IntegrationStats stats;
};

EndpointResult integrateEndpoint(const ModelSpec& model, const RegularizationSpec& reg,
                                 const BoundarySpec& bc, const ShellState& ic, double t0,
                                 double t1, const SolverConfig& cfg);

/// Builds a C^1 Hermite table of shell `n` from a trajectory's dense output,
/// subdividing every accepted step; used when a computed u_1 becomes a
/// boundary function.
HermiteTable tabulateShell(const Trajectory& traj, int shell, int subdivisions = 4);

} // namespace shellrg
