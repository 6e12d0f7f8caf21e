#include "shellrg/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace shellrg {

Trajectory::Trajectory(ModelSpec model, RegularizationSpec reg, BoundarySpec bc, SolverConfig cfg,
                       int shells, double t0, std::vector<double> initialPacked)
    : model_(model), reg_(std::move(reg)), bc_(std::move(bc)), cfg_(cfg), shells_(shells) {
    times_.push_back(t0);
    states_.push_back(std::move(initialPacked));
}

void Trajectory::appendStep(double t1, std::vector<double> state, std::vector<double> c3,
                            std::vector<double> c4, std::vector<double> c5) {
    if (!(t1 > times_.back())) throw ContractViolation("Trajectory::appendStep: non-increasing time");
    times_.push_back(t1);
    states_.push_back(std::move(state));
    segs_.push_back(Seg{std::move(c3), std::move(c4), std::move(c5)});
}

void Trajectory::finish(RunStatus status, IntegrationStats stats) {
    status_ = status;
    stats_ = stats;
}

size_t Trajectory::segmentIndex(double t) const {
    const double slack = 1e-9 * std::max(1.0, std::abs(times_.back()) + std::abs(times_.front()));
    if (t < times_.front() - slack || t > times_.back() + slack)
        throw EvaluationError("Trajectory sample at t=" + std::to_string(t) +
                              " outside range [" + std::to_string(times_.front()) + ", " +
                              std::to_string(times_.back()) + "]");
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    size_t k = static_cast<size_t>(std::distance(times_.begin(), it));
    if (k == 0) k = 1;
    if (k >= times_.size()) k = times_.size() - 1;
    return k - 1; // segment [times_[k-1], times_[k]]
}

void Trajectory::samplePacked(double t, std::vector<double>& out) const {
    // Stored times reproduce stored states exactly.
    auto hit = std::lower_bound(times_.begin(), times_.end(), t);
    if (hit != times_.end() && *hit == t) {
        out = states_[static_cast<size_t>(std::distance(times_.begin(), hit))];
        return;
    }
    if (segs_.empty()) throw EvaluationError("Trajectory sample: empty trajectory");
    const size_t k = segmentIndex(t);
    const Seg& s = segs_[k];
    const std::vector<double>& s0 = states_[k];
    const std::vector<double>& s1 = states_[k + 1];
    const double h = times_[k + 1] - times_[k];
    const double th = (t - times_[k]) / h;
    const double om = 1.0 - th;
    out.resize(s0.size());
    const bool quartic = !s.c5.empty();
    for (size_t i = 0; i < s0.size(); ++i) {
        const double c5 = quartic ? s.c5[i] : 0.0;
        out[i] = s0[i] + th * ((s1[i] - s0[i]) + om * (s.c3[i] + th * (s.c4[i] + om * c5)));
    }
}

void Trajectory::sampleDerivativePacked(double t, std::vector<double>& out) const {
    if (segs_.empty()) throw EvaluationError("Trajectory sample: empty trajectory");
    size_t k;
    if (t == times_.back()) {
        k = segs_.size() - 1;
    } else {
        k = segmentIndex(t);
    }
    const Seg& s = segs_[k];
    const std::vector<double>& s0 = states_[k];
    const std::vector<double>& s1 = states_[k + 1];
    const double h = times_[k + 1] - times_[k];
    const double th = (t - times_[k]) / h;
    const double om = 1.0 - th;
    out.resize(s0.size());
    const bool quartic = !s.c5.empty();
    // d/dth of the nested quartic, divided by h.
    for (size_t i = 0; i < s0.size(); ++i) {
        const double c5 = quartic ? s.c5[i] : 0.0;
        const double d = (s1[i] - s0[i]) + (1.0 - 2.0 * th) * s.c3[i] +
                         th * (2.0 - 3.0 * th) * s.c4[i] +
                         2.0 * th * om * (1.0 - 2.0 * th) * c5;
        out[i] = d / h;
    }
}

ShellState Trajectory::sample(double t) const {
    std::vector<double> p;
    samplePacked(t, p);
    return ShellState::unpacked(kind(), p);
}

std::vector<Complex> Trajectory::sampleDerivative(double t) const {
    std::vector<double> p;
    sampleDerivativePacked(t, p);
    return ShellState::unpacked(kind(), p).values;
}

Complex Trajectory::sampleShell(double t, int n) const {
    std::vector<double> p;
    samplePacked(t, p);
    if (n < 1 || n > shells_) throw ContractViolation("sampleShell: shell out of range");
    if (kind() == ScalarKind::Real) return {p[static_cast<size_t>(n - 1)], 0.0};
    return {p[static_cast<size_t>(2 * n - 2)], p[static_cast<size_t>(2 * n - 1)]};
}

Complex Trajectory::sampleShellDerivative(double t, int n) const {
    std::vector<double> p;
    sampleDerivativePacked(t, p);
    if (n < 1 || n > shells_) throw ContractViolation("sampleShellDerivative: shell out of range");
    if (kind() == ScalarKind::Real) return {p[static_cast<size_t>(n - 1)], 0.0};
    return {p[static_cast<size_t>(2 * n - 2)], p[static_cast<size_t>(2 * n - 1)]};
}

HermiteTable tabulateShell(const Trajectory& traj, int shell, int subdivisions) {
    if (subdivisions < 1) subdivisions = 1;
    HermiteTable tab;
    const std::vector<double>& grid = traj.timeGrid();
    for (size_t k = 0; k + 1 < grid.size(); ++k) {
        const double t0 = grid[k], t1 = grid[k + 1];
        for (int j = 0; j < subdivisions; ++j) {
            const double t = t0 + (t1 - t0) * j / subdivisions;
            tab.times.push_back(t);
            tab.values.push_back(traj.sampleShell(t, shell));
            tab.derivs.push_back(traj.sampleShellDerivative(t, shell));
        }
    }
    tab.times.push_back(grid.back());
    tab.values.push_back(traj.sampleShell(grid.back(), shell));
    tab.derivs.push_back(traj.sampleShellDerivative(grid.back(), shell));
    return tab;
}

} // namespace shellrg
