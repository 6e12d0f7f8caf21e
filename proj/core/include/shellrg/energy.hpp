#pragma once

#include <functional>
#include <vector>

#include "shellrg/boundary.hpp"
#include "shellrg/model.hpp"
#include "shellrg/regularization.hpp"

namespace shellrg {

class Trajectory;

/// Closed-form value of Re sum_{n=1..M} k_n conj(u_n) f_n for a truncated
/// state (u_{M+1} = u_{M+2} = 0). The sum telescopes to boundary terms:
///   dyadic:  2 u_1 b_0^2
///   gledzer: (9/20) b_{-1} b_0 u_1 + 2 b_0 u_1 u_2 - 2 b_0 u_1^2
///   sabra:   -(1/2) Im(conj(u_1) b_0 b_{-1}) - 2 Im(conj(u_2) u_1 b_0)
double boundaryEnergyFlux(const ModelSpec& model, Complex bm1, Complex b0, Complex u1, Complex u2);

/// sum over dissipative shells of (1+eps) c_n k_n |u_n|^3 (canonical cutoff),
/// beta |u_N|/k_N sum k_n^2 |u_n|^2 (auxiliary), nu sum k_n^2 |u_n|^2 (viscous).
double dissipationRate(const RegularizationSpec& reg, const ShellState& state);

struct EnergyBalance {
    std::vector<double> times;
    std::vector<double> residual; // dE/dt - 2*flux + 2*dissipation at each time
    bool exactIdentity = true;    // telescoping holds exactly for all three couplings
};

/// Residual of the energy balance along a trajectory, with dE/dt taken from
/// the dense-output derivative.
EnergyBalance energyBalanceResidual(const Trajectory& traj, const std::vector<double>& times);

/// max over the given times of ||u(t)|| - ||u(0)|| - k_1 int_0^t |b_0|^2 dt'
/// (positive values violate the a-priori energy bound of the cutoff family).
double energyBoundExcess(const Trajectory& traj, const std::vector<double>& times);

/// Adaptive Simpson quadrature; used for the boundary-work integral.
double adaptiveSimpson(const std::function<double(double)>& f, double a, double b,
                       double tol = 1e-10);

} // namespace shellrg
