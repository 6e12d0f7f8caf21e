#pragma once

#include "shellrg/boundary.hpp"
#include "shellrg/model.hpp"

namespace shellrg {

/// Time-scale symmetry: a -> alpha a, b(t) -> alpha b(alpha t). A base
/// solution u maps to alpha u(alpha t); canonical and auxiliary regularized
/// flows commute with this transform, the viscous one does not.
ShellState timeScaledIc(const ShellState& ic, double alpha);
BoundarySpec timeScaledBc(const BoundarySpec& bc, double alpha);

/// Space-shift symmetry: a~_n = lambda a_{n+1} (one shell shorter), paired
/// with the boundary (lambda b_0, lambda u_1) for two-boundary models or
/// lambda u_1 alone for the dyadic model.
ShellState spaceShiftedIc(const ShellState& ic);

/// Fibonacci phase sequence F_n = F_{n-1} + F_{n-2} extended from the seeds
/// (F_{-1}, F_0); returns F_1..F_count.
std::vector<double> fibonacciPhases(double fm1, double f0, int count);

/// Sabra phase symmetry: u_n -> e^{i F_n} u_n, b -> (e^{i F_{-1}} b_{-1},
/// e^{i F_0} b_0). Only valid for complex-kind models.
ShellState phaseShiftedIc(const ShellState& ic, double fm1, double f0);
BoundarySpec phaseShiftedBc(const BoundarySpec& bc, double fm1, double f0);

} // namespace shellrg
