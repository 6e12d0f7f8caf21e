#pragma once

#include <string>
#include <variant>
#include <vector>

#include "shellrg/errors.hpp"

namespace shellrg {

/// Cutoff regularization: ideal dynamics at shells 1..N, quadratic dissipative
/// terms c |u| u at the J shells N+1..N+J, u_n = 0 beyond. The optional eps
/// perturbs the dissipative term to (1+eps) c |u| u.
struct CanonicalCutoff {
    int N = 0;
    int J = 1;
    std::vector<double> coeffs; // per dissipative shell, size J; empty = all 1
    double eps = 0.0;

    double coeff(int layer) const { // layer = 0..J-1 for shells N+1..N+J
        return coeffs.empty() ? 1.0 : coeffs.at(static_cast<size_t>(layer));
    }
};

/// Eddy-viscosity style regularization without cutoff:
/// du_n/dt = k_n f_n - beta (|u_N|/k_N) k_n^2 u_n.
struct Auxiliary {
    int N = 0;
    double beta = 1.0;
};

/// Plain viscous regularization: du_n/dt = k_n f_n - nu k_n^2 u_n.
struct Viscous {
    double nu = 1e-6;
};

using RegularizationSpec = std::variant<CanonicalCutoff, Auxiliary, Viscous>;

void validate(const RegularizationSpec& reg);

/// State length implied by the regularization: N+J for the cutoff family;
/// for Auxiliary/Viscous the caller chooses the truncation (0 = use default).
int impliedShells(const RegularizationSpec& reg, int requestedShells = 0);

/// Default truncation for the non-cutoff variants: M = N + ceil(10 + N/3),
/// with N for the viscous model taken from nu via the dissipation-scale
/// estimate N_eff = round(-(3/4) log2 nu). Amplitudes decay fast past the
/// dissipative range, and acceptance runs double M to confirm insensitivity.
int defaultShells(const RegularizationSpec& reg);

std::string describe(const RegularizationSpec& reg);

} // namespace shellrg
